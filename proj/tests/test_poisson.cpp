#include <doctest.h>

#include "mlab/operators.hpp"
#include "mlab/poisson.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

using namespace mlab;

namespace {

double c4_slope(int d, double delta) {
  std::vector<std::pair<double, double>> pts;
  for (double th : theta_sweep()) pts.emplace_back(th, c4_integral(th, d, delta).value);
  return theta_scaling_fit(pts).slope;
}

}  // namespace

TEST_CASE("poisson kernel values and normalization") {
  const std::array<double, 1> zero{0.0};
  CHECK(std::abs(poisson_kernel(zero, {1.0, 0.0, 1, false}) - cplx(1.0)) < 1e-15);
  CHECK(std::abs(poisson_kernel(zero, {2.0, 0.0, 1, false}) - cplx(0.5)) < 1e-15);

  const KernelParams p{0.7, 0.0, 1, true};
  const RealFn f = [&](double x) { return poisson_kernel_radial(x * x, p).real(); };
  const double mass = 2 * (integrate(f, 0.0, 1.0, 1e-12).value + integrate_to_infinity(f, 1.0, 1e-12).value);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));

  const std::array<double, 2> x2{0.3, 0.4};
  CHECK_THROWS_AS(poisson_kernel(x2, p), std::invalid_argument);
  CHECK_THROWS_AS(poisson_kernel(zero, {1.0, kPi / 2, 1, false}), std::invalid_argument);
  CHECK_THROWS_AS(poisson_kernel(zero, {0.0, 0.0, 1, false}), std::invalid_argument);
}

TEST_CASE("poisson kernel dilation identity") {
  for (int d : {1, 2, 3})
    for (double theta : {0.0, 0.9, -1.5})
      for (double t : {0.3, 2.0, 17.0})
        for (double r : {0.0, 0.5, 3.0, 40.0}) {
          const cplx lhs = poisson_kernel_radial(r * r, {t, theta, d, false});
          const cplx rhs = std::pow(t, -d) * poisson_kernel_radial(r * r / (t * t), {1.0, theta, d, false});
          CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(lhs));
        }
}

TEST_CASE("poisson semigroup convolution") {
  const double t = 0.8, s = 1.3, h = 0.01, half = 2000.0;
  const auto p = [](double tt, double x) { return poisson_kernel_radial(x * x, {tt, 0.0, 1, true}).real(); };
  const long n = static_cast<long>(half / h);
  for (double x : {0.0, 0.7, 2.5, 10.0}) {
    double sum = 0.0;
    for (long j = -n; j <= n; ++j) {
      const double y = h * static_cast<double>(j);
      sum += p(t, x - y) * p(s, y);
    }
    const double expect = p(t + s, x);
    CHECK(std::abs(sum * h - expect) < 1e-4 * expect);
  }
}

TEST_CASE("poisson kernel matches the torus semigroup kernel") {
  // e^{-e^{i theta} t A} on a long torus has the normalized kernel up to periodization.
  const TorusGrid g{1, 1u << 14, 2 * kPi * 64};
  const SymbolOperator a = laplacian_halfpower_symbol(g);
  for (double theta : {0.0, 0.6}) {
    const GridField k = kernel(semigroup_operator(a, 1.0, theta));
    const KernelParams kp{1.0, theta, 1, true};
    double worst = 0.0;
    for (std::size_t j = 0; j < g.points; ++j) {
      double x = g.spacing() * static_cast<double>(j);
      if (x > g.period / 2) x -= g.period;
      if (std::abs(x) > 5.0) continue;
      const cplx exact = poisson_kernel_radial(x * x, kp);
      worst = std::max(worst, std::abs(k.values[j] - exact) / std::abs(exact));
    }
    CHECK(worst < 1e-3);
  }
}

TEST_CASE("c4 anchors and scaling") {
  CHECK(c4_integral(0.0, 1, 0.0).value == doctest::Approx(kPi).epsilon(1e-8));
  CHECK(c4_integral(0.0, 3, 0.0).value == doctest::Approx(kPi * kPi).epsilon(1e-8));
  CHECK(std::abs(c4_slope(2, 0.5) + 0.5) <= 0.1);
  CHECK(std::abs(c4_slope(3, 0.5) + 1.0) <= 0.1);
  CHECK_THROWS_AS(c4_integral(0.0, 2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(c4_integral(kPi / 2, 2, 0.5), std::invalid_argument);
}

TEST_CASE("c2 terms") {
  const double c = 2.5;
  for (double theta : {0.0, 1.2, 1.55}) {
    const C2Result r = c2_integral(cplx(1.0, 0.0), theta, 2, c);
    CHECK(r.term1 == 0.0);
    CHECK(r.converged);
  }
  const C2Result a = c2_integral(cplx(1.0, 1.0), 0.2, 2, c, 1e-12);
  const C2Result b = c2_integral(cplx(1.0, 1.0), 1.5, 2, c, 1e-12);
  CHECK(std::abs(a.term2 - b.term2) <= 1e-10 * a.term2);
  CHECK(b.term1 > a.term1);
  // The split drops the factors 2a = d + 1 and c of the exact gradient.
  const double factor = std::max(3.0, c);
  CHECK(a.exact <= factor * a.value());
  CHECK(b.exact <= factor * b.value());
  CHECK_THROWS_AS(c2_integral(cplx(0.5, 1.0), 0.2, 2, c), std::invalid_argument);
  CHECK_THROWS_AS(c2_integral(cplx(1.0, 1.0), 0.2, 2, 1.0), std::invalid_argument);
}

TEST_CASE("c3 limits and outer majorant") {
  const double c3 = c3_integral(1e-7, 0.0, 3, 3.5).value();
  CHECK(c3 == doctest::Approx(c4_integral(0.0, 3, 0.0).value).epsilon(1e-4));

  const int d = 2;
  const double eps = 0.1, c = d + 0.5, a = (d + 1) / 2.0;
  const RealFn majorant = [&](double r) { return std::pow(r * r - 1, -a * (1 + eps)) * std::pow(1 + r, c * eps) * r; };
  const double bound = sphere_area(d) * integrate_to_infinity(majorant, 2.0, 1e-10).value;
  for (double theta : theta_sweep()) {
    const C3Result r = c3_integral(eps, theta, d, c);
    CHECK(r.converged);
    CHECK(r.outer <= bound * (1 + 1e-8));
  }
  CHECK_THROWS_AS(c3_integral(0.5, 0.0, 2, 6.0), std::invalid_argument);
  CHECK_THROWS_AS(c3_integral(0.0, 0.0, 2, 2.5), std::invalid_argument);
}

TEST_CASE("C-integrals increase with |theta| and are even in theta") {
  const std::vector<double> thetas{0.0, 0.5, 1.0, 1.3, 1.5, 1.56};
  for (int d : {1, 2, 3}) {
    const double c = d + 0.5;
    double c4_prev = 0, c3_prev = 0, c2_prev = 0;
    for (double th : thetas) {
      const double c4 = c4_integral(th, d, 0.5).value;
      const double c3 = c3_integral(0.1, th, d, c).value();
      const double c2 = c2_integral(cplx(1.0, 1.0), th, d, c).value();
      CHECK(c4 > c4_prev);
      CHECK(c3 > c3_prev);
      CHECK(c2 > c2_prev);
      c4_prev = c4;
      c3_prev = c3;
      c2_prev = c2;
      CHECK(c4_integral(-th, d, 0.5).value == doctest::Approx(c4).epsilon(1e-12));
    }
  }
}

TEST_CASE("hormander integral") {
  const KernelParams p1{1.0, 0.0, 1, false};
  CHECK(hormander_integral(0.0, p1, 3).value == 0.0);

  // d = 1, theta = 0: the integrand has a fixed sign on each half-line.
  for (double y : {0.1, 1.0, 7.0})
    for (int k : {-3, 0, 2}) {
      const double t = std::ldexp(1.0, k);
      const HormanderResult r = hormander_integral(y, p1, k);
      CHECK(r.converged);
      CHECK(r.tail_bound <= 1e-8 * r.value);
      CHECK(r.value == doctest::Approx(std::atan(3 * y / t) - std::atan(y / t)).epsilon(1e-7));
    }

  // Self-similarity: (y, k) and (2^{-k} y, 0) give the same integral.
  for (int d : {1, 2})
    for (double theta : {0.4, 1.45}) {
      const KernelParams p{1.0, theta, d, false};
      for (int k : {-2, 3}) {
        const double lhs = hormander_integral(1.0, p, k).value;
        const double rhs = hormander_integral(std::ldexp(1.0, -k), p, 0).value;
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-6));
      }
    }

  // Angular and radial reductions agree with a direct 2-D sum at moderate accuracy.
  const KernelParams p2{1.0, 0.7, 2, false};
  const double y = 1.0, h = 0.04, big = 40.0;
  double direct = 0.0;
  for (double u = -big; u <= big; u += h)
    for (double v = -big; v <= big; v += h) {
      const double r2 = u * u + v * v;
      if (r2 < 4 * y * y) continue;
      direct += std::abs(poisson_kernel_radial((u - y) * (u - y) + v * v, p2) - poisson_kernel_radial(r2, p2));
    }
  direct *= h * h;
  const HormanderResult quad = hormander_integral(y, p2, 0);
  CHECK(direct == doctest::Approx(quad.value).epsilon(2e-2));

  CHECK_THROWS_AS(hormander_integral(-1.0, p1, 0), std::invalid_argument);
}

TEST_CASE("dini bound and exponents") {
  CHECK(dini_bound(1, 1, 1, 1.0, 0.5) == doctest::Approx(4.0));
  const double base = dini_bound(2, 3, 5, 0.1, 0.5);
  CHECK(dini_bound(2.1, 3, 5, 0.1, 0.5) > base);
  CHECK(dini_bound(2, 3.1, 5, 0.1, 0.5) > base);
  CHECK(dini_bound(2, 3, 5.1, 0.1, 0.5) > base);
  CHECK_THROWS_AS(dini_bound(0, 1, 1, 0.1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(dini_bound(1, 1, 1, 0.1, 1.0), std::invalid_argument);

  for (int d : {1, 2, 3})
    for (double eps : {0.05, 0.1, 0.2}) {
      const DiniExponents e = dini_exponents(d, eps);
      CHECK(e.eps_tilde == doctest::Approx(2 * eps / (1 + eps)).epsilon(1e-14));
      CHECK(e.identity == doctest::Approx(e.stated).epsilon(1e-14));
      CHECK(e.simplified - e.identity == doctest::Approx(2 * e.eps_tilde).epsilon(1e-14));
    }
}

TEST_CASE("theta scaling fit") {
  std::vector<std::pair<double, double>> power, flat;
  for (double th : theta_sweep()) {
    power.emplace_back(th, 3.0 * std::pow(theta_gap(th), -0.7));
    flat.emplace_back(th, 2.5);
  }
  CHECK(std::abs(theta_scaling_fit(power).slope + 0.7) < 1e-12);
  CHECK(std::abs(theta_scaling_fit(flat).slope) < 1e-12);
  power.resize(3);
  CHECK_THROWS_AS(theta_scaling_fit(power), std::invalid_argument);
  flat[0].second = 0.0;
  CHECK_THROWS_AS(theta_scaling_fit(flat), std::invalid_argument);
  CHECK(theta_sweep().size() == 9);
  CHECK(theta_sweep().front() == doctest::Approx(kPi / 2 - 0.25));
}
