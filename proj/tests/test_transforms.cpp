#include <doctest.h>

#include "mlab/fft.hpp"
#include "mlab/random.hpp"
#include "mlab/transforms.hpp"

#include <cmath>
#include <sstream>

using namespace mlab;

namespace {

// Random trigonometric polynomial with `modes` integer bins in [k_lo, k_hi].
SampledFunction random_trig(Rng& rng, std::size_t n, double period, int k_lo, int k_hi, int modes) {
  SampledFunction f{0.0, period / n, VectorXcd::Zero(n), true};
  for (int m = 0; m < modes; ++m) {
    const int k = k_lo + static_cast<int>(rng.index(k_hi - k_lo + 1));
    const cplx c = rng.complex_normal();
    for (std::size_t j = 0; j < n; ++j) f.values[j] += c * std::polar(1.0, 2 * kPi * k * f.x(j) / period);
  }
  return f;
}

double max_abs_diff(const SampledFunction& a, const SampledFunction& b) { return (a.values - b.values).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("sample") {
  const auto ones = sample(FuncExpr::constant(1.0), -3, 0.1, 16);
  CHECK(ones.values == VectorXcd::Ones(16));
  const auto fa = sample(FuncExpr::f_alpha(1, 0), 0, 1, 4);
  for (int j = 0; j < 4; ++j) CHECK(std::abs(fa.values[j] - 1.0 / (1 + j)) < 1e-16);
  const auto p = sample(parse("exp(-x^2)"), -4, 8.0 / 256, 256);
  const auto g = sample(FuncExpr::gaussian(1.0), -4, 8.0 / 256, 256);
  for (int j = 0; j < 256; ++j) CHECK(std::abs(p.values[j] - g.values[j]) <= 1e-14 * std::abs(g.values[j]));
  CHECK_THROWS_AS(sample(FuncExpr::constant(1.0), 0, 1, 12), std::invalid_argument);
  CHECK_THROWS_AS(sample(FuncExpr::f_alpha(1, 0), -1, 1, 4), DomainError);
}

TEST_CASE("band_component: trivial identities") {
  const auto fam = equidistant_partition(-20, 20);
  SampledFunction zero{0.0, 0.25, VectorXcd::Zero(64), true};
  CHECK(band_component(zero, fam.window(2)).component.values.cwiseAbs().maxCoeff() == 0.0);
  // A mode at xi = 3 exactly, where phi_3 = 1.
  const double period = 2 * kPi * 4;
  SampledFunction mod{0.0, period / 128, VectorXcd(128), true};
  for (int j = 0; j < 128; ++j) mod.values[j] = std::polar(1.0, 3.0 * mod.x(j));
  const auto bc = band_component(mod, fam.window(3), 3);
  CHECK(max_abs_diff(bc.component, mod) < 1e-10);
  CHECK(bc.band_index == 3);
  CHECK(bc.truncation_error_bound == 0.0);
  CHECK(band_component(mod, fam.window(5)).component.values.cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(band_component(mod, fam.window(20)), std::invalid_argument);
}

TEST_CASE("oracle: trivial identities") {
  const auto fam = equidistant_partition(-4, 4);
  SampledFunction zero{0.0, 0.25, VectorXcd::Zero(64), true};
  CHECK(direct_convolution_oracle(zero, fam.window(1)).values.cwiseAbs().maxCoeff() == 0.0);
  SampledFunction one{0.0, 0.25, VectorXcd::Ones(64), true};
  const auto out = direct_convolution_oracle(one, fam.window(0));
  CHECK((out.values.array() - 1.0).abs().maxCoeff() < 1e-10);
  const auto out1 = direct_convolution_oracle(one, fam.window(1));
  CHECK(out1.values.cwiseAbs().maxCoeff() < 1e-10);
  SampledFunction big{0.0, 1.0, VectorXcd::Zero(8192), true};
  CHECK_THROWS_AS(direct_convolution_oracle(big, fam.window(0)), std::invalid_argument);
}

TEST_CASE("band_component agrees with the quadrature oracle") {
  Rng rng(77);
  const auto eq = equidistant_partition(-10, 10);
  const auto dy = dyadic_fourier_partition(4);
  const std::vector<Window> windows{eq.window(0), eq.window(3), eq.window(-2), dy.window(2), dy.window(-3)};
  const double period = 64.0;
  for (int trial = 0; trial < 6; ++trial) {
    const Window& w = windows[trial % windows.size()];
    const int k_lo = static_cast<int>(std::floor(w.lo * period / (2 * kPi))) - 2;
    const int k_hi = static_cast<int>(std::ceil(w.hi * period / (2 * kPi))) + 2;
    const auto f = random_trig(rng, 256, period, k_lo, k_hi, 11);
    const double err = max_abs_diff(band_component(f, w).component, direct_convolution_oracle(f, w));
    CHECK(err < 1e-8);
  }
}

TEST_CASE("sup_norm") {
  SampledFunction ones{0, 0.1, VectorXcd::Ones(32), false};
  CHECK(sup_norm(ones) == 1.0);
  SampledFunction rot{0, 0.1, VectorXcd::Constant(32, std::polar(2.5, 0.7)), false};
  CHECK(std::abs(sup_norm(rot) - 2.5) < 1e-14);
  // Offset grid so no sample sits on the peak.
  SampledFunction s{0.3, 2 * kPi / 1024, VectorXcd(1024), true};
  for (int j = 0; j < 1024; ++j) s.values[j] = std::sin(s.x(j));
  CHECK(std::abs(sup_norm(s) - 1.0) < 1e-6);
  // Coarse grid: refinement must recover most of the gap.
  SampledFunction c{0.0, 2 * kPi / 16, VectorXcd(16), true};
  for (int j = 0; j < 16; ++j) c.values[j] = std::cos(3 * c.x(j) + 0.2);
  CHECK(sup_norm(c) > c.values.cwiseAbs().maxCoeff());
  CHECK(sup_norm(c) <= 1.0 + 1e-12);
}

TEST_CASE("spectrum band statistics match materialised components") {
  Rng rng(9);
  const auto fam = dyadic_fourier_partition(4);
  const auto f = random_trig(rng, 512, 80.0, -200, 200, 30);
  const Spectrum s(f);
  for (int n = -4; n <= 4; ++n) {
    const auto st = s.band(fam.window(n));
    const double direct = sup_norm(s.component(fam.window(n)));
    CHECK(std::abs(st.sup - direct) <= 2e-3 * direct + 1e-12);
  }
}

TEST_CASE("property: reconstruction, Parseval and linearity") {
  Rng rng(10);
  const auto fam = dyadic_fourier_partition(6);
  for (int trial = 0; trial < 10; ++trial) {
    SampledFunction f{-10, 20.0 / 512, VectorXcd(512), false};
    const double w = 0.5 + rng.uniform(), c = rng.normal(), xi = 10 * rng.normal();
    for (int j = 0; j < 512; ++j) f.values[j] = std::exp(-std::pow((f.x(j) - c) / w, 2)) * std::polar(1.0, xi * f.x(j));
    const Spectrum s(f);
    VectorXcd sum = VectorXcd::Zero(512);
    double bounds = 0;
    for (int n = -6; n <= 6; ++n) {
      const auto bc = band_component(f, fam.window(n), n);
      sum += bc.component.values;
      bounds += bc.truncation_error_bound;
    }
    CHECK((sum - f.values).cwiseAbs().maxCoeff() < bounds + 1e-10);
    const VectorXcd F = fft(f.values);
    CHECK(std::abs(F.norm() / std::sqrt(512.0) - f.values.norm()) < 1e-12 * f.values.norm());
    SampledFunction g = f;
    for (int j = 0; j < 512; ++j) g.values[j] = rng.complex_normal();
    const cplx a(rng.normal(), rng.normal()), b(rng.normal(), rng.normal());
    SampledFunction h = f;
    h.values = a * f.values + b * g.values;
    const Window win = fam.window(static_cast<int>(rng.index(9)) - 4);
    const VectorXcd lhs = band_component(h, win).component.values;
    const VectorXcd rhs = a * band_component(f, win).component.values + b * band_component(g, win).component.values;
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12 * (1 + rhs.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("serialization") {
  SampledFunction f{-1.5, 0.125, VectorXcd(8), false};
  for (int j = 0; j < 8; ++j) f.values[j] = cplx(j * 0.1, -j / 3.0);
  std::stringstream csv;
  write_csv(csv, f);
  const auto g = read_csv(csv);
  CHECK(g.origin == f.origin);
  CHECK(std::abs(g.step - f.step) < 1e-15);
  CHECK(g.values == f.values);
  std::stringstream bin;
  write_binary(bin, f);
  CHECK(bin.str().size() == 24 + 16 * 8);
  const auto h = read_binary(bin);
  CHECK(h.values == f.values);
  CHECK(h.step == f.step);
  std::stringstream bad("x,re,im\n0,1,0\n");
  CHECK_THROWS(read_csv(bad));
}
