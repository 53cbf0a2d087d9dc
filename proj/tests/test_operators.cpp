#include <doctest.h>

#include "mlab/fit.hpp"
#include "mlab/operators.hpp"
#include "mlab/random.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace mlab;

namespace {

TorusGrid grid1(std::size_t n, double period = 2 * kPi) { return {1, n, period}; }

GridField random_field(Rng& rng, const TorusGrid& g) {
  GridField f = GridField::zeros(g);
  for (auto& v : f.values) v = rng.complex_normal();
  return f;
}

// Field whose spectrum lives on the given bins (1-D).
GridField modes(const TorusGrid& g, const std::vector<std::pair<int, cplx>>& bins) {
  GridField f = GridField::zeros(g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.spacing() * static_cast<double>(j);
    for (const auto& [k, c] : bins) f.values[j] += c * std::polar(1.0, 2 * kPi * k * x / g.period);
  }
  return f;
}

SymbolOperator random_symbol(Rng& rng, const TorusGrid& g, bool even) {
  SymbolOperator t{g, VectorXcd(g.size()), "random"};
  for (std::size_t j = 0; j < g.size(); ++j) t.symbol[j] = rng.normal();
  if (even)
    for (std::size_t j = 1; j < g.size() / 2; ++j) t.symbol[g.size() - j] = t.symbol[j];
  return t;
}

// Dense DFT matrix of a 1-D multiplier.
Eigen::MatrixXcd dense(const SymbolOperator& t) {
  const auto n = static_cast<Eigen::Index>(t.grid.size());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    GridField e = GridField::zeros(t.grid);
    e.values[c] = 1.0;
    m.col(c) = t.apply(e).values;
  }
  return m;
}

double plain_norm(const VectorXcd& v, double p) { return std::pow(v.cwiseAbs().array().pow(p).sum(), 1.0 / p); }

VectorXcd dual(const VectorXcd& v, double p) {
  const double n = plain_norm(v, p);
  VectorXcd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    out[i] = a == 0 ? cplx(0) : v[i] / a * std::pow(a / n, p - 1);
  }
  return out;
}

// Independent brute force: Boyd ascent on the dense matrix from random starts.
double dense_pnorm(const Eigen::MatrixXcd& m, double p, int starts, Rng& rng) {
  const double q = p / (p - 1);
  double best = 0;
  for (int s = 0; s < starts; ++s) {
    VectorXcd x(m.cols());
    for (auto& v : x) v = rng.complex_normal();
    x /= plain_norm(x, p);
    double val = 0;
    for (int it = 0; it < 500; ++it) {
      const VectorXcd y = m * x;
      const double ny = plain_norm(y, p);
      if (ny <= val * (1 + 1e-14)) break;
      val = ny;
      const VectorXcd z = m.adjoint() * dual(y, p);
      x = dual(z, q);
      x /= plain_norm(x, p);
    }
    best = std::max(best, val);
  }
  return best;
}

}  // namespace

TEST_CASE("laplacian_halfpower_symbol") {
  const TorusGrid g = grid1(64, 10.0);
  const auto a = laplacian_halfpower_symbol(g);
  CHECK(a.symbol[0] == cplx(0.0));
  for (int k : {1, 5, 31}) CHECK(a.symbol[k].real() == doctest::Approx(2 * kPi * k / 10.0).epsilon(1e-15));
  CHECK(a.symbol[63].real() == doctest::Approx(2 * kPi / 10.0).epsilon(1e-15));
  CHECK(a.nonnegative_real());

  for (int d : {1, 2, 3}) {
    const TorusGrid gd{d, 64, 2 * kPi};
    const auto c = laplacian_halfpower_symbol(gd);
    const auto s = laplacian_halfpower_symbol(gd, SymbolVariant::Discrete);
    for (std::size_t i = 1; i < gd.size(); ++i) {
      if (c.symbol[i].real() * gd.spacing() > 0.1) continue;
      CHECK(std::abs(s.symbol[i].real() - c.symbol[i].real()) < 1e-3 * c.symbol[i].real());
    }
  }
  CHECK_THROWS_AS(laplacian_halfpower_symbol(TorusGrid{4, 8, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(laplacian_halfpower_symbol(TorusGrid{1, 12, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(laplacian_halfpower_symbol(TorusGrid{3, 512, 1.0}), std::invalid_argument);
}

TEST_CASE("apply_multiplier") {
  Rng rng(3);
  const TorusGrid g = grid1(64);
  const auto a = laplacian_halfpower_symbol(g);
  const auto x = random_field(rng, g);
  CHECK((apply_multiplier(FuncExpr::constant(1.0), a, x).values - x.values).cwiseAbs().maxCoeff() < 1e-14);

  const auto low = modes(g, {{1, 1.0}, {-3, cplx(0, 2)}, {2, 0.5}});
  const auto window = parse("exp(-(x/20)^40)");
  CHECK((apply_multiplier(window, a, low).values - low.values).cwiseAbs().maxCoeff() < 1e-12);

  const auto twice = a.apply(a.apply(x));
  CHECK((apply_multiplier(parse("x^2"), a, x).values - twice.values).cwiseAbs().maxCoeff() < 1e-10);

  // Composition of multipliers is the product of the functions.
  const auto f = FuncExpr::f_alpha(1.5, 2.0), h = parse("exp(-x/7)*cos(x)");
  const auto fh = apply_multiplier(f, a, apply_multiplier(h, a, x));
  CHECK((fh.values - apply_multiplier(f * h, a, x).values).cwiseAbs().maxCoeff() < 1e-10);

  // f undefined at the zero mode: explicit failure unless projected.
  const auto inv = parse("1/x", Domain::Positive);
  CHECK_THROWS_AS(apply_multiplier(inv, a, x), DomainError);
  const auto projected = apply_multiplier(inv, a, x, ZeroFrequency::Project);
  CHECK(std::abs(projected.values.sum()) < 1e-12);
}

TEST_CASE("lp_norm") {
  for (int d : {1, 2, 3}) {
    const TorusGrid g{d, 16, 3.0};
    GridField cell = GridField::zeros(g);
    cell.values[5] = 1.0;
    CHECK(lp_norm(cell, 1) == doctest::Approx(g.cell_volume()).epsilon(1e-14));
    GridField ones{g, VectorXcd::Ones(g.size())};
    for (double p : {1.0, 2.0, 3.5}) CHECK(lp_norm(ones, p) == doctest::Approx(std::pow(3.0, d / p)).epsilon(1e-13));
    CHECK(lp_norm(ones, kInfinity) == 1.0);
  }
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_field(rng, TorusGrid{2, 16, 5.0});
    CHECK(lp_norm(f, 2) <= std::sqrt(lp_norm(f, 1) * lp_norm(f, kInfinity)) * (1 + 1e-12));
  }
  CHECK_THROWS_AS(lp_norm(GridField::zeros(grid1(8)), 0.5), std::invalid_argument);
}

TEST_CASE("opnorm_estimate: identity and Plancherel") {
  Rng rng(19);
  const TorusGrid g = grid1(256);
  const SymbolOperator id{g, VectorXcd::Ones(256), "I"};
  for (double p : {1.5, 2.0, 3.0, 6.0}) {
    const auto r = opnorm_estimate(id, p);
    CHECK(r.lower_bound == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(lp_norm(id.apply(r.certificate), p) == doctest::Approx(r.lower_bound).epsilon(1e-10));
  }
  for (int trial = 0; trial < 10; ++trial) {
    SymbolOperator t = random_symbol(rng, trial % 2 ? g : TorusGrid{2, 32, 3.0}, false);
    for (auto& s : t.symbol) s *= std::polar(1.0, rng.uniform() * 2 * kPi);
    CHECK(std::abs(opnorm_estimate(t, 2.0).lower_bound - t.sup_abs()) < 1e-6);
  }
  CHECK_THROWS_AS(opnorm_estimate(id, 1.0), std::invalid_argument);
}

TEST_CASE("opnorm_estimate: dense brute-force oracle") {
  Rng rng(2024);
  const TorusGrid g = grid1(64);
  for (int trial = 0; trial < 3; ++trial) {
    const auto t = random_symbol(rng, g, false);
    const double fast = opnorm_estimate(t, 3.0).lower_bound;
    const double slow = dense_pnorm(dense(t), 3.0, 200, rng);
    CAPTURE(trial);
    CHECK(std::abs(fast - slow) <= 1e-4 * slow);
    CHECK(fast >= t.sup_abs() * (1 - 1e-12));
  }
}

TEST_CASE("opnorm_estimate: duality for symmetric real symbols") {
  Rng rng(8);
  const TorusGrid g = grid1(128);
  for (int trial = 0; trial < 4; ++trial) {
    const auto t = random_symbol(rng, g, true);
    for (double p : {3.0, 4.0}) {
      const double a = opnorm_estimate(t, p).lower_bound;
      const double b = opnorm_estimate(t, p / (p - 1)).lower_bound;
      CHECK(std::abs(a - b) <= 0.02 * std::max(a, b));
    }
  }
}

TEST_CASE("square_function_norm") {
  Rng rng(4);
  const TorusGrid g{2, 16, 2.0};
  const auto f = random_field(rng, g);
  for (double p : {1.0, 2.0, 4.0}) {
    CHECK(square_function_norm(std::vector<GridField>{f}, p) == doctest::Approx(lp_norm(f, p)).epsilon(1e-14));
    CHECK(square_function_norm(std::vector<GridField>(5, f), p) == doctest::Approx(std::sqrt(5.0) * lp_norm(f, p)).epsilon(1e-13));
  }
  GridField a = f, b = f;
  for (std::size_t i = 0; i < g.size(); ++i) (i % 3 ? a : b).values[i] = 0.0;
  const double s = square_function_norm(std::vector<GridField>{a, b}, 2);
  CHECK(std::abs(s * s - (std::pow(lp_norm(a, 2), 2) + std::pow(lp_norm(b, 2), 2))) < 1e-12 * s * s);
  CHECK_THROWS_AS(square_function_norm(std::vector<GridField>{}, 2), std::invalid_argument);
}

TEST_CASE("gaussian_sum_norm") {
  Rng rng(31);
  const TorusGrid g = grid1(128, 3.0);
  const auto f = random_field(rng, g);
  const auto one = gaussian_sum_norm(std::vector<GridField>{f}, 3.0, 2000, 1);
  CHECK(std::abs(one.estimate - lp_norm(f, 3.0)) <= 3 * one.standard_error);

  std::vector<GridField> fam;
  double sq = 0;
  for (int k = 0; k < 6; ++k) {
    fam.push_back(random_field(rng, g));
    sq += std::pow(lp_norm(fam.back(), 2), 2);
  }
  const auto two = gaussian_sum_norm(fam, 2.0, 2000, 7);
  CHECK(std::abs(two.estimate - std::sqrt(sq)) <= 3 * two.standard_error);
  const auto again = gaussian_sum_norm(fam, 2.0, 2000, 7);
  CHECK(again.estimate == two.estimate);

  // At p = 4 the ratio to the square function lies in [1, 3^{1/4}].
  std::vector<double> ratios;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<GridField> xs;
    for (int k = 0; k < 8; ++k) xs.push_back(random_field(rng, g));
    const auto est = gaussian_sum_norm(xs, 4.0, 400, 100 + trial);
    ratios.push_back(est.estimate / square_function_norm(xs, 4.0));
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  MESSAGE("p=4 Gaussian/square-function band [" << *lo << ", " << *hi << "]");
  CHECK(*lo >= 0.97);
  CHECK(*hi <= std::pow(3.0, 0.25) + 0.03);
  CHECK_THROWS_AS(gaussian_sum_norm(fam, 2.0, 50, 1), std::invalid_argument);
}

TEST_CASE("gamma_bound_estimate") {
  const TorusGrid g = grid1(128);
  OperatorFamily ident{{SymbolOperator{g, VectorXcd::Ones(128), "I"}}, {}, {}};
  CHECK(gamma_bound_estimate(ident, 3.0).estimate == doctest::Approx(1.0).epsilon(1e-10));

  Rng rng(12);
  OperatorFamily contractions;
  for (int k = 0; k < 12; ++k) {
    const double c = 2 * rng.uniform() - 1;
    contractions.members.push_back({g, VectorXcd::Constant(128, c), "cI"});
  }
  for (double p : {1.5, 4.0}) {
    CHECK(gamma_bound_estimate(contractions, p).estimate <= 1.0 + 1e-12);
    GammaOptions go;
    go.gaussian = true;
    const auto r = gamma_bound_estimate(contractions, p, go);
    CHECK(r.estimate <= 1.0 + 3 * r.standard_error);
  }

  // Hilbert space: gamma bound equals the uniform bound.
  OperatorFamily fam;
  for (int k = 0; k < 6; ++k) {
    SymbolOperator t = random_symbol(rng, g, false);
    t.symbol *= 0.3 * (k + 1);
    fam.members.push_back(t);
  }
  double sup = 0;
  for (const auto& t : fam.members) sup = std::max(sup, t.sup_abs());
  CHECK(std::abs(gamma_bound_estimate(fam, 2.0).estimate - sup) < 1e-3);
  CHECK(gamma_bound_estimate(fam, 3.0).estimate >= sup * (1 - 1e-12));

  GammaOptions few;
  few.trials = 5;
  CHECK_THROWS_AS(gamma_bound_estimate(fam, 2.0, few), std::invalid_argument);
}

TEST_CASE("paley_littlewood_ratio") {
  const TorusGrid g = grid1(256);
  const auto a = laplacian_halfpower_symbol(g);
  const auto fam = dyadic_partition(-2, 9);
  // Bin 8 sits at the centre of window 3, where it equals 1.
  const auto x = modes(g, {{8, 1.0}, {-8, cplx(0.3, 1)}});
  CHECK(paley_littlewood_ratio(a, fam, x, 2.0) == doctest::Approx(1.0).epsilon(1e-12));

  Rng rng(99);
  std::vector<double> r4;
  for (int trial = 0; trial < 100; ++trial) {
    const auto y = random_field(rng, g);
    const double r2 = paley_littlewood_ratio(a, fam, y, 2.0);
    CHECK(r2 >= std::sqrt(0.5) - 1e-12);
    CHECK(r2 <= 1.0 + 1e-12);
    r4.push_back(paley_littlewood_ratio(a, fam, y, 4.0));
    if (trial < 10) {
      const auto parts = paley_littlewood_components(a, fam, y);
      GridField sum = GridField::zeros(g);
      for (const auto& p : parts) sum.values += p.values;
      CHECK((sum.values - project_mean_zero(y).values).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
  const auto [lo, hi] = std::minmax_element(r4.begin(), r4.end());
  MESSAGE("p=4 ratio range [" << *lo << ", " << *hi << "]");
  CHECK(*hi / *lo < 10.0);

  CHECK_THROWS_AS(paley_littlewood_ratio(a, dyadic_partition(0, 3), x, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(paley_littlewood_ratio(a, fam, GridField{g, VectorXcd::Ones(256)}, 2.0), std::invalid_argument);
}

TEST_CASE("resolvent_check") {
  const TorusGrid g = grid1(256);
  const auto a = laplacian_halfpower_symbol(g);
  const std::vector<cplx> negative{-0.5, -3.0, -100.0};
  CHECK(resolvent_check(a, kPi / 4, negative).max_value <= 1.0);
  const std::vector<cplx> imaginary{cplx(0, 1), cplx(0, 7.5), cplx(0, -40)};
  CHECK(resolvent_check(a, kPi / 4, imaginary).max_value == doctest::Approx(1.0).epsilon(1e-15));

  // Rays just outside the sector; Re(lambda) is a symbol value so the sup is attained.
  for (double phi : {kPi / 4 + 0.05, kPi / 3, kPi / 2 - 0.1}) {
    for (int k : {1, 9, 60}) {
      const std::vector<cplx> lam{cplx(k, k * std::tan(phi))};
      CHECK(resolvent_check(a, kPi / 4, lam).max_value == doctest::Approx(1.0 / std::sin(phi)).epsilon(1e-6));
    }
  }
  const std::vector<cplx> lam{cplx(5, 5 * std::tan(kPi / 3))};
  CHECK(resolvent_check(a, kPi / 4, lam, 4.0).max_value >= resolvent_check(a, kPi / 4, lam).max_value * (1 - 1e-12));
  const std::vector<cplx> inside{cplx(3, 1)};
  CHECK_THROWS_AS(resolvent_check(a, kPi / 4, inside), std::invalid_argument);
}

TEST_CASE("semigroup_operator") {
  const TorusGrid g = grid1(512, 50.0);
  const auto a = laplacian_halfpower_symbol(g);
  const auto tiny = semigroup_operator(a, 1e-12, 0.3);
  CHECK((tiny.symbol.array() - 1.0).abs().maxCoeff() < 1e-9);
  const auto s1 = semigroup_operator(a, 0.7, 0.0), s2 = semigroup_operator(a, 1.6, 0.0);
  CHECK((s1.compose(s2).symbol - semigroup_operator(a, 2.3, 0.0).symbol).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(semigroup_operator(a, 1.0, 1.2).sup_abs() == doctest::Approx(1.0));
  CHECK_THROWS_AS(semigroup_operator(a, 1.0, kPi / 2), std::invalid_argument);
  CHECK_THROWS_AS(semigroup_operator(a.compose(SymbolOperator{g, VectorXcd::Constant(512, cplx(0, 1)), "i"}), 1, 0),
                  std::invalid_argument);
}

TEST_CASE("wave_family") {
  const TorusGrid g = grid1(256);
  const auto a = laplacian_halfpower_symbol(g);
  const auto f0 = wave_family(a, 0.5, 0.5, 0.0, 0, 0);
  REQUIRE(f0.members.size() == 1);
  for (std::size_t i = 0; i < 256; ++i)
    CHECK(std::abs(f0.members[0].symbol[i] - std::pow(1.0 + a.symbol[i].real(), -0.5)) < 1e-15);
  CHECK(opnorm_estimate(f0.members[0], 2.0).lower_bound == doctest::Approx(1.0).epsilon(1e-12));

  const auto unimodular = wave_family(a, 0.5, 0.0, 3.7, -3, 3);
  CHECK_FALSE(unimodular.notes.empty());
  for (const auto& m : unimodular.members) CHECK((m.symbol.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-14);

  std::vector<std::pair<double, double>> pts;
  for (double t : {1.0, 4.0, 16.0, 64.0}) {
    double sup = 0;
    for (const auto& m : wave_family(a, 0.6, 0.6, t, -2, 2).members) sup = std::max(sup, opnorm_estimate(m, 2.0).lower_bound);
    pts.emplace_back(t, sup);
  }
  CHECK(std::abs(fit_growth_exponent(pts).slope) < 1e-9);
  CHECK_THROWS_AS(wave_family(a, 0.0, 1.0, 1.0, 0, 1), std::invalid_argument);
}

TEST_CASE("field serialization") {
  Rng rng(1);
  const auto f = random_field(rng, TorusGrid{2, 8, 3.5});
  std::stringstream ss;
  write_field(ss, f);
  const auto back = read_field(ss);
  CHECK(back.grid == f.grid);
  CHECK(back.values == f.values);
  std::stringstream bad("xx");
  CHECK_THROWS(read_field(bad));
}
