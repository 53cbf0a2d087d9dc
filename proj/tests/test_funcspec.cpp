#include <doctest.h>

#include "mlab/funcspec.hpp"
#include "mlab/random.hpp"

#include <cmath>

using namespace mlab;

namespace {

double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

// Random parse-able expression over x, depth-limited.
std::string random_expression(Rng& rng, int depth) {
  if (depth == 0 || rng.uniform() < 0.25) {
    const double u = rng.uniform();
    if (u < 0.5) return "x";
    if (u < 0.75) return std::to_string(0.5 + 2.0 * rng.uniform());
    return "(" + std::to_string(rng.uniform()) + "+" + std::to_string(rng.uniform()) + "i)";
  }
  const std::string a = random_expression(rng, depth - 1);
  const std::string b = random_expression(rng, depth - 1);
  switch (rng.index(9)) {
    case 0: return "(" + a + "+" + b + ")";
    case 1: return "(" + a + "-" + b + ")";
    case 2: return "(" + a + "*" + b + ")";
    case 3: return "(" + a + ")/(2+(" + b + ")*(" + b + "))";
    case 4: return "exp(-(" + a + ")*(" + a + ")/4)";
    case 5: return "sin(" + a + ")";
    case 6: return "cos(" + b + ")";
    case 7: return "abs(" + a + ")^1.5";
    default: return "-" + a;
  }
}

}  // namespace

TEST_CASE("bracket notation") {
  CHECK(bracket(0.0) == 1.0);
  CHECK(bracket(-2.5) == bracket(2.5));
  CHECK(bracket(-3.0) == 4.0);
}

TEST_CASE("parse: direct arithmetic") {
  CHECK(std::abs(parse("exp(-x)")(0.0) - cplx(1.0)) == 0.0);
  CHECK(std::abs(parse("(1+x)^(-2)")(1.0) - cplx(0.25)) < 1e-15);
  CHECK(std::abs(parse("2^3^2")(0.0) - cplx(512.0)) < 1e-12);
  CHECK(std::abs(parse("-x^2")(3.0) - cplx(-9.0)) < 1e-12);
  CHECK(std::abs(parse("3i*x + pi")(2.0) - cplx(kPi, 6.0)) < 1e-14);
  CHECK(std::abs(parse("pow(x, 0.5)")(4.0) - cplx(2.0)) < 1e-15);
  CHECK(std::abs(parse("bump(x)")(0.0) - cplx(std::exp(-1.0))) < 1e-15);
  CHECK(parse("bump(x)")(1.5) == cplx(0.0));
  CHECK(parse("t*t", Domain::RealLine, "t")(3.0) == cplx(9.0));
}

TEST_CASE("parse: cross-evaluation against an independent evaluator") {
  const FuncExpr f = parse("x^2 * exp(-x)");
  CHECK(rel_err(f(2.0), 4.0 * std::exp(-2.0)) < 1e-15);
  Rng rng(11);
  for (int k = 0; k < 50; ++k) {
    const double x = -3.0 + 10.0 * rng.uniform();
    CHECK(rel_err(f(x), x * x * std::exp(-x)) < 1e-14);
  }
}

TEST_CASE("parse: errors") {
  CHECK_THROWS_AS(parse("foo(x)"), ParseError);
  CHECK_THROWS_AS(parse("y + 1"), ParseError);
  CHECK_THROWS_AS(parse("pow(x)"), ParseError);
  CHECK_THROWS_AS(parse("exp(x, 2)"), ParseError);
  CHECK_THROWS_AS(parse("(1 + x"), ParseError);
  CHECK_THROWS_AS(parse("1 + * x"), ParseError);
  CHECK_THROWS_AS(parse("x $ 2"), ParseError);
  try {
    parse("1 + * x");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
  }
  try {
    parse("x + zeta");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
    CHECK(std::string(e.what()).find("zeta") != std::string::npos);
  }
}

TEST_CASE("f_alpha values") {
  CHECK(FuncExpr::f_alpha(1, 0)(0.0) == cplx(1.0));
  CHECK(std::abs(FuncExpr::f_alpha(1, 0)(1.0) - cplx(0.5)) < 1e-16);
  const cplx v = FuncExpr::f_alpha(2, 3)(1.0);
  CHECK(std::abs(std::abs(v) - 0.25) < 1e-15);
  CHECK(std::abs(std::remainder(std::arg(v) - 3.0, 2 * kPi)) < 1e-14);
  CHECK_THROWS_AS(FuncExpr::f_alpha(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(FuncExpr::f_alpha(1.0, 0.0)(-0.5), DomainError);
}

TEST_CASE("property: |f_alpha(x)| = (1+x)^-alpha on x >= 0") {
  Rng rng(3);
  for (int k = 0; k < 200; ++k) {
    const double a = 0.1 + 3 * rng.uniform(), t = -50 + 100 * rng.uniform(), x = 100 * rng.uniform();
    CHECK(std::abs(std::abs(FuncExpr::f_alpha(a, t)(x)) - std::pow(1 + x, -a)) <= 4e-16 * std::pow(1 + x, -a));
  }
}

TEST_CASE("eval: per-point results") {
  const std::vector<cplx> pts{0.0, 1.0, 3.0};
  const auto out = eval(FuncExpr::f_alpha(1, 0), pts);
  REQUIRE(out.size() == 3);
  CHECK(*out[0].value == cplx(1.0));
  CHECK(std::abs(*out[1].value - 0.5) < 1e-16);
  CHECK(std::abs(*out[2].value - 0.25) < 1e-16);
  const std::vector<cplx> mixed{1.0, 0.0, 2.0};
  const auto logs = eval(parse("log(x)"), mixed);
  CHECK(logs[0].value.has_value());
  CHECK_FALSE(logs[1].value.has_value());
  CHECK(logs[1].error.find("log") != std::string::npos);
  CHECK(logs[2].value.has_value());
  const auto ones = eval(FuncExpr::constant(1.0), mixed);
  for (const auto& p : ones) CHECK(*p.value == cplx(1.0));
  const auto divs = eval(parse("1/x"), mixed);
  CHECK_FALSE(divs[1].value.has_value());
}

TEST_CASE("eval: parsed modulation matches builtin") {
  const FuncExpr p = parse("exp(i*2*x)"), b = FuncExpr::modulation(2.0);
  for (int j = 0; j < 10; ++j) {
    const double x = -2.0 + 0.7 * j;
    CHECK(std::abs(p(x) - b(x)) < 1e-15);
  }
}

TEST_CASE("derivatives: closed forms") {
  CHECK(FuncExpr::identity().derivative(1)(7.0) == cplx(1.0));
  CHECK(FuncExpr::identity().derivative(1)(-2.0) == cplx(1.0));
  CHECK(std::abs(FuncExpr::f_alpha(1, 0).derivative(1)(0.0) - cplx(-1.0)) < 1e-15);
  CHECK(FuncExpr::f_alpha(1, 0).derivative_order_available() == kAllOrders);
  CHECK(parse("exp(x)").derivative_order_available() == 0);
  CHECK_THROWS_AS(parse("exp(x)").derivative(1), std::invalid_argument);
  CHECK(std::abs(parse("exp(x)").derivative(1, true)(0.5) - std::exp(0.5)) < 1e-9);
}

TEST_CASE("derivatives: finite-difference oracle for builtins") {
  const auto fd2 = [](const FuncExpr& f, double x, double h) { return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h); };
  const auto fd1 = [](const FuncExpr& f, double x, double h) { return (f(x + h) - f(x - h)) / (2 * h); };
  const FuncExpr fa = FuncExpr::f_alpha(2, 5);
  CHECK(rel_err(fa.derivative(2)(1.0), fd2(fa, 1.0, 1e-4)) < 1e-5);
  const std::vector<FuncExpr> builtins{FuncExpr::gaussian(0.7), FuncExpr::bump(0.2, 1.3, 2.0), FuncExpr::power(cplx(0.5, 1.5)),
                                       FuncExpr::modulation(-1.3), FuncExpr::f_alpha(0.6, -2.0),
                                       FuncExpr::f_alpha(1.5, 0.3).exp_substitute(), FuncExpr::gaussian(2.0).dilate(3.0)};
  Rng rng(5);
  for (const auto& f : builtins) {
    for (int s = 0; s < 10; ++s) {
      const double x = 0.15 + 0.8 * rng.uniform();
      for (int k = 0; k < 4; ++k) {
        const FuncExpr d = f.derivative(k);
        const double scale = std::abs(f.derivative(k + 1)(x)) + std::abs(d(x)) + 1e-3;
        CHECK(std::abs(fd1(d, x, 1e-5) - f.derivative(k + 1)(x)) < 1e-6 * scale);
      }
    }
  }
}

TEST_CASE("derivatives: Faa di Bruno for exp substitution") {
  const FuncExpr f = FuncExpr::f_alpha(1, 0).exp_substitute();
  // g(x) = 1/(1+e^x); g' = -e^x/(1+e^x)^2; g'' = e^x (e^x - 1)/(1+e^x)^3
  for (double x : {-2.0, 0.0, 0.7, 3.0}) {
    const double e = std::exp(x);
    CHECK(rel_err(f.derivative(1)(x), -e / ((1 + e) * (1 + e))) < 1e-13);
    CHECK(std::abs(f.derivative(2)(x) - e * (e - 1) / std::pow(1 + e, 3)) < 1e-13);
  }
}

TEST_CASE("derivatives: nested finite differences for parsed input") {
  const FuncExpr f = parse("sin(2*x)");
  for (int k = 1; k <= 4; ++k) {
    const double x = 0.3;
    const double exact = std::pow(2.0, k) * std::sin(2 * x + k * kPi / 2);
    CHECK(std::abs(f.derivative(k, true)(x) - exact) < 1e-4 * std::pow(2.0, k));
  }
}

TEST_CASE("property: derivative linearity") {
  Rng rng(8);
  const FuncExpr f = FuncExpr::f_alpha(1.2, 0.8), g = FuncExpr::gaussian(1.5);
  for (int trial = 0; trial < 30; ++trial) {
    const cplx a(rng.normal(), rng.normal()), b(rng.normal(), rng.normal());
    const int k = static_cast<int>(rng.index(5));
    const FuncExpr lhs = (a * f + b * g).derivative(k);
    const double x = 4.0 * rng.uniform();
    const cplx rhs = a * f.derivative(k)(x) + b * g.derivative(k)(x);
    CHECK(std::abs(lhs(x) - rhs) <= 1e-13 * (1 + std::abs(rhs)));
  }
}

TEST_CASE("property: parse-print round trip") {
  Rng rng(2024);
  int trees = 0;
  while (trees < 40) {
    const FuncExpr f = parse(random_expression(rng, 4));
    const FuncExpr g = parse(f.to_infix());
    const FuncExpr h = FuncExpr::from_prefix(f.to_prefix());
    CHECK(h.to_prefix() == f.to_prefix());
    for (int s = 0; s < 100; ++s) {
      const double x = -3.0 + 6.0 * rng.uniform();
      cplx fv;
      try {
        fv = f(x);
      } catch (const DomainError&) {
        continue;
      }
      CHECK(rel_err(g(x), fv) < 1e-12);
      CHECK(h(x) == fv);
    }
    ++trees;
  }
}

TEST_CASE("prefix form of builtins and composites") {
  const FuncExpr f = (FuncExpr::f_alpha(2, 1) + cplx(0.5, -1) * FuncExpr::power(cplx(0, 1))).derivative(2).dilate(2.0);
  const FuncExpr g = FuncExpr::from_prefix(f.to_prefix());
  CHECK(g.to_prefix() == f.to_prefix());
  CHECK(g.kind() == FuncExpr::Kind::Builtin);
  CHECK(parse("x+1").kind() == FuncExpr::Kind::Parsed);
  CHECK(g(1.7) == f(1.7));
  CHECK(g.domain() == Domain::Positive);
  CHECK_THROWS_AS(FuncExpr::from_prefix("(nosuch 1)"), ParseError);
  CHECK(FuncExpr::from_prefix("(falpha 1 0)")(1.0) == cplx(0.5));
}

TEST_CASE("domains") {
  CHECK_THROWS_AS(FuncExpr::power(cplx(0, 1))(0.0), DomainError);
  CHECK_THROWS_AS(parse("x", Domain::Positive)(-1.0), DomainError);
  CHECK_NOTHROW(parse("x", Domain::NonNegative)(0.0));
  CHECK_THROWS_AS(parse("1/(x-1)")(1.0), DomainError);
  CHECK_THROWS_AS(parse("exp(x)")(1000.0), DomainError);
}
