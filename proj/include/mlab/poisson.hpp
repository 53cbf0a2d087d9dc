#pragma once

#include "mlab/core.hpp"
#include "mlab/fit.hpp"
#include "mlab/quadrature.hpp"

#include <json.hpp>

#include <span>
#include <utility>
#include <vector>

namespace mlab {

struct KernelParams {
  double t = 1.0;
  double theta = 0.0;
  int d = 1;
  bool normalized = false;

  void validate() const;
};

// Area of the unit sphere in R^d.
double sphere_area(int d);

// Constant making the theta = 0 kernel a probability density.
double poisson_normalization(int d);

// e^{i theta} t / ((e^{i theta} t)^2 + |x|^2)^{(d+1)/2}, times the
// normalization when requested.
cplx poisson_kernel(std::span<const double> x, const KernelParams& params);
cplx poisson_kernel_radial(double r2, const KernelParams& params);

// pi/2 - |theta|.
double theta_gap(double theta);

// |e^{2 i theta} + r^2|.
double p_modulus(double r, double theta);

struct AnalyticFamilyParams {
  double epsilon = 0.1;
  double c = 0.0;  // 0 selects d + 1/2
  double delta = 0.5;

  double c_for(int d) const { return c > 0 ? c : d + 0.5; }
};

// Integral of |P|^{-(d+1)/2} (1+|x|)^delta over R^d.
QuadResult c4_integral(double theta, int d, double delta, double rel_tol = 1e-8);

// The split bounds the exact gradient integral up to the factors d + 1 and c.
struct C2Result {
  double term1 = 0.0;  // |Im s| |x| (1+|x|)^{-c} |P|^{-1}
  double term2 = 0.0;  // |s| (1+|x|)^{-c-1}
  double exact = 0.0;  // integral of the gradient modulus itself
  double value() const { return term1 + term2; }
  bool converged = true;
  nlohmann::json to_json() const;
};

C2Result c2_integral(cplx s, double theta, int d, double c, double rel_tol = 1e-8);

struct C3Result {
  double inner = 0.0;  // r < 2
  double outer = 0.0;  // r >= 2
  double value() const { return inner + outer; }
  bool converged = true;
  nlohmann::json to_json() const;
};

// Integral of |P|^{-a(1+eps)} (1+|x|)^{c eps}, a = (d+1)/2.
C3Result c3_integral(double epsilon, double theta, int d, double c, double rel_tol = 1e-8);

struct HormanderResult {
  double value = 0.0;
  double tail_bound = 0.0;
  double radius = 0.0;  // quadrature truncation radius
  bool converged = true;
  nlohmann::json to_json() const;
};

// Integral over |x| >= 2|y| of |p_{2^k t}(x - y) - p_{2^k t}(x)| (verbatim kernel).
HormanderResult hormander_integral(double y_norm, const KernelParams& params, int k, double rel_tol = 1e-8);

// (C4 + C3^{1-v} C2^v) / beta with v = eps/(1+eps), beta = min(v, delta).
double dini_bound(double c4, double c3, double c2, double epsilon, double delta);

// Exponent of the final bound and the value of the implicitly defined eps~.
struct DiniExponents {
  double stated = 0.0;     // -eps/(1+eps) - a + 1/(1+eps)
  double eps_tilde = 0.0;  // from (1-eps)/(1+eps) = 1 - eps~
  double simplified = 0.0; // -(d-1)/2 + eps~
  double identity = 0.0;   // -(d-1)/2 - eps~, algebraically equal to stated
  nlohmann::json to_json() const;
};
DiniExponents dini_exponents(int d, double epsilon);

// theta_j = pi/2 - 2^{-j}.
std::vector<double> theta_sweep(int j_min = 2, int j_max = 10);

// Least squares of log(quantity) against log(pi/2 - |theta|).
LinearFit theta_scaling_fit(std::span<const std::pair<double, double>> values);

}  // namespace mlab
