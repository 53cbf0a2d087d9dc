#include "mlab/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mlab {

namespace {

constexpr unsigned kMaxDepth = 15;

QuadResult panel(const RealFn& f, double a, double b, double rel_tol) {
  double err = 0, l1 = 0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, kMaxDepth, rel_tol, &err, &l1);
  QuadResult r;
  r.value = v;
  r.error_estimate = err;
  r.converged = std::isfinite(v) && err <= 10.0 * rel_tol * l1 + 1e-300;
  return r;
}

}  // namespace

QuadResult integrate(const RealFn& f, double a, double b, double rel_tol, std::vector<double> breakpoints) {
  if (!(a <= b)) throw std::invalid_argument("integrate: a > b");
  std::vector<double> cuts{a};
  std::sort(breakpoints.begin(), breakpoints.end());
  for (double p : breakpoints)
    if (p > cuts.back() && p < b) cuts.push_back(p);
  cuts.push_back(b);
  QuadResult total;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] <= cuts[i]) continue;
    const QuadResult r = panel(f, cuts[i], cuts[i + 1], rel_tol);
    total.value += r.value;
    total.error_estimate += r.error_estimate;
    total.converged = total.converged && r.converged;
  }
  return total;
}

QuadResult integrate_to_infinity(const RealFn& f, double a, double rel_tol) {
  if (!(a > 0)) throw std::invalid_argument("integrate_to_infinity: a must be positive");
  QuadResult total;
  double lo = a, prev = 0.0;
  for (int j = 0; j < 600; ++j) {
    const double hi = 2.0 * lo;
    const QuadResult r = panel(f, lo, hi, rel_tol);
    total.value += r.value;
    total.error_estimate += r.error_estimate;
    total.converged = total.converged && r.converged;
    const double cur = std::abs(r.value);
    if (j >= 4 && prev > 0) {
      const double ratio = cur / prev;
      if (ratio < 0.95) {
        const double remainder = r.value * ratio / (1.0 - ratio);
        if (std::abs(remainder) <= 0.1 * rel_tol * std::abs(total.value) || cur == 0.0) {
          total.value += remainder;
          total.error_estimate += std::abs(remainder);
          return total;
        }
      }
    }
    if (cur == 0.0 && j >= 4) return total;
    prev = cur;
    lo = hi;
  }
  total.converged = false;
  return total;
}

}  // namespace mlab
