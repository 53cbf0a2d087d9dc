#pragma once

#include <functional>
#include <vector>

namespace mlab {

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = true;
};

using RealFn = std::function<double(double)>;

// Adaptive Gauss-Kronrod on [a, b], split at the given interior points.
QuadResult integrate(const RealFn& f, double a, double b, double rel_tol,
                     std::vector<double> breakpoints = {});

// Integral over [a, inf) using geometric panels [a r^j, a r^{j+1}] with a
// geometric-series estimate of the remainder. Requires a > 0.
QuadResult integrate_to_infinity(const RealFn& f, double a, double rel_tol);

}  // namespace mlab
