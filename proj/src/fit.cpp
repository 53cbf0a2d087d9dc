#include "mlab/fit.hpp"

#include "mlab/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mlab {

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("least_squares: size mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("least_squares: need at least two points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0)) throw std::invalid_argument("least_squares: degenerate abscissae");
  LinearFit fit;
  fit.points = n;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    rss += r * r;
  }
  fit.r_squared = syy > 0 ? 1.0 - rss / syy : 1.0;
  fit.slope_stderr = n > 2 ? std::sqrt(rss / static_cast<double>(n - 2) / sxx) : 0.0;
  return fit;
}

GrowthFit fit_growth_exponent(std::span<const std::pair<double, double>> samples) {
  if (samples.size() < 4) throw std::invalid_argument("fit_growth_exponent: need at least four points");
  std::vector<double> lx, ly;
  for (const auto& [t, v] : samples) {
    if (!(v > 0) || !std::isfinite(v)) throw std::invalid_argument("fit_growth_exponent: values must be positive");
    lx.push_back(std::log(bracket(t)));
    ly.push_back(std::log(v));
  }
  const LinearFit f = least_squares(lx, ly);
  return {f.slope, 2.0 * f.slope_stderr, f.intercept, f.points};
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median: empty input");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace mlab
