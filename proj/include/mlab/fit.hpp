#pragma once

#include <span>
#include <utility>
#include <vector>

namespace mlab {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

// Ordinary least squares y = slope * x + intercept.
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

struct GrowthFit {
  double slope = 0.0;
  double band = 0.0;  // two standard errors of the slope
  double intercept = 0.0;
  std::size_t points = 0;
};

// Fits log(value) against log(<t>).
GrowthFit fit_growth_exponent(std::span<const std::pair<double, double>> samples);

double median(std::vector<double> values);

}  // namespace mlab
