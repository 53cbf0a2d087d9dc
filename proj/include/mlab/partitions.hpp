#pragma once

#include "mlab/core.hpp"

#include <json.hpp>

#include <functional>
#include <string>

namespace mlab {

// A real window with compact support [lo, hi], vanishing exactly outside.
struct Window {
  std::function<double(double)> value;
  double lo = 0.0;
  double hi = 0.0;

  double operator()(double x) const { return x <= lo || x >= hi ? 0.0 : value(x); }
};

enum class PartitionKind { Equidistant, Dyadic, DyadicFourier };

// exp(-a / (1 - x^2)) on (-1, 1), zero elsewhere.
double standard_bump(double x, double sharpness = 1.0);
// Mother window: bump divided by its integer-shift sum; supported in [-1, 1].
double mother_window(double x, double sharpness = 1.0);

class PartitionFamily {
 public:
  PartitionFamily(PartitionKind kind, int n_min, int n_max, double sharpness);

  PartitionKind kind() const { return kind_; }
  int n_min() const { return n_min_; }
  int n_max() const { return n_max_; }
  double sharpness() const { return sharpness_; }
  bool contains(int n) const { return n >= n_min_ && n <= n_max_; }

  double operator()(int n, double x) const;
  // Declared support of window n; the window is exactly zero outside.
  std::pair<double, double> support(int n) const;
  Window window(int n) const;
  // Sum of all windows in the index range at x.
  double sum(double x) const;
  // Interval on which the finite family sums to one.
  std::pair<double, double> covered_range() const;

  nlohmann::json to_json() const;
  static PartitionFamily from_json(const nlohmann::json& j);

 private:
  double unchecked(int n, double x) const;

  PartitionKind kind_;
  int n_min_, n_max_;
  double sharpness_;
};

PartitionFamily equidistant_partition(int n_min, int n_max, double sharpness = 1.0);
PartitionFamily dyadic_partition(int n_min, int n_max, double sharpness = 1.0);
PartitionFamily dyadic_fourier_partition(int n_abs_max, double sharpness = 1.0);

// Widened window phi_{n-1} + phi_n + phi_{n+1}.
Window widen(const PartitionFamily& family, int n);

}  // namespace mlab
