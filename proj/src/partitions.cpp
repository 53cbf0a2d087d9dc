#include "mlab/partitions.hpp"

#include <cmath>

namespace mlab {

double standard_bump(double x, double sharpness) {
  if (!(std::abs(x) < 1.0)) return 0.0;
  return std::exp(-sharpness / ((1.0 - x) * (1.0 + x)));
}

double mother_window(double x, double sharpness) {
  if (!(std::abs(x) < 1.0)) return 0.0;
  const double b = standard_bump(x, sharpness);
  // Only one neighbouring shift overlaps (-1, 1) at a time.
  const double other = x == 0.0 ? 0.0 : standard_bump(x > 0 ? x - 1.0 : x + 1.0, sharpness);
  return b / (b + other);
}

PartitionFamily::PartitionFamily(PartitionKind kind, int n_min, int n_max, double sharpness)
    : kind_(kind), n_min_(n_min), n_max_(n_max), sharpness_(sharpness) {
  if (n_min > n_max) throw std::invalid_argument("partition: n_min > n_max");
  if (!(sharpness > 0)) throw std::invalid_argument("partition: sharpness must be positive");
  if (kind == PartitionKind::DyadicFourier && (n_max < 2 || n_min != -n_max))
    throw std::invalid_argument("dyadic Fourier partition needs a symmetric range with n_abs_max >= 2");
}

PartitionFamily equidistant_partition(int n_min, int n_max, double sharpness) {
  return PartitionFamily(PartitionKind::Equidistant, n_min, n_max, sharpness);
}

PartitionFamily dyadic_partition(int n_min, int n_max, double sharpness) {
  return PartitionFamily(PartitionKind::Dyadic, n_min, n_max, sharpness);
}

PartitionFamily dyadic_fourier_partition(int n_abs_max, double sharpness) {
  if (n_abs_max < 2) throw std::invalid_argument("dyadic Fourier partition: n_abs_max must be at least 2");
  return PartitionFamily(PartitionKind::DyadicFourier, -n_abs_max, n_abs_max, sharpness);
}

double PartitionFamily::unchecked(int n, double x) const {
  switch (kind_) {
    case PartitionKind::Equidistant:
      return mother_window(x - n, sharpness_);
    case PartitionKind::Dyadic:
      return x > 0 ? mother_window(std::log2(x) - n, sharpness_) : 0.0;
    case PartitionKind::DyadicFourier: {
      if (n < 0) return unchecked(-n, -x);
      const double a = std::abs(x);
      if (n == 0) {
        if (a <= 0.5) return 1.0;
        if (a >= 1.0) return 0.0;
        return 1.0 - mother_window(std::log2(a), sharpness_);
      }
      return x > 0 ? mother_window(std::log2(x) - (n - 1), sharpness_) : 0.0;
    }
  }
  return 0.0;
}

double PartitionFamily::operator()(int n, double x) const {
  if (!contains(n)) throw std::out_of_range("partition: index " + std::to_string(n) + " out of range");
  return unchecked(n, x);
}

std::pair<double, double> PartitionFamily::support(int n) const {
  if (!contains(n)) throw std::out_of_range("partition: index " + std::to_string(n) + " out of range");
  switch (kind_) {
    case PartitionKind::Equidistant:
      return {n - 1.0, n + 1.0};
    case PartitionKind::Dyadic:
      return {std::ldexp(1.0, n - 1), std::ldexp(1.0, n + 1)};
    case PartitionKind::DyadicFourier:
      if (n == 0) return {-1.0, 1.0};
      if (n > 0) return {std::ldexp(1.0, n - 2), std::ldexp(1.0, n)};
      return {-std::ldexp(1.0, -n), -std::ldexp(1.0, -n - 2)};
  }
  return {0.0, 0.0};
}

Window PartitionFamily::window(int n) const {
  const auto [lo, hi] = support(n);
  PartitionFamily self = *this;
  return Window{[self, n](double x) { return self.unchecked(n, x); }, lo, hi};
}

double PartitionFamily::sum(double x) const {
  double s = 0.0;
  for (int n = n_min_; n <= n_max_; ++n) s += unchecked(n, x);
  return s;
}

std::pair<double, double> PartitionFamily::covered_range() const {
  switch (kind_) {
    case PartitionKind::Equidistant:
      return {static_cast<double>(n_min_), static_cast<double>(n_max_)};
    case PartitionKind::Dyadic:
      return {std::ldexp(1.0, n_min_), std::ldexp(1.0, n_max_)};
    case PartitionKind::DyadicFourier:
      return {-std::ldexp(1.0, n_max_ - 1), std::ldexp(1.0, n_max_ - 1)};
  }
  return {0.0, 0.0};
}

nlohmann::json PartitionFamily::to_json() const {
  static const char* names[] = {"equidistant", "dyadic", "dyadic_fourier"};
  return {{"kind", names[static_cast<int>(kind_)]},
          {"n_min", n_min_},
          {"n_max", n_max_},
          {"mother", {{"id", "periodized_bump"}, {"sharpness", sharpness_}}}};
}

PartitionFamily PartitionFamily::from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const auto& mother = j.at("mother");
  if (mother.at("id").get<std::string>() != "periodized_bump")
    throw std::invalid_argument("partition: unknown mother window id");
  PartitionKind k;
  if (kind == "equidistant")
    k = PartitionKind::Equidistant;
  else if (kind == "dyadic")
    k = PartitionKind::Dyadic;
  else if (kind == "dyadic_fourier")
    k = PartitionKind::DyadicFourier;
  else
    throw std::invalid_argument("partition: unknown kind '" + kind + "'");
  return PartitionFamily(k, j.at("n_min").get<int>(), j.at("n_max").get<int>(), mother.at("sharpness").get<double>());
}

Window widen(const PartitionFamily& family, int n) {
  if (!family.contains(n - 1) || !family.contains(n + 1))
    throw std::out_of_range("widen: neighbours of index " + std::to_string(n) + " out of range");
  const Window a = family.window(n - 1), b = family.window(n), c = family.window(n + 1);
  const double lo = std::min({a.lo, b.lo, c.lo});
  const double hi = std::max({a.hi, b.hi, c.hi});
  return Window{[a, b, c](double x) { return a(x) + b(x) + c(x); }, lo, hi};
}

}  // namespace mlab
