#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace mlab {

using cplx = std::complex<double>;
using Eigen::VectorXcd;
using Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

// Japanese bracket <t> = 1 + |t|.
inline double bracket(double t) { return 1.0 + (t < 0 ? -t : t); }

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Signed DFT index of bin j on an N-point grid.
inline std::int64_t signed_bin(std::size_t j, std::size_t n) {
  return j < n / 2 ? static_cast<std::int64_t>(j)
                   : static_cast<std::int64_t>(j) - static_cast<std::int64_t>(n);
}

}  // namespace mlab
