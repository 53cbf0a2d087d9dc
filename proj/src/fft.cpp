#include "mlab/fft.hpp"

#include <unsupported/Eigen/FFT>

namespace mlab {

namespace {

Eigen::FFT<double>& engine() {
  thread_local Eigen::FFT<double> fft;
  return fft;
}

void check_size(std::size_t n) {
  if (!is_power_of_two(n)) throw std::invalid_argument("fft: length must be a power of two");
}

// Applies a 1-D transform along every axis of an n^d cube.
VectorXcd transform_axes(const VectorXcd& x, int d, std::size_t n, bool inverse) {
  check_size(n);
  std::size_t total = 1;
  for (int a = 0; a < d; ++a) total *= n;
  if (static_cast<std::size_t>(x.size()) != total) throw std::invalid_argument("fftn: size is not n^d");
  VectorXcd out = x;
  std::vector<cplx> line(n), res(n);
  std::size_t stride = 1;
  for (int axis = d - 1; axis >= 0; --axis) {
    const std::size_t block = stride * n;
    for (std::size_t base = 0; base < total; base += block) {
      for (std::size_t off = 0; off < stride; ++off) {
        for (std::size_t j = 0; j < n; ++j) line[j] = out[base + off + j * stride];
        if (inverse)
          engine().inv(res, line);
        else
          engine().fwd(res, line);
        for (std::size_t j = 0; j < n; ++j) out[base + off + j * stride] = res[j];
      }
    }
    stride *= n;
  }
  return out;
}

}  // namespace

VectorXcd fft(const VectorXcd& x) { return transform_axes(x, 1, x.size(), false); }
VectorXcd ifft(const VectorXcd& x) { return transform_axes(x, 1, x.size(), true); }
VectorXcd fftn(const VectorXcd& x, int d, std::size_t n) { return transform_axes(x, d, n, false); }
VectorXcd ifftn(const VectorXcd& x, int d, std::size_t n) { return transform_axes(x, d, n, true); }

}  // namespace mlab
