#pragma once

#include "mlab/funcspec.hpp"
#include "mlab/partitions.hpp"

#include <iosfwd>

namespace mlab {

// Values f(origin + j * step), j < N, with N a power of two. `periodic`
// marks data whose periodic extension is the intended function, in which
// case grid convolutions carry no truncation error.
struct SampledFunction {
  double origin = 0.0;
  double step = 1.0;
  VectorXcd values;
  bool periodic = false;

  std::size_t size() const { return static_cast<std::size_t>(values.size()); }
  double periodic_extent() const { return step * static_cast<double>(size()); }
  double x(std::size_t j) const { return origin + step * static_cast<double>(j); }
  void validate() const;
};

SampledFunction sample(const FuncExpr& f, double origin, double step, std::size_t n);
SampledFunction sample(const std::function<cplx(double)>& f, double origin, double step, std::size_t n);

struct BandComponent {
  int band_index = 0;
  SampledFunction component;
  double truncation_error_bound = 0.0;
};

// Summary of one band computed without materialising it on the full grid.
struct BandStats {
  double sup = 0.0;           // refined sup of |f * K|
  double kernel_l1 = 0.0;     // integral of |K| over one period
  double kernel_tail = 0.0;   // part of that integral farther than P/4 from 0
  double truncation = 0.0;    // periodisation bound for this band
  std::size_t bins = 0;
};

// Discrete spectrum of a sampled function, shared by many band queries.
class Spectrum {
 public:
  explicit Spectrum(const SampledFunction& f);

  std::size_t size() const { return n_; }
  double period() const { return period_; }
  double nyquist() const { return kPi / step_; }
  double frequency(std::size_t bin) const;

  // Throws if the window reaches beyond the Nyquist band.
  BandStats band(const Window& w) const;
  // f * K on the input grid.
  SampledFunction component(const Window& w) const;
  // f minus the sum of the given windows' components, on the input grid.
  double uncovered_sup(const std::function<double(double)>& coverage) const;

  double sup_abs() const { return sup_abs_; }
  double edge_magnitude() const { return edge_; }
  bool periodic() const { return periodic_; }

 private:
  void check_window(const Window& w) const;

  std::size_t n_;
  double origin_, step_, period_;
  VectorXcd coeffs_;  // c_k with f(x) = sum_k c_k exp(i xi_k (x - origin))
  double sup_abs_ = 0.0, edge_ = 0.0;
  bool periodic_;
};

BandComponent band_component(const SampledFunction& f, const Window& window, int band_index = 0);

// f * K with K the inverse Fourier transform of the window, evaluated by
// quadrature of K and a direct periodised convolution sum. N <= 4096.
SampledFunction direct_convolution_oracle(const SampledFunction& f, const Window& window);

// Grid maximum of |f| refined by trigonometric interpolation near the argmax.
double sup_norm(const SampledFunction& f);

void write_csv(std::ostream& out, const SampledFunction& f);
SampledFunction read_csv(std::istream& in);
void write_binary(std::ostream& out, const SampledFunction& f);
SampledFunction read_binary(std::istream& in);

}  // namespace mlab
