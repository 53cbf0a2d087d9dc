#pragma once

#include "mlab/core.hpp"

#include <vector>

namespace mlab {

// Unnormalised forward DFT: X_k = sum_j x_j exp(-2 pi i jk/N).
VectorXcd fft(const VectorXcd& x);
// Inverse DFT including the 1/N factor.
VectorXcd ifft(const VectorXcd& x);

// Row-major d-dimensional transforms on an n^d cube (last axis fastest).
VectorXcd fftn(const VectorXcd& x, int d, std::size_t n);
VectorXcd ifftn(const VectorXcd& x, int d, std::size_t n);

}  // namespace mlab
