#pragma once

// Internal: half-spectrum representation shared by the t-algebra and the
// proximal operators. Not installed.

#include <vector>

#include <Eigen/Dense>

#include "ltd/tensor.hpp"

namespace ltd::detail {

/// Fourier slices k = 0 .. n3/2 of a real tensor; slice n3-k is the
/// conjugate of slice k and is never stored.
struct HalfSpectrum {
  Index n3 = 0;
  std::vector<Eigen::MatrixXcd> slices;

  Index rows() const { return slices.empty() ? 0 : slices.front().rows(); }
  Index cols() const { return slices.empty() ? 0 : slices.front().cols(); }
};

inline Index half_length(Index n3) { return n3 / 2 + 1; }

/// True for the slices whose DFT values are real for real input.
inline bool self_conjugate(Index k, Index n3) { return k == 0 || 2 * k == n3; }

HalfSpectrum forward(const Tensor3 &x);
Tensor3 inverse(const HalfSpectrum &s);

/// Full complex mode-3 transforms (used by dft3 / idft3).
void forward_full(const Tensor3 &x, FTensor3 &out);
void inverse_full(const FTensor3 &xf, Tensor3 &out);

struct SliceSvd {
  Eigen::MatrixXcd U;
  Eigen::VectorXd s;
  Eigen::MatrixXcd V;
};

/// SVD of one Fourier slice. Self-conjugate slices are decomposed as real
/// matrices so their factors carry no arbitrary complex phase.
SliceSvd slice_svd(const Eigen::MatrixXcd &m, bool real_slice, bool full);

} // namespace ltd::detail
