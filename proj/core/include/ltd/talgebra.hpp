#pragma once

#include <optional>

#include "ltd/tensor.hpp"

namespace ltd {

/// Mode-3 DFT. The forward transform is unnormalized and idft3 carries the
/// 1/n3 factor, so idft3(dft3(x)) == x.
FTensor3 dft3(const Tensor3 &x);

/// Inverse mode-3 DFT; returns the real part (exact for spectra of real data).
Tensor3 idft3(const FTensor3 &xf);

/// t-product x * y for x: n1 x n2 x n3 and y: n2 x n4 x n3. Evaluated as
/// independent complex matrix products on the Fourier slices, using only the
/// first floor(n3/2)+1 slices and conjugate symmetry for the rest.
Tensor3 tprod(const Tensor3 &x, const Tensor3 &y);

/// x * y^T without forming the transpose.
Tensor3 tprod_nt(const Tensor3 &x, const Tensor3 &y);

/// x^T * y without forming the transpose.
Tensor3 tprod_tn(const Tensor3 &x, const Tensor3 &y);

/// Literal fold(bcirc(x) * unfold(y)). O(n1 n2 n4 n3^2); reference only.
Tensor3 bcirc_oracle_tprod(const Tensor3 &x, const Tensor3 &y);

/// Transpose every frontal slice and reverse the order of slices 2..n3.
Tensor3 conj_transpose(const Tensor3 &x);

struct TSvdFactors {
  Tensor3 U; ///< n1 x q x n3 (economy) or n1 x n1 x n3
  Tensor3 S; ///< q x q x n3 (economy) or n1 x n2 x n3, f-diagonal
  Tensor3 V; ///< n2 x q x n3 (economy) or n2 x n2 x n3
  bool economy = true;
};

/// T-SVD x = U * S * V^T, one matrix SVD per Fourier slice. Slices k and
/// n3-k are conjugates, so only half of them are decomposed; the
/// self-conjugate slices (k = 0 and k = n3/2) use a real SVD so that the
/// factors stay real after the inverse transform.
TSvdFactors tsvd(const Tensor3 &x, bool economy = true);

/// Number of singular tubes S(i, i, :) with norm above tol. When tol is not
/// given it defaults to 1e-8 times the largest singular-tube norm.
Index tubal_rank(const Tensor3 &x, std::optional<double> tol = std::nullopt);

/// Largest singular value by power iteration on the smaller Gram matrix
/// (at most 100 iterations, relative tolerance 1e-10).
double spectral_norm(const Matrix &m);

} // namespace ltd
