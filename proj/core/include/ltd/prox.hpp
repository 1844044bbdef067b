#pragma once

#include "ltd/tensor.hpp"

namespace ltd {

/// Shape of the capped-Lp penalty psi(u) = min{u^p / nu^p, 1} and the weight
/// lambda_hat it is scaled by inside a proximal step.
struct CapLpParams {
  double lambda_hat = 1.0;
  double p = 0.5;
  double nu = 1.0;
  /// When false (default) the inner Lp proximal step uses lambda_hat / nu^p,
  /// so both candidates minimize lambda_hat * psi(u) + (u - z)^2 / 2. When
  /// true it uses lambda_hat unscaled, as in the original update formula.
  bool literal_weight = false;

  void validate() const;
};

/// Capped-L1 penalty phi(x) = min{x, 1}.
inline double capl1(double x) { return x < 1.0 ? x : 1.0; }

/// Capped-Lp penalty psi(x) = min{x^p / nu^p, 1}.
double caplp(double x, double p, double nu);

/// Global minimizer of lambda_hat * min{|u|, 1} + (u - e)^2 / 2 over u >= 0
/// for a tube of norm e >= 0; returns the optimal output norm.
double prox_capl1_norm(double e, double lambda_hat);

/// Tube-wise group proximal map of lambda_hat * sum_{ij} min{||e(i,j,:)||, 1}.
/// Each tube keeps its direction; its norm becomes prox_capl1_norm(||tube||).
Tensor3 prox_group_capl1(const Tensor3 &e_hat, double lambda_hat);

/// Global minimizer over u >= 0 of lambda_hat * psi(u) + (u - z)^2 / 2.
double prox_caplp_scalar(double z, const CapLpParams &params);

/// Lateral-slice group proximal map of lambda_hat * sum_j psi(||z(:,j,:)||).
Tensor3 prox_group_caplp(const Tensor3 &z_hat, const CapLpParams &params);

/// Normalizes every mode-3 tube to unit length. Throws DegenerateInput on a
/// zero tube.
Tensor3 project_unit_tubes(const Tensor3 &c_hat);

/// Entrywise max{0, b}.
Matrix project_nonneg(const Matrix &b_hat);

/// argmax over {D : D^T * D = I} of <D, g> for g of size n1 x r x b with
/// r <= n1, i.e. U * V^T from the T-SVD of g, computed slice-wise in the
/// Fourier domain. For rank-deficient g the maximizer is not unique and the
/// SVD's choice of singular vectors is returned.
Tensor3 procrustes_orth(const Tensor3 &g);

} // namespace ltd
