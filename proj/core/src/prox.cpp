#include "ltd/prox.hpp"

#include <algorithm>
#include <cmath>

#include "fourier.hpp"
#include "ltd/error.hpp"
#include "ltd/parallel.hpp"

namespace ltd {

void CapLpParams::validate() const {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::InvalidInput, "CapLp: p must lie in (0, 1)");
  if (!(nu > 0.0)) throw Error(ErrorCode::InvalidInput, "CapLp: nu must be positive");
  if (!(lambda_hat >= 0.0)) throw Error(ErrorCode::InvalidInput, "CapLp: lambda_hat must be >= 0");
}

double caplp(double x, double p, double nu) {
  if (x >= nu) return 1.0;
  return std::pow(x / nu, p);
}

double prox_capl1_norm(double e, double lambda_hat) {
  // Two branches of min{u, 1}: on [0, 1] the penalty is linear (soft
  // threshold clamped to the ball), above 1 it is constant (identity).
  const double t = lambda_hat;
  const double s_lin = std::clamp(e - t, 0.0, 1.0);
  const double s_flat = std::max(e, 1.0);
  const double v_lin = t * s_lin + 0.5 * (s_lin - e) * (s_lin - e);
  const double v_flat = t + 0.5 * (s_flat - e) * (s_flat - e);
  return v_lin <= v_flat ? s_lin : s_flat;
}

Tensor3 prox_group_capl1(const Tensor3 &e_hat, double lambda_hat) {
  if (!(lambda_hat >= 0.0))
    throw Error(ErrorCode::InvalidInput, "prox_group_capl1: lambda_hat must be >= 0");
  Tensor3 out(e_hat.dims());
  const Map2D norms = tube_norms(e_hat);
  for (Index i = 0; i < e_hat.n1(); ++i)
    for (Index j = 0; j < e_hat.n2(); ++j) {
      const double e = norms(i, j);
      if (e == 0.0) continue;
      const double s = prox_capl1_norm(e, lambda_hat);
      if (s == 0.0) continue;
      const double scale = s / e;
      for (Index k = 0; k < e_hat.n3(); ++k) out(i, j, k) = scale * e_hat(i, j, k);
    }
  return out;
}

namespace {

// Proximal map of w * u^p on u >= 0 (0 < p < 1). Zero below the threshold
// pi2; above it the nonzero stationary point in (pi1, z), where
// g(u) = u + w p u^(p-1) - z is strictly increasing.
double prox_lp(double z, double w, double p) {
  if (z <= 0.0 || w <= 0.0) return std::max(z, 0.0);
  const double pi1 = std::pow(2.0 * w * (1.0 - p), 1.0 / (2.0 - p));
  const double pi2 = pi1 + w * p * std::pow(pi1, p - 1.0);
  if (z <= pi2) return 0.0;
  double lo = pi1;
  double hi = z;
  const double tol = 1e-12 * std::max(1.0, z);
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double g = mid + w * p * std::pow(mid, p - 1.0) - z;
    (g < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

} // namespace

double prox_caplp_scalar(double z, const CapLpParams &params) {
  params.validate();
  if (z < 0.0) throw Error(ErrorCode::InvalidInput, "prox_caplp_scalar: z must be >= 0");
  const double lambda = params.lambda_hat;
  if (lambda == 0.0) return z;
  const double w = params.literal_weight ? lambda : lambda / std::pow(params.nu, params.p);

  const double u1 = std::min(prox_lp(z, w, params.p), params.nu);
  const double u2 = std::max(z, params.nu);
  auto objective = [&](double u) {
    return lambda * caplp(u, params.p, params.nu) + 0.5 * (u - z) * (u - z);
  };
  // Ties go to the smaller candidate.
  return objective(u1) <= objective(u2) ? u1 : u2;
}

Tensor3 prox_group_caplp(const Tensor3 &z_hat, const CapLpParams &params) {
  params.validate();
  Tensor3 out(z_hat.dims());
  const auto norms = lateral_norms(z_hat);
  for (Index j = 0; j < z_hat.n2(); ++j) {
    const double n = norms[static_cast<std::size_t>(j)];
    if (n == 0.0) continue;
    const double u = prox_caplp_scalar(n, params);
    if (u == 0.0) continue;
    const double scale = u / n;
    for (Index k = 0; k < z_hat.n3(); ++k)
      for (Index i = 0; i < z_hat.n1(); ++i) out(i, j, k) = scale * z_hat(i, j, k);
  }
  return out;
}

Tensor3 project_unit_tubes(const Tensor3 &c_hat) {
  Tensor3 out(c_hat.dims());
  const Map2D norms = tube_norms(c_hat);
  for (Index i = 0; i < c_hat.n1(); ++i)
    for (Index j = 0; j < c_hat.n2(); ++j) {
      const double n = norms(i, j);
      if (!(n > 0.0))
        throw Error(ErrorCode::DegenerateInput, "project_unit_tubes: zero tube");
      for (Index k = 0; k < c_hat.n3(); ++k) out(i, j, k) = c_hat(i, j, k) / n;
    }
  return out;
}

Matrix project_nonneg(const Matrix &b_hat) { return b_hat.cwiseMax(0.0); }

Tensor3 procrustes_orth(const Tensor3 &g) {
  if (g.n2() > g.n1())
    throw Error(ErrorCode::InvalidInput, "procrustes_orth: needs r <= n1");
  if (g.n2() == 0) return Tensor3(g.dims());
  detail::HalfSpectrum gf = detail::forward(g);
  const Index n3 = g.n3();
  parallel_for(static_cast<Index>(gf.slices.size()), [&](Index k) {
    auto &slice = gf.slices[static_cast<std::size_t>(k)];
    const auto svd = detail::slice_svd(slice, detail::self_conjugate(k, n3), false);
    slice.noalias() = svd.U * svd.V.adjoint();
  });
  return detail::inverse(gf);
}

} // namespace ltd
