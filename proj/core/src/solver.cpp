#include "ltd/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include <spdlog/spdlog.h>

#include "ltd/error.hpp"
#include "ltd/prox.hpp"
#include "ltd/talgebra.hpp"

namespace ltd {

namespace {

bool nonneg_finite(double x) { return std::isfinite(x) && x >= 0.0; }

CapLpParams caplp_params(const LtdParams &params, double lambda_hat) {
  CapLpParams c;
  c.lambda_hat = lambda_hat;
  c.p = params.p;
  c.nu = params.nu;
  c.literal_weight = params.literal_caplp_weight;
  return c;
}

double sum_capl1_tubes(const Tensor3 &x) {
  const Map2D n = tube_norms(x);
  double s = 0.0;
  for (Index i = 0; i < n.size(); ++i) s += capl1(n.data()[i]);
  return s;
}

// x x_3 m^T for m: n3 x b, i.e. folding the tube dimension back to b.
Tensor3 mode3_product_t(const Tensor3 &x, const Matrix &m) { return mode3_product(x, m.transpose()); }

} // namespace

void LtdParams::validate() const {
  for (double l : {lambda1, lambda2, lambda3, lambda4, lambda5, lambda6})
    if (!nonneg_finite(l)) throw Error(ErrorCode::InvalidInput, "lambda weights must be finite and >= 0");
  for (double r : rho)
    if (!(std::isfinite(r) && r > 0.0))
      throw Error(ErrorCode::InvalidInput, "proximal weights rho must be finite and > 0");
  if (b < 1) throw Error(ErrorCode::InvalidInput, "b must be >= 1");
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::InvalidInput, "p must lie in (0, 1)");
  if (!(nu > 0.0 && std::isfinite(nu))) throw Error(ErrorCode::InvalidInput, "nu must be > 0");
  if (max_iter < 0) throw Error(ErrorCode::InvalidInput, "max_iter must be >= 0");
  if (!nonneg_finite(rel_tol)) throw Error(ErrorCode::InvalidInput, "rel_tol must be >= 0");
}

LtdParams LtdParams::for_profile(DatasetProfile profile, double lambda3) {
  LtdParams p;
  p.lambda3 = lambda3;
  switch (profile) {
  case DatasetProfile::Abu: p.lambda6 = lambda3 / 10.0; break;
  case DatasetProfile::Mvtec: p.lambda6 = lambda3 / 100.0; break;
  case DatasetProfile::Custom: break;
  }
  return p;
}

double LtdParams::rho_min() const { return *std::min_element(rho.begin(), rho.end()); }

double objective_F(const SolverState &s, const Tensor3 &h, const LtdParams &params) {
  const double fb = 0.5 * params.lambda1 * s.B.squaredNorm();
  const double fe1 = params.lambda2 * sum_capl1_tubes(s.E1);
  const double fh = 0.5 * params.lambda3 * (h - mode3_product(s.C, s.B) - s.E1).squared_norm();
  double fz = 0.0;
  for (double n : lateral_norms(s.Z)) fz += caplp(n, params.p, params.nu);
  fz *= params.lambda4;
  const double fe2 = params.lambda5 * sum_capl1_tubes(s.E2);
  const double fc = 0.5 * params.lambda6 * (s.C - tprod_nt(s.D, s.Z) - s.E2).squared_norm();
  return fb + fe1 + fh + fz + fe2 + fc;
}

Tensor3 update_C(const SolverState &s, const Tensor3 &h, const LtdParams &params) {
  const double sb = spectral_norm(s.B);
  const double l_c = params.lambda3 * sb * sb + params.lambda6;
  const double step = l_c + params.rho[0];

  Tensor3 grad = mode3_product_t(mode3_product(s.C, s.B) + s.E1 - h, s.B) * params.lambda3;
  grad += (s.C - tprod_nt(s.D, s.Z) - s.E2) * params.lambda6;
  Tensor3 c_hat = s.C - grad * (1.0 / step);

  // A tube of c_hat can only vanish through cancellation; keep the previous
  // (unit) tube there instead of failing mid-run.
  const Map2D norms = tube_norms(c_hat);
  Index replaced = 0;
  for (Index i = 0; i < c_hat.n1(); ++i)
    for (Index j = 0; j < c_hat.n2(); ++j)
      if (!(norms(i, j) > 0.0)) {
        for (Index k = 0; k < c_hat.n3(); ++k) c_hat(i, j, k) = s.C(i, j, k);
        ++replaced;
      }
  if (replaced > 0) spdlog::warn("update_C: {} zero tube(s) kept at previous value", replaced);
  return project_unit_tubes(c_hat);
}

Matrix update_B(const SolverState &s, const Tensor3 &h, const LtdParams &params) {
  const Matrix c3 = mode3_unfold(s.C);
  const double sc = spectral_norm(c3);
  const double l_b = params.lambda1 + params.lambda3 * sc * sc;
  const Matrix residual = s.B * c3 + mode3_unfold(s.E1) - mode3_unfold(h);
  const Matrix grad = params.lambda1 * s.B + params.lambda3 * residual * c3.transpose();
  return project_nonneg(s.B - grad / (l_b + params.rho[1]));
}

Tensor3 update_E1(const SolverState &s, const Tensor3 &h, const LtdParams &params) {
  const double denom = params.lambda3 + params.rho[2];
  Tensor3 e_hat = (h - mode3_product(s.C, s.B)) * params.lambda3 + s.E1 * params.rho[2];
  e_hat *= 1.0 / denom;
  return prox_group_capl1(e_hat, params.lambda2 / denom);
}

Tensor3 update_D(const SolverState &s, const LtdParams &params) {
  Tensor3 g = tprod(s.C - s.E2, s.Z) * params.lambda6 + s.D * params.rho[3];
  return procrustes_orth(g);
}

Tensor3 update_Z(const SolverState &s, const LtdParams &params) {
  const double denom = params.lambda6 + params.rho[4];
  Tensor3 z_hat = tprod_tn(s.C - s.E2, s.D) * params.lambda6 + s.Z * params.rho[4];
  z_hat *= 1.0 / denom;
  return prox_group_caplp(z_hat, caplp_params(params, params.lambda4 / denom));
}

Tensor3 update_E2(const SolverState &s, const LtdParams &params) {
  const double denom = params.lambda6 + params.rho[5];
  Tensor3 e_hat = (s.C - tprod_nt(s.D, s.Z)) * params.lambda6 + s.E2 * params.rho[5];
  e_hat *= 1.0 / denom;
  return prox_group_capl1(e_hat, params.lambda5 / denom);
}

SolverState pam_step(const SolverState &s, const Tensor3 &h, const LtdParams &params) {
  SolverState next = s;
  next.C = update_C(next, h, params);
  next.B = update_B(next, h, params);
  next.E1 = update_E1(next, h, params);
  next.D = update_D(next, params);
  next.Z = update_Z(next, params);
  next.E2 = update_E2(next, params);
  ++next.iter;
  return next;
}

double step_norm(const SolverState &a, const SolverState &b) {
  const double sq = (a.C - b.C).squared_norm() + (a.B - b.B).squaredNorm() +
                    (a.E1 - b.E1).squared_norm() + (a.D - b.D).squared_norm() +
                    (a.Z - b.Z).squared_norm() + (a.E2 - b.E2).squared_norm();
  return std::sqrt(sq);
}

double state_norm(const SolverState &s) {
  return std::sqrt(s.C.squared_norm() + s.B.squaredNorm() + s.E1.squared_norm() +
                   s.D.squared_norm() + s.Z.squared_norm() + s.E2.squared_norm());
}

SolverState init_state(const Tensor3 &h, const LtdParams &params) {
  params.validate();
  const Index n1 = h.n1(), n2 = h.n2(), n3 = h.n3();
  const Index pixels = n1 * n2;
  if (h.size() == 0 || h.squared_norm() == 0.0)
    throw Error(ErrorCode::InvalidInput, "init_state: H is empty or all zero");
  if (!h.all_finite()) throw Error(ErrorCode::NonFinite, "init_state: H has non-finite entries");
  if (params.b > pixels)
    throw Error(ErrorCode::InvalidInput, "init_state: b exceeds the number of pixels");
  const Index b = params.b;

  // Fibers are visited in a seeded random order; one is accepted when at
  // least 10% of its norm lies outside the span of those already accepted,
  // so two pixels of the same material are not both picked.
  std::mt19937_64 rng(params.seed);
  std::vector<Index> order(static_cast<std::size_t>(pixels));
  std::iota(order.begin(), order.end(), Index{0});
  std::shuffle(order.begin(), order.end(), rng);
  const Matrix h3 = mode3_unfold(h);
  std::vector<Index> picked;
  Matrix basis(n3, 0);
  for (Index p : order) {
    if (static_cast<Index>(picked.size()) == b) break;
    const Eigen::VectorXd f = h3.col(p).cwiseMax(0.0);
    const double fn = f.norm();
    if (!(fn > 0.0)) continue;
    const Eigen::VectorXd rest = f - basis * (basis.transpose() * f);
    if (rest.norm() < 0.1 * fn) continue;
    picked.push_back(p);
    if (basis.cols() < n3) {
      basis.conservativeResize(n3, basis.cols() + 1);
      basis.col(basis.cols() - 1) = rest.normalized();
    }
  }
  for (Index p : order) {
    if (static_cast<Index>(picked.size()) == b) break;
    if (std::find(picked.begin(), picked.end(), p) == picked.end()) picked.push_back(p);
  }

  SolverState s;
  s.B.resize(n3, b);
  for (Index c = 0; c < b; ++c)
    s.B.col(c) = h3.col(picked[static_cast<std::size_t>(c)]).cwiseMax(0.0).array() + 1e-6;

  // Least-squares abundances B^+ h per pixel give the tube directions of C.
  // B absorbs their typical length so that C x_3 B matches H in scale.
  Matrix abund = s.B.completeOrthogonalDecomposition().solve(h3);
  std::vector<double> lengths;
  for (Index p = 0; p < abund.cols(); ++p) {
    const double len = abund.col(p).norm();
    if (len > 1e-12) lengths.push_back(len);
    else abund.col(p).setOnes();
  }
  if (!lengths.empty()) {
    auto mid = lengths.begin() + static_cast<std::ptrdiff_t>(lengths.size() / 2);
    std::nth_element(lengths.begin(), mid, lengths.end());
    s.B *= *mid;
  }
  s.C = project_unit_tubes(mode3_fold(abund, {n1, n2, b}));
  s.E1 = Tensor3(n1, n2, n3);
  s.E2 = Tensor3(n1, n2, b);

  // D0 spans the leading singular tubes of C0, so Z0 = C0^T * D0 = V * S^T
  // has lateral slice norms equal to the singular-tube norms of C0.
  s.r = std::min(n1, n2);
  s.D = tsvd(s.C, true).U;
  s.Z = tprod_tn(s.C, s.D);
  s.D_sub = Tensor3(n1, 0, b);
  s.iter = 0;
  return s;
}

SolverState rank_reduce_step(const SolverState &s, Index *removed) {
  if (removed) *removed = 0;
  const auto norms = lateral_norms(s.Z);
  std::vector<Index> zero;
  for (Index j = 0; j < s.Z.n2(); ++j)
    if (norms[static_cast<std::size_t>(j)] == 0.0) zero.push_back(j);
  if (zero.empty() || static_cast<Index>(zero.size()) == s.Z.n2()) return s;

  SolverState next = s;
  next.D_sub = concat_lateral(s.D_sub, select_lateral(s.D, zero));
  next.D = remove_lateral(s.D, zero);
  next.Z = remove_lateral(s.Z, zero);
  next.r = next.D.n2();
  if (removed) *removed = static_cast<Index>(zero.size());
  return next;
}

SolverState validate_restore_step(const SolverState &s, const LtdParams &params, Index *restored) {
  if (restored) *restored = 0;
  if (s.D_sub.n2() == 0) return s;
  const double denom = params.lambda6 + params.rho[4];
  Tensor3 z_hat = tprod_tn(s.C - s.E2, s.D_sub) * (params.lambda6 / denom);
  const Tensor3 z_sub = prox_group_caplp(z_hat, caplp_params(params, params.lambda4 / denom));

  const auto norms = lateral_norms(z_sub);
  std::vector<Index> order;
  for (Index j = 0; j < z_sub.n2(); ++j)
    if (norms[static_cast<std::size_t>(j)] > 0.0) order.push_back(j);
  if (order.empty()) return s;
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return norms[static_cast<std::size_t>(a)] > norms[static_cast<std::size_t>(b)];
  });
  if (order.size() > 5) order.resize(5);

  SolverState next = s;
  next.Z = concat_lateral(s.Z, select_lateral(z_sub, order));
  next.D = concat_lateral(s.D, select_lateral(s.D_sub, order));
  next.D_sub = remove_lateral(s.D_sub, order);
  next.r = next.D.n2();
  if (restored) *restored = static_cast<Index>(order.size());
  return next;
}

namespace {

SolveResult run(const Tensor3 &h, const LtdParams &params, bool reduce) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - start).count(); };

  SolveResult out;
  out.state = init_state(h, params);
  Trace &tr = out.trace;
  auto record = [&](const SolverState &s, double step, Index removed, Index restored) {
    const double f = objective_F(s, h, params);
    if (!std::isfinite(f)) throw Error(ErrorCode::NumericFailure, "objective became non-finite");
    tr.objective.push_back(f);
    tr.step.push_back(step);
    tr.rank.push_back(s.r);
    tr.seconds.push_back(elapsed());
    tr.removed.push_back(removed);
    tr.restored.push_back(restored);
  };
  record(out.state, 0.0, 0, 0);

  for (int t = 1; t <= params.max_iter; ++t) {
    SolverState next = pam_step(out.state, h, params);
    const double step = step_norm(next, out.state);
    const double rel = step / std::max(1.0, state_norm(out.state));
    Index removed = 0, restored = 0;
    if (reduce) {
      if (next.iter >= 2 && next.D_sub.n2() > 0) next = validate_restore_step(next, params, &restored);
      next = rank_reduce_step(next, &removed);
    }
    out.state = std::move(next);
    record(out.state, step, removed, restored);
    if (rel < params.rel_tol && removed == 0 && restored == 0) break;
  }
  return out;
}

} // namespace

SolveResult solve_ltd(const Tensor3 &h, const LtdParams &params) { return run(h, params, false); }

SolveResult solve_ltd_rr(const Tensor3 &h, const LtdParams &params) { return run(h, params, true); }

} // namespace ltd
