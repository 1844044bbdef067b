#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ltd/fusion.hpp"
#include "ltd/tensor.hpp"

namespace ltd {

enum class DatasetProfile { Abu, Mvtec, Custom };

struct LtdParams {
  double lambda1 = 1e-2;
  double lambda2 = 5.0;
  double lambda3 = 1e-1;
  double lambda4 = 5e-1;
  double lambda5 = 1e-1;
  double lambda6 = 1e-2;
  std::array<double, 6> rho{1e-2, 1e-2, 1e-2, 1e-2, 1e-2, 1e-2};
  Index b = 3;
  double p = 0.5;
  double nu = 1.0;
  int max_iter = 100;
  double rel_tol = 1e-3;
  std::uint64_t seed = 0;
  bool rank_reduction = true;
  FusionMode fusion_mode = FusionMode::Single;
  bool normalize_input = true;
  /// Use lambda_hat itself (not lambda_hat / nu^p) inside the Lp step of the
  /// capped-Lp prox.
  bool literal_caplp_weight = false;

  /// Weights must be finite and >= 0, proximal weights > 0, b >= 1,
  /// 0 < p < 1, nu > 0, max_iter >= 0, rel_tol >= 0.
  void validate() const;

  /// Defaults with lambda6 tied to lambda3: / 10 for Abu, / 100 for Mvtec.
  static LtdParams for_profile(DatasetProfile profile, double lambda3 = 1e-1);

  double rho_min() const;
};

/// Iterate of the alternating scheme. Shapes for an n1 x n2 x n3 cube:
/// C, E2: n1 x n2 x b; B: n3 x b; E1: n1 x n2 x n3; D: n1 x r x b;
/// Z: n2 x r x b; D_sub: n1 x s x b (lateral slices parked by rank reduction).
struct SolverState {
  Tensor3 C;
  Matrix B;
  Tensor3 E1;
  Tensor3 D;
  Tensor3 Z;
  Tensor3 E2;
  Index r = 0;
  Tensor3 D_sub;
  int iter = 0;
};

/// Entry 0 describes the initial state; entry t the state after iteration t.
/// step[t] is ||W^t - W^(t-1)|| measured across the six blocks of the
/// alternating step (before any rank event), step[0] = 0.
struct Trace {
  std::vector<double> objective;
  std::vector<double> step;
  std::vector<Index> rank;
  std::vector<double> seconds;
  std::vector<Index> removed;
  std::vector<Index> restored;

  std::size_t size() const { return objective.size(); }
};

double objective_F(const SolverState &s, const Tensor3 &h, const LtdParams &params);

Tensor3 update_C(const SolverState &s, const Tensor3 &h, const LtdParams &params);
Matrix update_B(const SolverState &s, const Tensor3 &h, const LtdParams &params);
Tensor3 update_E1(const SolverState &s, const Tensor3 &h, const LtdParams &params);
Tensor3 update_D(const SolverState &s, const LtdParams &params);
Tensor3 update_Z(const SolverState &s, const LtdParams &params);
Tensor3 update_E2(const SolverState &s, const LtdParams &params);

/// One sweep C -> B -> E1 -> D -> Z -> E2, each block seeing the newest
/// values of the others. Increments iter.
SolverState pam_step(const SolverState &s, const Tensor3 &h, const LtdParams &params);

/// ||a - b|| over all six blocks; the states must have the same shapes.
double step_norm(const SolverState &a, const SolverState &b);

/// ||W|| over all six blocks.
double state_norm(const SolverState &s);

SolverState init_state(const Tensor3 &h, const LtdParams &params);

/// Removes the lateral slices of Z that are exactly zero, together with the
/// matching slices of D, which are parked in D_sub. Does nothing when every
/// slice is zero.
SolverState rank_reduce_step(const SolverState &s, Index *removed = nullptr);

/// Re-evaluates the parked slices and restores up to five whose proximal
/// output is nonzero, largest first (ties to the lower index).
SolverState validate_restore_step(const SolverState &s, const LtdParams &params,
                                  Index *restored = nullptr);

struct SolveResult {
  SolverState state;
  Trace trace;
};

/// Fixed-width solver.
SolveResult solve_ltd(const Tensor3 &h, const LtdParams &params);

/// Solver with rank reduction and validation.
SolveResult solve_ltd_rr(const Tensor3 &h, const LtdParams &params);

} // namespace ltd
