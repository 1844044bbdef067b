#include <gtest/gtest.h>

#include <algorithm>

#include "ltd/error.hpp"
#include "ltd/prox.hpp"
#include "ltd/solver.hpp"
#include "ltd/synth.hpp"
#include "ltd/talgebra.hpp"
#include "support.hpp"

using namespace ltd;
using namespace ltd::testing;

namespace {

struct Problem {
  Tensor3 h;
  SolverState s;
  LtdParams params;
};

LtdParams random_params(Rng &rng) {
  LtdParams p;
  p.lambda1 = uniform(rng, 1e-3, 0.1);
  p.lambda2 = uniform(rng, 0.05, 2.0);
  p.lambda3 = uniform(rng, 0.1, 2.0);
  p.lambda4 = uniform(rng, 0.01, 1.0);
  p.lambda5 = uniform(rng, 0.01, 0.5);
  p.lambda6 = uniform(rng, 0.01, 1.0);
  for (double &r : p.rho) r = uniform(rng, 1e-3, 0.1);
  p.p = uniform(rng, 0.2, 0.8);
  p.nu = uniform(rng, 0.5, 2.0);
  return p;
}

Tensor3 sparse_tubes(Rng &rng, Index n1, Index n2, Index n3, double keep) {
  Tensor3 t = random_tensor(rng, n1, n2, n3, 0.6);
  for (Index i = 0; i < n1; ++i)
    for (Index j = 0; j < n2; ++j)
      if (uniform(rng, 0.0, 1.0) > keep)
        for (Index k = 0; k < n3; ++k) t(i, j, k) = 0.0;
  return t;
}

Problem random_problem(Rng &rng, Index n1 = 5, Index n2 = 4, Index n3 = 6, Index b = 3, Index r = 3) {
  Problem pr;
  pr.params = random_params(rng);
  pr.params.b = b;
  pr.h = random_tensor(rng, n1, n2, n3);
  SolverState &s = pr.s;
  s.C = project_unit_tubes(random_tensor(rng, n1, n2, b));
  s.B = project_nonneg(random_matrix(rng, n3, b));
  s.E1 = sparse_tubes(rng, n1, n2, n3, 0.3);
  s.D = procrustes_orth(random_tensor(rng, n1, r, b));
  s.Z = random_tensor(rng, n2, r, b, 0.5);
  s.E2 = sparse_tubes(rng, n1, n2, b, 0.3);
  s.r = r;
  s.D_sub = Tensor3(n1, 0, b);
  return pr;
}

// Term-by-term evaluation with explicit loops and the convolution t-product.
double naive_objective(const SolverState &s, const Tensor3 &h, const LtdParams &p) {
  const Index n1 = h.n1(), n2 = h.n2(), n3 = h.n3(), b = s.B.cols();
  double f = 0.5 * p.lambda1 * s.B.squaredNorm();
  double fit = 0.0, e1 = 0.0, e2 = 0.0, cz = 0.0;
  const Tensor3 dz = naive_tprod(s.D, naive_transpose(s.Z));
  for (Index i = 0; i < n1; ++i)
    for (Index j = 0; j < n2; ++j) {
      double t1 = 0.0, t2 = 0.0;
      for (Index k = 0; k < n3; ++k) {
        double cb = 0.0;
        for (Index l = 0; l < b; ++l) cb += s.C(i, j, l) * s.B(k, l);
        const double r = h(i, j, k) - cb - s.E1(i, j, k);
        fit += r * r;
        t1 += s.E1(i, j, k) * s.E1(i, j, k);
      }
      for (Index l = 0; l < b; ++l) {
        const double r = s.C(i, j, l) - dz(i, j, l) - s.E2(i, j, l);
        cz += r * r;
        t2 += s.E2(i, j, l) * s.E2(i, j, l);
      }
      e1 += std::min(std::sqrt(t1), 1.0);
      e2 += std::min(std::sqrt(t2), 1.0);
    }
  double zs = 0.0;
  for (Index j = 0; j < s.Z.n2(); ++j) {
    double sq = 0.0;
    for (Index i = 0; i < s.Z.n1(); ++i)
      for (Index k = 0; k < s.Z.n3(); ++k) sq += s.Z(i, j, k) * s.Z(i, j, k);
    zs += std::min(std::pow(std::sqrt(sq), p.p) / std::pow(p.nu, p.p), 1.0);
  }
  return f + p.lambda2 * e1 + 0.5 * p.lambda3 * fit + p.lambda4 * zs + p.lambda5 * e2 + 0.5 * p.lambda6 * cz;
}

} // namespace

TEST(Objective, MatchesNaiveEvaluation) {
  Rng rng(30);
  for (int rep = 0; rep < 20; ++rep) {
    const Problem pr = random_problem(rng);
    const double f = objective_F(pr.s, pr.h, pr.params);
    EXPECT_NEAR(f, naive_objective(pr.s, pr.h, pr.params), 1e-10 * std::max(1.0, f));
  }
}

TEST(Objective, ExactFitLeavesTwoTerms) {
  Rng rng(31);
  Problem pr = random_problem(rng);
  pr.s.E1.set_zero();
  pr.s.E2.set_zero();
  pr.s.Z.set_zero();
  pr.h = mode3_product(pr.s.C, pr.s.B);
  const double expected = 0.5 * pr.params.lambda1 * pr.s.B.squaredNorm() + 0.5 * pr.params.lambda6 * pr.s.C.squared_norm();
  EXPECT_NEAR(objective_F(pr.s, pr.h, pr.params), expected, 1e-12);
}

TEST(Objective, CappedL1BelowOneIsLinear) {
  Rng rng(32);
  Problem pr = random_problem(rng);
  pr.params.lambda2 = 5.0;
  pr.s.E1.set_zero();
  pr.s.E1(1, 1, 0) = 0.3;
  pr.s.E1(1, 1, 2) = 0.4;
  // Tube norm 0.5. Drop the fit term so only the penalty changes.
  LtdParams no_fit = pr.params;
  no_fit.lambda3 = 0.0;
  SolverState zero_e1 = pr.s;
  zero_e1.E1.set_zero();
  EXPECT_NEAR(objective_F(pr.s, pr.h, no_fit) - objective_F(zero_e1, pr.h, no_fit), 2.5, 1e-12);
}

TEST(BlockUpdates, EachBlockDecreasesTheObjective) {
  Rng rng(33);
  for (int rep = 0; rep < 20; ++rep) {
    Problem pr = random_problem(rng);
    const LtdParams &p = pr.params;
    SolverState s = pr.s;
    auto F = [&](const SolverState &st) { return objective_F(st, pr.h, p); };
    auto check = [&](const SolverState &before, const SolverState &after, double rho, const char *name) {
      const double lhs = F(after) + 0.5 * rho * step_norm(after, before) * step_norm(after, before);
      EXPECT_LE(lhs, F(before) + 1e-10 * std::max(1.0, F(before))) << name << " rep " << rep;
    };
    SolverState t = s;
    t.C = update_C(s, pr.h, p);
    check(s, t, p.rho[0], "C");
    s = t;
    t.B = update_B(s, pr.h, p);
    check(s, t, p.rho[1], "B");
    s = t;
    t.E1 = update_E1(s, pr.h, p);
    check(s, t, p.rho[2], "E1");
    s = t;
    t.D = update_D(s, p);
    check(s, t, p.rho[3], "D");
    s = t;
    t.Z = update_Z(s, p);
    check(s, t, p.rho[4], "Z");
    s = t;
    t.E2 = update_E2(s, p);
    check(s, t, p.rho[5], "E2");
  }
}

TEST(BlockUpdates, DegenerateCases) {
  Rng rng(34);
  Problem pr = random_problem(rng);
  LtdParams p = pr.params;
  p.lambda3 = 0.0;
  p.lambda6 = 0.0;
  EXPECT_LT((update_C(pr.s, pr.h, p) - pr.s.C).norm(), 1e-12);

  // A hugely negative residual drives every B entry negative.
  Tensor3 h = pr.h;
  for (double &v : h.values()) v = -1e6;
  SolverState s = pr.s;
  s.E1.set_zero();
  for (double &v : s.C.values()) v = std::abs(v);
  EXPECT_EQ(update_B(s, h, pr.params).norm(), 0.0);

  // Exact fit: E1 stays zero.
  s.E1.set_zero();
  EXPECT_EQ(update_E1(s, mode3_product(s.C, s.B), pr.params).norm(), 0.0);

  // With Z = 0 the D step returns procrustes(rho D) = D.
  s = pr.s;
  s.Z.set_zero();
  EXPECT_LT((update_D(s, pr.params) - s.D).norm(), 1e-8);

  // Z-hat = 0 when Z = 0 and C = E2.
  s = pr.s;
  s.Z.set_zero();
  s.E2 = s.C;
  EXPECT_EQ(update_Z(s, pr.params).norm(), 0.0);
}

TEST(BlockUpdates, DStepMaximizesItsLinearTerm) {
  Rng rng(35);
  for (int rep = 0; rep < 10; ++rep) {
    const Problem pr = random_problem(rng);
    const Tensor3 g = tprod(pr.s.C - pr.s.E2, pr.s.Z) * pr.params.lambda6 + pr.s.D * pr.params.rho[3];
    const Tensor3 d = update_D(pr.s, pr.params);
    EXPECT_GE(inner(d, g), inner(pr.s.D, g) - 1e-10);
    EXPECT_LT((tprod_tn(d, d) - identity_tensor(d.n2(), d.n3())).norm(), 1e-8);
  }
}

TEST(PamStep, PreservesConstraintsAndDescends) {
  Rng rng(36);
  for (int rep = 0; rep < 10; ++rep) {
    const Problem pr = random_problem(rng);
    const SolverState next = pam_step(pr.s, pr.h, pr.params);
    EXPECT_EQ(next.iter, pr.s.iter + 1);
    EXPECT_LT((tube_norms(next.C).array() - 1.0).abs().maxCoeff(), 1e-10);
    EXPECT_GE(next.B.minCoeff(), 0.0);
    EXPECT_LT((tprod_tn(next.D, next.D) - identity_tensor(next.r, next.D.n3())).norm(), 1e-8);
    const double f0 = objective_F(pr.s, pr.h, pr.params), f1 = objective_F(next, pr.h, pr.params);
    const double st = step_norm(next, pr.s);
    EXPECT_LE(f1 + 0.5 * pr.params.rho_min() * st * st, f0 + 1e-8 * std::max(1.0, f0));
  }
}

TEST(InitState, DeterministicAndFeasible) {
  Rng rng(37);
  Tensor3 h = random_tensor(rng, 6, 5, 8);
  for (double &v : h.values()) v = std::abs(v);
  LtdParams p;
  p.b = 3;
  p.seed = 11;
  const SolverState a = init_state(h, p), b = init_state(h, p);
  EXPECT_EQ(a.C, b.C);
  EXPECT_EQ(a.B, b.B);
  EXPECT_EQ(a.D, b.D);
  EXPECT_EQ(a.Z, b.Z);
  EXPECT_EQ(a.r, 5);
  EXPECT_EQ(a.D.dims(), (Dims{6, 5, 3}));
  EXPECT_EQ(a.Z.dims(), (Dims{5, 5, 3}));
  EXPECT_EQ(a.E1.norm(), 0.0);
  EXPECT_EQ(a.E2.norm(), 0.0);
  EXPECT_EQ(a.D_sub.n2(), 0);
  EXPECT_GT(a.B.minCoeff(), 0.0);
  EXPECT_LT((tube_norms(a.C).array() - 1.0).abs().maxCoeff(), 1e-10);
  EXPECT_LT((tprod_tn(a.D, a.D) - identity_tensor(5, 3)).norm(), 1e-8);
}

TEST(InitState, Errors) {
  LtdParams p;
  EXPECT_THROW(init_state(Tensor3(3, 3, 4), p), Error);
  Tensor3 h(2, 2, 4);
  h(0, 0, 0) = 1.0;
  p.b = 5;
  EXPECT_THROW(init_state(h, p), Error);
  p.b = 2;
  h(1, 1, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(init_state(h, p), Error);
  p.lambda1 = -1.0;
  EXPECT_THROW(init_state(Tensor3(2, 2, 2), p), Error);
}

TEST(Params, Validation) {
  LtdParams p;
  EXPECT_NO_THROW(p.validate());
  p.rho[2] = 0.0;
  EXPECT_THROW(p.validate(), Error);
  p = LtdParams{};
  p.p = 1.0;
  EXPECT_THROW(p.validate(), Error);
  p = LtdParams{};
  p.lambda4 = std::nan("");
  EXPECT_THROW(p.validate(), Error);
  EXPECT_DOUBLE_EQ(LtdParams::for_profile(DatasetProfile::Abu, 0.5).lambda6, 0.05);
  EXPECT_DOUBLE_EQ(LtdParams::for_profile(DatasetProfile::Mvtec, 0.5).lambda6, 0.005);
}

TEST(RankReduce, RemovesExactlyTheZeroSlices) {
  Rng rng(38);
  Problem pr = random_problem(rng, 6, 5, 4, 2, 4);
  SolverState s = pr.s;
  Index removed = -1;
  EXPECT_EQ(rank_reduce_step(s, &removed).r, 4);
  EXPECT_EQ(removed, 0);

  for (Index i = 0; i < s.Z.n1(); ++i)
    for (Index k = 0; k < s.Z.n3(); ++k) s.Z(i, 2, k) = 0.0;
  const SolverState t = rank_reduce_step(s, &removed);
  EXPECT_EQ(removed, 1);
  EXPECT_EQ(t.r, 3);
  EXPECT_EQ(t.Z.n2(), 3);
  EXPECT_EQ(t.D.n2(), 3);
  ASSERT_EQ(t.D_sub.n2(), 1);
  for (Index i = 0; i < 6; ++i)
    for (Index k = 0; k < 2; ++k) {
      EXPECT_EQ(t.D_sub(i, 0, k), s.D(i, 2, k));
      EXPECT_EQ(t.D(i, 2, k), s.D(i, 3, k));
    }
  EXPECT_LT((tprod_tn(t.D, t.D) - identity_tensor(3, 2)).norm(), 1e-8);

  s.Z.set_zero();
  const SolverState u = rank_reduce_step(s, &removed);
  EXPECT_EQ(removed, 0);
  EXPECT_EQ(u.r, 4);
}

TEST(ValidateRestore, NothingWhenProxIsZero) {
  Rng rng(39);
  Problem pr = random_problem(rng, 6, 5, 4, 2, 2);
  pr.s.D_sub = random_tensor(rng, 6, 2, 2);
  pr.params.lambda4 = 1e6;
  Index restored = -1;
  const SolverState t = validate_restore_step(pr.s, pr.params, &restored);
  EXPECT_EQ(restored, 0);
  EXPECT_EQ(t.r, 2);
  EXPECT_EQ(t.D_sub.n2(), 2);
}

TEST(ValidateRestore, TwoParkedBothRestored) {
  Rng rng(40);
  Problem pr = random_problem(rng, 8, 6, 4, 2, 2);
  pr.params.lambda4 = 1e-6;
  const Tensor3 full = procrustes_orth(random_tensor(rng, 8, 4, 2));
  const std::vector<Index> first{0, 1}, rest{2, 3};
  pr.s.D = select_lateral(full, first);
  pr.s.D_sub = select_lateral(full, rest);
  Index restored = -1;
  const SolverState t = validate_restore_step(pr.s, pr.params, &restored);
  EXPECT_EQ(restored, 2);
  EXPECT_EQ(t.r, 4);
  EXPECT_EQ(t.D.n2(), 4);
  EXPECT_EQ(t.Z.n2(), 4);
  EXPECT_EQ(t.D_sub.n2(), 0);
}

TEST(ValidateRestore, TopFiveByNormWithLowIndexTies) {
  Rng rng(41);
  Problem pr = random_problem(rng, 10, 6, 4, 2, 1);
  pr.params.lambda4 = 1e-6;
  Tensor3 parked = random_tensor(rng, 10, 7, 2);
  // Slices 1 and 4 identical: equal prox norms, a tie.
  for (Index i = 0; i < 10; ++i)
    for (Index k = 0; k < 2; ++k) parked(i, 4, k) = parked(i, 1, k);
  pr.s.D_sub = parked;

  // Sort oracle on the prox norms.
  const double denom = pr.params.lambda6 + pr.params.rho[4];
  CapLpParams cp{pr.params.lambda4 / denom, pr.params.p, pr.params.nu};
  const Tensor3 z_sub = prox_group_caplp(tprod_tn(pr.s.C - pr.s.E2, parked) * (pr.params.lambda6 / denom), cp);
  const auto norms = lateral_norms(z_sub);
  std::vector<Index> idx(7);
  for (Index j = 0; j < 7; ++j) idx[static_cast<std::size_t>(j)] = j;
  std::sort(idx.begin(), idx.end(), [&](Index a, Index b) {
    const double na = norms[static_cast<std::size_t>(a)], nb = norms[static_cast<std::size_t>(b)];
    return na != nb ? na > nb : a < b;
  });
  idx.resize(5);

  Index restored = -1;
  const SolverState t = validate_restore_step(pr.s, pr.params, &restored);
  ASSERT_EQ(restored, 5);
  EXPECT_EQ(t.r, 6);
  EXPECT_EQ(t.D_sub.n2(), 2);
  for (Index c = 0; c < 5; ++c)
    for (Index i = 0; i < 10; ++i)
      for (Index k = 0; k < 2; ++k) EXPECT_EQ(t.D(i, 1 + c, k), parked(i, idx[static_cast<std::size_t>(c)], k));
}

TEST(Solve, ZeroIterationsReturnsInitialState) {
  SynthSpec spec;
  spec.n1 = 12;
  spec.n2 = 10;
  spec.n3 = 8;
  spec.anomalies = 5;
  const SynthData d = synth_dataset(spec);
  LtdParams p;
  p.max_iter = 0;
  const SolveResult r = solve_ltd(d.H, p);
  EXPECT_EQ(r.trace.size(), 1u);
  EXPECT_EQ(r.state.C, init_state(d.H, p).C);
}

TEST(Solve, MonotoneTraceAndDeterminism) {
  SynthSpec spec;
  spec.n1 = 16;
  spec.n2 = 14;
  spec.n3 = 10;
  spec.anomalies = 8;
  const SynthData d = synth_dataset(spec);
  LtdParams p;
  p.lambda3 = 1.0;
  p.lambda2 = 0.1;
  p.lambda5 = 1e-3;
  p.lambda4 = 0.2;
  p.max_iter = 30;
  p.rel_tol = 0.0;
  const SolveResult a = solve_ltd(d.H, p);
  ASSERT_EQ(a.trace.size(), 31u);
  for (std::size_t t = 1; t < a.trace.size(); ++t) {
    const double f0 = a.trace.objective[t - 1], st = a.trace.step[t];
    EXPECT_LE(a.trace.objective[t] + 0.5 * p.rho_min() * st * st, f0 + 1e-8 * std::max(1.0, f0)) << t;
    EXPECT_EQ(a.trace.rank[t], 14);
  }
  const SolveResult b = solve_ltd(d.H, p);
  EXPECT_EQ(a.trace.objective, b.trace.objective);
  EXPECT_EQ(a.state.E1, b.state.E1);
}

TEST(Solve, RankStaysWhenLambda4IsZero) {
  SynthSpec spec;
  spec.n1 = 12;
  spec.n2 = 12;
  spec.n3 = 8;
  spec.anomalies = 5;
  const SynthData d = synth_dataset(spec);
  LtdParams p;
  p.lambda4 = 0.0;
  p.max_iter = 15;
  p.rel_tol = 0.0;
  const SolveResult r = solve_ltd_rr(d.H, p);
  for (Index rank : r.trace.rank) EXPECT_EQ(rank, 12);
}

TEST(Solve, RankReductionShrinksWidthAndSegmentsStayMonotone) {
  SynthSpec spec;
  spec.n1 = 24;
  spec.n2 = 24;
  spec.n3 = 12;
  spec.anomalies = 10;
  const SynthData d = synth_dataset(spec);
  LtdParams p;
  p.lambda1 = 1e-2;
  p.lambda2 = 0.1;
  p.lambda3 = 1.0;
  p.lambda4 = 0.2;
  p.lambda5 = 1e-3;
  p.lambda6 = 1e-2;
  p.max_iter = 40;
  p.rel_tol = 0.0;
  const SolveResult r = solve_ltd_rr(d.H, p);
  EXPECT_LT(r.state.r, 24);
  EXPECT_EQ(r.state.D.n2(), r.state.r);
  EXPECT_EQ(r.state.Z.n2(), r.state.r);
  EXPECT_EQ(r.state.D.n2() + r.state.D_sub.n2(), 24);
  for (std::size_t t = 1; t < r.trace.size(); ++t) {
    if (r.trace.removed[t] || r.trace.restored[t] || r.trace.removed[t - 1] || r.trace.restored[t - 1]) continue;
    const double f0 = r.trace.objective[t - 1], st = r.trace.step[t];
    EXPECT_LE(r.trace.objective[t] + 0.5 * p.rho_min() * st * st, f0 + 1e-8 * std::max(1.0, f0)) << t;
  }
}
