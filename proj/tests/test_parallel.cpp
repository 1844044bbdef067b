#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <stdexcept>

#include "ltd/parallel.hpp"
#include "ltd/solver.hpp"
#include "ltd/synth.hpp"
#include "ltd/talgebra.hpp"
#include "support.hpp"

using namespace ltd;
using namespace ltd::testing;

namespace {

struct ThreadCap {
  explicit ThreadCap(const char *v) { ::setenv("LTD_THREADS", v, 1); }
  ~ThreadCap() { ::unsetenv("LTD_THREADS"); }
};

} // namespace

TEST(Parallel, EnvironmentCap) {
  {
    ThreadCap cap("1");
    EXPECT_EQ(worker_count(), 1);
  }
  {
    ThreadCap cap("garbage");
    EXPECT_GE(worker_count(), 1);
  }
  {
    ThreadCap cap("-4");
    EXPECT_GE(worker_count(), 1);
  }
}

TEST(Parallel, VisitsEveryIndexOnce) {
  ThreadCap cap("4");
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(1000, [&](Index i) { hits[static_cast<std::size_t>(i)]++; });
  for (auto &h : hits) EXPECT_EQ(h.load(), 1);
  parallel_for(0, [](Index) { FAIL(); });
}

TEST(Parallel, PropagatesExceptions) {
  ThreadCap cap("3");
  EXPECT_THROW(parallel_for(50, [](Index i) {
                 if (i == 17) throw std::runtime_error("boom");
               }),
               std::runtime_error);
}

TEST(Parallel, ResultsIndependentOfThreadCount) {
  Rng rng(80);
  const Tensor3 x = random_tensor(rng, 9, 7, 11), y = random_tensor(rng, 7, 6, 11);
  SynthSpec spec;
  spec.n1 = 16;
  spec.n2 = 16;
  spec.n3 = 9;
  spec.anomalies = 6;
  const SynthData d = synth_dataset(spec);
  LtdParams p;
  p.max_iter = 8;
  p.rel_tol = 0.0;

  Tensor3 prod1, prod4;
  SolveResult r1, r4;
  {
    ThreadCap cap("1");
    prod1 = tprod(x, y);
    r1 = solve_ltd_rr(d.H, p);
  }
  {
    ThreadCap cap("4");
    prod4 = tprod(x, y);
    r4 = solve_ltd_rr(d.H, p);
  }
  EXPECT_EQ(prod1, prod4);
  EXPECT_EQ(r1.trace.objective, r4.trace.objective);
  EXPECT_EQ(r1.state.E1, r4.state.E1);
  EXPECT_EQ(r1.state.E2, r4.state.E2);
}
