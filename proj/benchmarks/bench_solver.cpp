#include <benchmark/benchmark.h>

#include "ltd/commands.hpp"
#include "ltd/cube_io.hpp"
#include "ltd/solver.hpp"
#include "ltd/synth.hpp"

namespace {

ltd::Tensor3 scene(ltd::Index n) {
  ltd::SynthSpec spec;
  spec.n1 = n;
  spec.n2 = n;
  spec.n3 = 30;
  spec.anomalies = n * n / 100;
  return ltd::normalize_cube(ltd::synth_dataset(spec).H);
}

void BM_PamStep(benchmark::State &state) {
  const ltd::Tensor3 h = scene(static_cast<ltd::Index>(state.range(0)));
  const ltd::LtdParams p = ltd::synthetic_config().solver;
  ltd::SolverState s = ltd::init_state(h, p);
  for (auto _ : state) s = ltd::pam_step(s, h, p);
}
BENCHMARK(BM_PamStep)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Solve(benchmark::State &state) {
  const ltd::Tensor3 h = scene(48);
  ltd::LtdParams p = ltd::synthetic_config().solver;
  p.rel_tol = 0.0;
  p.max_iter = 30;
  const bool rr = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(rr ? ltd::solve_ltd_rr(h, p) : ltd::solve_ltd(h, p));
}
BENCHMARK(BM_Solve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

} // namespace
