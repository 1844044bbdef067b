#include <benchmark/benchmark.h>

#include <random>

#include "ltd/talgebra.hpp"

namespace {

ltd::Tensor3 random_tensor(ltd::Index n1, ltd::Index n2, ltd::Index n3, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  ltd::Tensor3 t(n1, n2, n3);
  for (double &v : t.values()) v = g(rng);
  return t;
}

void BM_Tprod(benchmark::State &state) {
  const auto n = static_cast<ltd::Index>(state.range(0));
  const ltd::Tensor3 x = random_tensor(n, 3, 30, 1), y = random_tensor(3, n, 30, 2);
  for (auto _ : state) benchmark::DoNotOptimize(ltd::tprod(x, y));
}
BENCHMARK(BM_Tprod)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMicrosecond);

void BM_TprodNt(benchmark::State &state) {
  const auto n = static_cast<ltd::Index>(state.range(0));
  const ltd::Tensor3 x = random_tensor(n, n, 3, 1), y = random_tensor(n, n, 3, 2);
  for (auto _ : state) benchmark::DoNotOptimize(ltd::tprod_nt(x, y));
}
BENCHMARK(BM_TprodNt)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

void BM_Tsvd(benchmark::State &state) {
  const auto n = static_cast<ltd::Index>(state.range(0));
  const ltd::Tensor3 x = random_tensor(n, n, 3, 3);
  for (auto _ : state) benchmark::DoNotOptimize(ltd::tsvd(x));
}
BENCHMARK(BM_Tsvd)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

// Slow reference product, small sizes only.
void BM_BcircOracle(benchmark::State &state) {
  const ltd::Tensor3 x = random_tensor(6, 6, 5, 4), y = random_tensor(6, 6, 5, 5);
  for (auto _ : state) benchmark::DoNotOptimize(ltd::bcirc_oracle_tprod(x, y));
}
BENCHMARK(BM_BcircOracle)->Unit(benchmark::kMicrosecond);

} // namespace
