#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "rdsmc/trees.hpp"

namespace {

using rdsmc::bench::dense_chain;

void BM_ForestWeightDet(benchmark::State& state) {
  const auto m = dense_chain(static_cast<std::size_t>(state.range(0)));
  const std::vector<rdsmc::State> roots{0};
  for (auto _ : state) benchmark::DoNotOptimize(rdsmc::forest_weight_det(m, roots).value);
}
BENCHMARK(BM_ForestWeightDet)->RangeMultiplier(2)->Range(4, 128);

void BM_HillStationary(benchmark::State& state) {
  const auto m = dense_chain(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rdsmc::hill_stationary(m).sigma);
}
BENCHMARK(BM_HillStationary)->RangeMultiplier(2)->Range(4, 64);

void BM_TreeEnumeration(benchmark::State& state) {
  const auto m = dense_chain(static_cast<std::size_t>(state.range(0)));
  const std::vector<rdsmc::State> roots{0};
  for (auto _ : state) benchmark::DoNotOptimize(rdsmc::forest_weight_enumerated(m, roots));
}
BENCHMARK(BM_TreeEnumeration)->DenseRange(3, 6);

}  // namespace
