#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "rdsmc/cycles.hpp"
#include "rdsmc/rds.hpp"
#include "rdsmc/simulate.hpp"

namespace {

using rdsmc::bench::dense_chain;

void BM_CycleWeights(benchmark::State& state) {
  const auto m = dense_chain(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rdsmc::cycle_weights(m).lambda);
}
BENCHMARK(BM_CycleWeights)->DenseRange(3, 7);

void BM_MaxEntEnumeration(benchmark::State& state) {
  const auto m = dense_chain(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    double total = 0.0;
    rdsmc::maxent_rds(m).for_each([&](const rdsmc::DeterministicMap&, double w) { total += w; });
    benchmark::DoNotOptimize(total);
  }
}
BENCHMARK(BM_MaxEntEnumeration)->DenseRange(2, 6);

void BM_SimulateMc(benchmark::State& state) {
  const auto m = dense_chain(8);
  const auto p0 = rdsmc::ProbVector::uniform(8);
  const auto steps = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rdsmc::simulate_mc(m, p0, steps, 1).states.back());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateMc)->Range(1 << 10, 1 << 18);

void BM_EmpiricalCycles(benchmark::State& state) {
  const auto m = dense_chain(5);
  const auto steps = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rdsmc::empirical_cycles(m, 0, steps, 1).total);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EmpiricalCycles)->Range(1 << 10, 1 << 16);

void BM_CftpSample(benchmark::State& state) {
  std::vector<rdsmc::WeightedMap> support;
  rdsmc::maxent_rds(dense_chain(4)).for_each(
      [&](const rdsmc::DeterministicMap& a, double w) { support.push_back({a, w}); });
  const rdsmc::RDSMeasure q(support);
  std::uint64_t replica = 0;
  for (auto _ : state) benchmark::DoNotOptimize(rdsmc::cftp_sample(q, 1, 1 << 20, replica++).state);
}
BENCHMARK(BM_CftpSample);

}  // namespace

BENCHMARK_MAIN();
