#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "tankest/estimators.hpp"
#include "tankest/exact.hpp"
#include "tankest/simulate.hpp"

namespace {

using namespace tankest;

void BM_Estimate(benchmark::State& state) {
  std::vector<Label> labels(static_cast<std::size_t>(state.range(0)));
  std::iota(labels.begin(), labels.end(), Label{1});
  const auto sample = SerialSample::from_values(labels);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_all(sample, kAllEstimators));
}
BENCHMARK(BM_Estimate)->Arg(15)->Arg(1000);

void BM_DrawSample(benchmark::State& state) {
  SubsetSampler sampler(1000, state.range(0));
  RandomStream stream = make_cell_stream(42, 1000, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sampler.draw(stream));
}
BENCHMARK(BM_DrawSample)->Arg(5)->Arg(30)->Arg(500);

void BM_RunCell(benchmark::State& state) {
  const CellRequest request{300, 15, state.range(0),
                            {kAllEstimators.begin(), kAllEstimators.end()}, 42, false};
  for (auto _ : state) benchmark::DoNotOptimize(run_cell(request));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RunCell)->Arg(10'000)->Unit(benchmark::kMillisecond);

void BM_ExactMidrange(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(exact_moments(EstimatorId::midrange, state.range(0), 30));
  }
}
BENCHMARK(BM_ExactMidrange)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_EnumerateMoments(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_moments(EstimatorId::midrange, state.range(0), 6));
  }
}
BENCHMARK(BM_EnumerateMoments)->Arg(12)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
