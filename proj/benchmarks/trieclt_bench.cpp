#include <cmath>

#include <benchmark/benchmark.h>

#include "trieclt/analytics.hpp"
#include "trieclt/numeric.hpp"
#include "trieclt/toll.hpp"
#include "trieclt/trie.hpp"

namespace {

using namespace trieclt;

const ProbModel& p37() {
  static const ProbModel m = ProbModel::from_rationals({{3, 10}, {7, 10}});
  return m;
}

void BM_SampleFixed(benchmark::State& state) {
  const StringSource src(p37(), 1);
  const auto n = std::uint64_t(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sample_fixed(n, src.derive(state.iterations())));
  state.SetItemsProcessed(std::int64_t(state.iterations() * n));
}
BENCHMARK(BM_SampleFixed)->RangeMultiplier(8)->Range(64, 1 << 15);

void BM_EvalAdditive(benchmark::State& state) {
  const Trie t = sample_fixed(std::uint64_t(state.range(0)), StringSource(p37(), 2));
  const Toll toll = Toll::fringe_size(2);
  for (auto _ : state) benchmark::DoNotOptimize(eval_additive(toll, t));
}
BENCHMARK(BM_EvalAdditive)->RangeMultiplier(8)->Range(64, 1 << 15);

void BM_ProtectedConstant(benchmark::State& state) {
  const auto k = unsigned(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(analytics::protected_constant(p37(), k));
}
BENCHMARK(BM_ProtectedConstant)->DenseRange(2, 5);

void BM_PrefixSum(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(analytics::prefix_sum_real(p37(), [](double x) { return x * x; }));
}
BENCHMARK(BM_PrefixSum);

}  // namespace

BENCHMARK_MAIN();
