#include <benchmark/benchmark.h>

#include "gaussmatch/ot/sinkhorn.hpp"
#include "gaussmatch/ot/solvers.hpp"
#include "gaussmatch/rng.hpp"
#include "gaussmatch/sampling.hpp"

using namespace gaussmatch;

namespace {

std::pair<PointCloud, PointCloud> instance(std::size_t n, std::size_t d) {
  Stream sx = Stream::derive(1, n, 0, StreamPurpose::sample_x);
  Stream sy = Stream::derive(1, n, 0, StreamPurpose::sample_y);
  return {sample_gaussian(n, d, sx).points, sample_gaussian(n, d, sy).points};
}

}  // namespace

static void BM_Assignment(benchmark::State& state) {
  const auto [X, Y] = instance(state.range(0), 3);
  const auto C = ot::cost_matrix(X, Y, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(ot::solve_assignment(C).cost);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Assignment)->RangeMultiplier(2)->Range(64, 1024)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_NetworkSimplex(benchmark::State& state) {
  const auto [X, Y] = instance(state.range(0), 3);
  const auto a = ot::DiscreteMeasure::uniform(X), b = ot::DiscreteMeasure::uniform(Y);
  for (auto _ : state) benchmark::DoNotOptimize(ot::solve_general_ot(a, b, 2.0).cost);
}
BENCHMARK(BM_NetworkSimplex)->RangeMultiplier(2)->Range(32, 256)->Unit(benchmark::kMillisecond);

static void BM_Sorted1d(benchmark::State& state) {
  const auto [X, Y] = instance(state.range(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(ot::sorted_1d_wp(X, Y, 2.0));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Sorted1d)->RangeMultiplier(10)->Range(1000, 1000000)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_Sinkhorn(benchmark::State& state) {
  const auto [X, Y] = instance(state.range(0), 2);
  const auto a = ot::DiscreteMeasure::uniform(X), b = ot::DiscreteMeasure::uniform(Y);
  ot::SinkhornSettings s;
  s.epsilon_min = 1e-2;
  for (auto _ : state) benchmark::DoNotOptimize(ot::sinkhorn(a, b, 2.0, s).cost);
}
BENCHMARK(BM_Sinkhorn)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
