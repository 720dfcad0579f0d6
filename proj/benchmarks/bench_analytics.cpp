#include <array>

#include <benchmark/benchmark.h>

#include "gaussmatch/bounds/trace.hpp"
#include "gaussmatch/mehler.hpp"
#include "gaussmatch/quadrature.hpp"
#include "gaussmatch/rng.hpp"
#include "gaussmatch/sampling.hpp"
#include "gaussmatch/smoothing/schedule.hpp"
#include "gaussmatch/smoothing/smoothed.hpp"
#include "gaussmatch/special.hpp"

using namespace gaussmatch;

static void BM_MehlerKernel(benchmark::State& state) {
  const std::array<double, 3> x{0.3, -1.2, 2.0}, y{-0.7, 0.4, 1.1};
  double t = 0.1;
  for (auto _ : state) benchmark::DoNotOptimize(mehler_kernel(t, x, y));
}
BENCHMARK(BM_MehlerKernel);

static void BM_NoncentralChiSquare(benchmark::State& state) {
  const double lambda = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(noncentral_chi_square_cdf(lambda * 1.01, 3.0, lambda));
}
BENCHMARK(BM_NoncentralChiSquare)->Arg(10)->Arg(1000)->Arg(100000);

static void BM_GaussHermiteIntegrate(benchmark::State& state) {
  const int nodes = static_cast<int>(state.range(0));
  gauss_hermite_rule(nodes);
  for (auto _ : state) benchmark::DoNotOptimize(gauss_hermite_integrate([](double x) { return x * x; }, nodes));
}
BENCHMARK(BM_GaussHermiteIntegrate)->Arg(16)->Arg(64);

static void BM_H12Norm(benchmark::State& state) {
  const std::size_t n = state.range(0);
  const auto schedule = smoothing::AnnulusSchedule::build(static_cast<double>(n), 3, 2.0, smoothing::Variant::general_p);
  Stream sx = Stream::derive(3, n, 0, StreamPurpose::sample_x);
  Stream aux = Stream::derive(3, n, 0, StreamPurpose::localize);
  const auto loc = smoothing::localize(sample_gaussian(n, 3, sx), schedule, aux);
  const auto sm = smoothing::assign_times(loc.sample, schedule);
  for (auto _ : state) benchmark::DoNotOptimize(smoothing::h12_norm_sq(sm).value);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_H12Norm)->RangeMultiplier(4)->Range(64, 1024)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_TraceIntegral(benchmark::State& state) {
  const auto cfg = bounds::LowerBoundConfig::defaults(1e6, 2);
  for (auto _ : state) benchmark::DoNotOptimize(bounds::trace_integral(cfg).value);
}
BENCHMARK(BM_TraceIntegral)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
