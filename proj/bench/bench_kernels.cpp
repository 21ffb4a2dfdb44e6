#include <benchmark/benchmark.h>

#include "lemniscatic/bie.hpp"
#include "lemniscatic/kernels.hpp"

using namespace lemniscatic;

namespace {

Discretization sixteen_circles(std::size_t n) {
  std::vector<BoundaryCurve> curves;
  for (double y : {-3.0, -1.0, 1.0, 3.0})
    for (double x : {-3.0, -1.0, 1.0, 3.0}) curves.push_back(make_curve(CircleParams{{x, y}, 0.5}));
  return discretize(curves, n);
}

GridFunction ramp(std::size_t size) {
  GridFunction v(size);
  for (std::size_t i = 0; i < size; ++i) v[i] = std::sin(0.37 * static_cast<double>(i));
  return v;
}

void BM_apply_N_parallel(benchmark::State& state) {
  const Discretization disc = sixteen_circles(static_cast<std::size_t>(state.range(0)));
  const GridFunction mu = ramp(disc.size());
  for (auto _ : state) benchmark::DoNotOptimize(kernels::apply_N(disc, mu));

}

void BM_apply_N_serial(benchmark::State& state) {
  const Discretization disc = sixteen_circles(static_cast<std::size_t>(state.range(0)));
  const GridFunction mu = ramp(disc.size());
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::apply_N(disc, mu));

}

void BM_apply_M_parallel(benchmark::State& state) {
  const Discretization disc = sixteen_circles(static_cast<std::size_t>(state.range(0)));
  const GridFunction g = ramp(disc.size());
  for (auto _ : state) benchmark::DoNotOptimize(kernels::apply_M(disc, g));
}

void BM_apply_M_serial(benchmark::State& state) {
  const Discretization disc = sixteen_circles(static_cast<std::size_t>(state.range(0)));
  const GridFunction g = ramp(disc.size());
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::apply_M(disc, g));
}

void BM_solve_bie(benchmark::State& state) {
  const Discretization disc = sixteen_circles(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_bie(disc));
}

}  // namespace

BENCHMARK(BM_apply_N_parallel)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_apply_N_serial)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_apply_M_parallel)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_apply_M_serial)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_solve_bie)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
