#include <benchmark/benchmark.h>

#include <vector>

#include "nonlocal/asymptotics.hpp"
#include "nonlocal/dynamics.hpp"
#include "nonlocal/eigen.hpp"
#include "nonlocal/greens.hpp"
#include "nonlocal/kernels.hpp"

using namespace nonlocal;

namespace {

Potential bump(double amplitude) { return Potential::make(PotentialProfile::kBump, amplitude, 1.0, 0.5); }

void BM_SymbolQuadrature(benchmark::State& state) {
  const auto g = make_gaussian(1.0);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kernel_symbol(g, 40.0, n, SymbolRoute::kQuadrature));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SymbolQuadrature)->Arg(1 << 10)->Arg(1 << 14)->Unit(benchmark::kMillisecond);

void BM_ResolventTable(benchmark::State& state) {
  const auto g = make_gaussian(1.0);
  const auto count = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ResolventTable(g, 1.0, 0.05, count));
}
BENCHMARK(BM_ResolventTable)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_ConvolutionPowers(benchmark::State& state) {
  const auto g = make_gaussian(1.0);
  const SpatialGrid grid(4096, 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(conv_powers(g, static_cast<int>(state.range(0)), grid));
}
BENCHMARK(BM_ConvolutionPowers)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_PerronIteration(benchmark::State& state) {
  const auto op = build_bs_operator(make_gaussian(1.0), bump(0.5), 0.2, 2.0, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(perron_eigenvalue(op));
}
BENCHMARK(BM_PerronIteration)->Arg(128)->Arg(512)->Unit(benchmark::kMicrosecond);

void BM_PrincipalEigenvalue(benchmark::State& state) {
  const auto g = make_gaussian(1.0);
  EigenOptions opt;
  opt.ground_state = false;
  for (auto _ : state) benchmark::DoNotOptimize(principal_eigenvalue(g, bump(0.5), 2.0, opt));
}
BENCHMARK(BM_PrincipalEigenvalue)->Unit(benchmark::kMillisecond);

void BM_PhaseMin(benchmark::State& state) {
  const LargeDeviationProfile p(make_exponential_power(4.0));
  double lambda = 1.0;
  for (auto _ : state) {
    // Vary lambda so the Legendre cache does not short-circuit the search.
    lambda = lambda > 3.0 ? 1.0 : lambda + 1e-3;
    benchmark::DoNotOptimize(phase_min(p, 1.0, lambda));
  }
}
BENCHMARK(BM_PhaseMin)->Unit(benchmark::kMillisecond);

void BM_EvolverStep(benchmark::State& state) {
  const SpatialGrid grid(static_cast<std::size_t>(state.range(0)), 0.1);
  const InitialCondition ic{InitialCondition::Kind::kIndicator, 1.0, 1.0};
  EvolutionOptions opt;
  opt.kill_threshold = std::numeric_limits<double>::infinity();
  Evolver ev(make_gaussian(1.0), bump(0.5), grid, 0.05, ic.sample(grid), 0.0, opt);
  for (auto _ : state) ev.step();
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EvolverStep)->Arg(4096)->Arg(1 << 16)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
