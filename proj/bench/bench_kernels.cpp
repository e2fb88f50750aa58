// OpenMP kernels against their serial references on the workloads the library
// actually runs: guided-mode totals and spin-map grids.
#include <benchmark/benchmark.h>

#include "transpin/cli.hpp"
#include "transpin/kernels.hpp"
#include "transpin/observables.hpp"

using namespace transpin;

namespace {

GuidedModeSpec bench_mode(int m) {
  GuidedModeSpec s;
  s.geometry = {2.29e-2, 1.02e-2, 5.0e-2};
  s.index = {Family::TM, m, m};
  s.omega = 1.5 * cutoff_frequency(s.geometry, s.index, s.constants);
  s.amplitude_h = 150.0;
  return s;
}

void BM_GuidedTotals(benchmark::State& state, bool parallel) {
  const GuidedModeSpec spec = bench_mode(static_cast<int>(state.range(0)));
  QuadratureConfig cfg;
  cfg.parallel = parallel;
  cfg.nodes_z = 8;
  for (auto _ : state) benchmark::DoNotOptimize(integrate_guided(spec, cfg));
}

void BM_SpinMap(benchmark::State& state, bool parallel) {
  cli::RunConfig cfg;
  cfg.guided = bench_mode(2);
  cfg.nx = cfg.ny = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cli::spin_map(cfg, parallel));
  state.SetItemsProcessed(state.iterations() * cfg.nx * cfg.ny);
}

void BM_TensorQuadrature(benchmark::State& state, bool parallel) {
  const QuadratureRule r = map_to_interval(gauss_legendre(static_cast<int>(state.range(0))), 0, 1);
  auto f = [](double x, double y, double z) {
    return kernels::Values<2>{std::sin(7 * x) * std::cos(5 * y) * std::exp(z), x * y * z};
  };
  for (auto _ : state) {
    benchmark::DoNotOptimize(parallel ? kernels::tensor_quadrature<2>(r, r, r, f)
                                      : kernels::tensor_quadrature_serial<2>(r, r, r, f));
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_GuidedTotals, serial, false)->Arg(1)->Arg(3);
BENCHMARK_CAPTURE(BM_GuidedTotals, openmp, true)->Arg(1)->Arg(3);
BENCHMARK_CAPTURE(BM_SpinMap, serial, false)->Arg(41)->Arg(201);
BENCHMARK_CAPTURE(BM_SpinMap, openmp, true)->Arg(41)->Arg(201);
BENCHMARK_CAPTURE(BM_TensorQuadrature, serial, false)->Arg(16)->Arg(48);
BENCHMARK_CAPTURE(BM_TensorQuadrature, openmp, true)->Arg(16)->Arg(48);

BENCHMARK_MAIN();
