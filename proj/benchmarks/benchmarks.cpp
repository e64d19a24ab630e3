#include <vector>

#include <benchmark/benchmark.h>

#include "kleinweyl/catalog.hpp"
#include "kleinweyl/hadamard.hpp"
#include "kleinweyl/spectral.hpp"
#include "kleinweyl/spectrum.hpp"

namespace hn = kleinweyl::harness;

namespace {

kleinweyl::geometry::StationaryData reference_data(int grid) {
  return *hn::build_model(hn::default_model(hn::ModelKind::LapseShiftTorus), {grid, grid}).data;
}

void BM_SpectralDerivative(benchmark::State& state) {
  const auto data = reference_data(static_cast<int>(state.range(0)));
  const auto& f = data.lapse().values();
  for (auto _ : state) {
    benchmark::DoNotOptimize(kleinweyl::spectral_derivative(data.chart(), f, 0));
  }
  state.SetItemsProcessed(state.iterations() * f.size());
}
BENCHMARK(BM_SpectralDerivative)->Arg(32)->Arg(64)->Arg(128);

void BM_PencilSolve(benchmark::State& state) {
  const auto data = reference_data(64);
  const int K = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const auto pencil = kleinweyl::spectrum::build_pencil(data, K);
    benchmark::DoNotOptimize(
        kleinweyl::spectrum::solve_spectrum(kleinweyl::spectrum::linearize(pencil)));
  }
  state.counters["pencil_size"] = (2 * K + 1) * (2 * K + 1);
}
BENCHMARK(BM_PencilSolve)->Arg(4)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_GeodesicShooting(benchmark::State& state) {
  const auto data = reference_data(64);
  const kleinweyl::hadamard::LocalModel model(data);
  const std::vector<double> base{0.0, 1.0, 2.0};
  std::vector<double> x = base;
  x[0] = 0.1 * static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(kleinweyl::hadamard::shoot_connect(model.metric(), x, base));
  }
}
BENCHMARK(BM_GeodesicShooting)->Arg(1)->Arg(2)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
