// Serial reference kernels against their OpenMP versions, on grids and channel counts
// typical of the tracker (32x32 to 64x64 cells, tens to hundreds of channels).

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "adtrack/eco_solver.hpp"
#include "adtrack/kernels.hpp"

using namespace adtrack;
using kernels::Backend;

namespace {

std::vector<SpectrumMap> random_spectra(GridSize g, int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  std::vector<SpectrumMap> out(k, SpectrumMap(g));
  for (auto& m : out)
    for (auto& v : m) v = Complex(n(rng), n(rng));
  return out;
}

struct Setup {
  GridSize g;
  std::vector<std::vector<SpectrumMap>> xs;
  std::vector<kernels::WeightedSample> samples;
  std::vector<SpectrumMap> h, out;
  SpectrumMap y;

  Setup(int side, int k, int n_samples) : g{side, side}, h(random_spectra(g, k, 99)), out(k, SpectrumMap(g)), y(g) {
    for (int j = 0; j < n_samples; ++j) xs.push_back(random_spectra(g, k, j + 1));
    for (const auto& x : xs) samples.push_back({x, 1.0 / n_samples});
    y = random_spectra(g, 1, 7)[0];
  }
};

Backend backend_of(const benchmark::State& s) { return s.range(2) ? Backend::OpenMP : Backend::Serial; }

void set_label(benchmark::State& s) { s.SetLabel(s.range(2) ? "omp" : "serial"); }

void BM_ApplyDataTerm(benchmark::State& s) {
  Setup d(static_cast<int>(s.range(0)), static_cast<int>(s.range(1)), 8);
  for (auto _ : s) {
    kernels::apply_data_term(d.samples, d.h, d.out, backend_of(s));
    benchmark::DoNotOptimize(d.out.data());
  }
  set_label(s);
}

void BM_AccumulateResponse(benchmark::State& s) {
  Setup d(static_cast<int>(s.range(0)), static_cast<int>(s.range(1)), 1);
  SpectrumMap r(d.g);
  for (auto _ : s) {
    kernels::accumulate_response(d.h, d.xs[0], r, backend_of(s));
    benchmark::DoNotOptimize(r.data());
  }
  set_label(s);
}

void BM_AdmmFilterStep(benchmark::State& s) {
  Setup d(static_cast<int>(s.range(0)), static_cast<int>(s.range(1)), 1);
  const auto dual = random_spectra(d.g, static_cast<int>(s.range(1)), 5);
  for (auto _ : s) {
    kernels::admm_filter_step(d.xs[0], d.y, dual, d.h, 1.0, d.out, backend_of(s));
    benchmark::DoNotOptimize(d.out.data());
  }
  set_label(s);
}

void BM_TrainEco(benchmark::State& s) {
  const GridSize g{static_cast<int>(s.range(0)), static_cast<int>(s.range(0))};
  Setup d(g.rows, static_cast<int>(s.range(1)), 8);
  const auto reg = make_spatial_regularizer(g, g.rows / 4.0, g.cols / 4.0, 0.1, 20.0);
  const auto y = make_gaussian_label(g, 1.0);
  for (auto _ : s) {
    auto res = train_eco(d.samples, reg, y, nullptr, {10, 1e-12}, backend_of(s));
    benchmark::DoNotOptimize(res.filters.data());
  }
  set_label(s);
}

void kernel_args(benchmark::internal::Benchmark* b) {
  for (int side : {32, 64})
    for (int k : {9, 256})
      for (int omp : {0, 1}) b->Args({side, k, omp});
}

}  // namespace

BENCHMARK(BM_ApplyDataTerm)->Apply(kernel_args)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_AccumulateResponse)->Apply(kernel_args)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_AdmmFilterStep)->Apply(kernel_args)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_TrainEco)->Args({48, 64, 0})->Args({48, 64, 1})->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
