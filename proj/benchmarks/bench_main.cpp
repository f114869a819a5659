#include <benchmark/benchmark.h>

#include <numeric>

#include "bearing/dsp.hpp"
#include "bearing/metrics.hpp"
#include "bearing/models.hpp"
#include "bearing/rng.hpp"

using namespace bearing;

namespace {

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x(n);
  for (auto& v : x) v = rng.normal();
  return x;
}

void BM_Auroc(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto s = noise(n, 1);
  std::vector<std::uint8_t> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = static_cast<std::uint8_t>(i % 2);
  for (auto _ : state) benchmark::DoNotOptimize(eval::auroc(s, y));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Auroc)->RangeMultiplier(4)->Range(64, 65536)->Complexity();

void BM_FftMagnitude(benchmark::State& state) {
  const auto x = noise(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(dsp::fft_magnitude(x, 12000.0));
}
BENCHMARK(BM_FftMagnitude)->Arg(4096)->Arg(12000)->Arg(64000);

void BM_EnvelopeSpectrum(benchmark::State& state) {
  Rng rng(3);
  const auto x = dsp::synth_bearing_signal(64.0, 2500.0, 12000.0, static_cast<double>(state.range(0)), 0.5, rng);
  for (auto _ : state) benchmark::DoNotOptimize(dsp::envelope_spectrum(x, 12000.0, 500.0, 5000.0));
}
BENCHMARK(BM_EnvelopeSpectrum)->Arg(1)->Arg(10);

void BM_FitTree(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::size_t d = 45;
  Matrix x(n, d);
  Rng rng(4);
  std::vector<std::uint8_t> y(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) x(r, c) = rng.normal();
    y[r] = static_cast<std::uint8_t>(x(r, 0) + 0.5 * x(r, 1) > 0);
  }
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), 0);
  const models::TreeParams params;
  for (auto _ : state) benchmark::DoNotOptimize(models::fit_tree(x, y, rows, params, 7));
}
BENCHMARK(BM_FitTree)->Arg(256)->Arg(2048);

}  // namespace

BENCHMARK_MAIN();
