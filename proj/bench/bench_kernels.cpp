// Serial reference vs tiled/OpenMP kernels, plus end-to-end inference and
// interpolation. Run with OMP_NUM_THREADS to vary the thread count.

#include <benchmark/benchmark.h>

#include "sanp/baselines.hpp"
#include "sanp/kernels.hpp"
#include "sanp/predict.hpp"
#include "sanp/rng.hpp"
#include "sanp/synth.hpp"

namespace {

using namespace sanp;

std::vector<float> random_values(std::size_t n, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  std::vector<float> v(n);
  for (auto& x : v) x = float(uniform(rng, -1, 1));
  return v;
}

template <bool Reference>
void BM_gemm(benchmark::State& state) {
  const auto n = std::size_t(state.range(0));
  const kernels::GemmShape s{n, n, n};
  const auto a = random_values(n * n, 1), b = random_values(n * n, 2);
  std::vector<float> c(n * n);
  for (auto _ : state) {
    if constexpr (Reference)
      kernels::reference::gemm<float>(s, 1.0f, a, b, 0.0f, c);
    else
      kernels::gemm<float>(s, 1.0f, a, b, 0.0f, c);
    benchmark::DoNotOptimize(c.data());
  }
  state.counters["GFLOP/s"] = benchmark::Counter(
      2.0 * double(n * n * n), benchmark::Counter::kIsIterationInvariantRate,
      benchmark::Counter::kIs1000);
}
BENCHMARK(BM_gemm<true>)->Name("gemm/reference")->Arg(64)->Arg(256)->Arg(512);
BENCHMARK(BM_gemm<false>)->Name("gemm/parallel")->Arg(64)->Arg(256)->Arg(512);

template <bool Reference>
void BM_softmax(benchmark::State& state) {
  const std::size_t rows = 100, cols = std::size_t(state.range(0));
  const auto in = random_values(rows * cols, 3);
  std::vector<float> out(in.size());
  for (auto _ : state) {
    if constexpr (Reference)
      kernels::reference::softmax_rows<float>(rows, cols, in, out);
    else
      kernels::softmax_rows<float>(rows, cols, in, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_softmax<true>)->Name("softmax/reference")->Arg(100)->Arg(400);
BENCHMARK(BM_softmax<false>)->Name("softmax/parallel")->Arg(100)->Arg(400);

struct Scene {
  DemGrid grid;
  std::vector<MapCoord> targets;
  ModelParams<float> params;
  InferenceSetup setup;
};

const Scene& scene() {
  static const Scene s = [] {
    SynthSpec spec;
    spec.size = 128;
    spec.seed = 4;
    Scene out{synth_terrain(spec), {}, ModelParams<float>::init(ModelConfig{}, 1), {}};
    Rng rng = make_rng(5);
    for (int i = 0; i < 16; ++i)
      out.targets.push_back(out.grid.center(16 + uniform_index(rng, 96),
                                            16 + uniform_index(rng, 96)));
    out.setup = {{500.0, 500.0}, {100, 400.0, 0}, elevation_stats(out.grid)};
    return out;
  }();
  return s;
}

template <bool Reference>
void BM_predict(benchmark::State& state) {
  const Scene& s = scene();
  for (auto _ : state) {
    auto r = Reference ? reference::predict(s.params, s.grid, s.targets, s.setup)
                       : predict(s.params, s.grid, s.targets, s.setup);
    benchmark::DoNotOptimize(r.data());
  }
  state.SetItemsProcessed(state.iterations() * std::int64_t(s.targets.size()));
}
BENCHMARK(BM_predict<true>)->Name("predict/reference")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_predict<false>)->Name("predict/parallel")->Unit(benchmark::kMillisecond);

template <bool Reference>
void BM_interpolate(benchmark::State& state) {
  SynthSpec spec;
  spec.size = 256;
  const DemGrid g = punch_voids(synth_terrain(spec), {VoidShape::Blob, 0.2}, 1);
  std::vector<MapCoord> targets;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!g.observed(i)) targets.push_back(g.center(i));
  const auto m = InterpMethod::Cubic;
  for (auto _ : state) {
    auto r = Reference ? reference::interpolate(m, g, targets) : interpolate(m, g, targets);
    benchmark::DoNotOptimize(r.values.data());
  }
  state.SetItemsProcessed(state.iterations() * std::int64_t(targets.size()));
}
BENCHMARK(BM_interpolate<true>)->Name("interp_cubic/reference")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_interpolate<false>)->Name("interp_cubic/parallel")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
