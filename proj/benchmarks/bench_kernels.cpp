#include <benchmark/benchmark.h>

#include <random>

#include "dspass/conv.hpp"
#include "dspass/kernels.hpp"
#include "dspass/parallel.hpp"

using namespace dspass;

namespace {

Tensor rand_tensor(std::mt19937& rng, int c, int h, int w) {
  std::uniform_real_distribution<float> dist(-1.0f, 1.0f);
  Tensor t(c, h, w);
  for (float& v : t.storage()) v = dist(rng);
  return t;
}

ConvParams rand_conv(std::mt19937& rng, int out_c, int in_c, int k) {
  std::uniform_real_distribution<float> dist(-0.1f, 0.1f);
  ConvParams p;
  p.out_channels = out_c;
  p.in_channels = in_c;
  p.kernel_h = k;
  p.kernel_w = k;
  p.stride = 1;
  p.weights.resize(static_cast<std::size_t>(out_c) * in_c * k * k);
  for (float& v : p.weights) v = dist(rng);
  return p;
}

void bench_conv3x3(benchmark::State& state) {
  set_num_threads(static_cast<int>(state.range(2)));
  std::mt19937 rng(1);
  const int c = static_cast<int>(state.range(0));
  const int hw = static_cast<int>(state.range(1));
  Tensor x = rand_tensor(rng, c, hw, hw * 2);
  ConvParams p = rand_conv(rng, c, c, 3);
  PaddingSpec spec = PaddingSpec::ring(1, 1, 1, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(conv2d(x, p, spec));
  }
  const double macs = 2.0 * c * c * 9.0 * hw * (hw * 2);
  state.counters["GFLOP/s"] = benchmark::Counter(
      macs * state.iterations() * 1e-9, benchmark::Counter::kIsRate);
}
BENCHMARK(bench_conv3x3)
    ->ArgsProduct({{32, 64, 128}, {32, 64}, {1, 4}})
    ->Unit(benchmark::kMillisecond);

void bench_pad_modes(benchmark::State& state) {
  set_num_threads(1);
  std::mt19937 rng(2);
  Tensor x = rand_tensor(rng, 64, 64, 128);
  const PadMode mode = static_cast<PadMode>(state.range(0));
  PaddingSpec spec{mode, 3, 3, 3, 3, {}, {}};
  if (mode == PadMode::kNeighbor) {
    spec.left_buffer = rand_tensor(rng, 64, 64, 3);
    spec.right_buffer = rand_tensor(rng, 64, 64, 3);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(pad(x, spec));
  }
}
BENCHMARK(bench_pad_modes)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMicrosecond);

void bench_upsample(benchmark::State& state) {
  set_num_threads(static_cast<int>(state.range(0)));
  std::mt19937 rng(3);
  Tensor x = rand_tensor(rng, 128, 16, 32);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bilinear_upsample(x, 32, 64, WrapMode::kWrap));
  }
}
BENCHMARK(bench_upsample)->Arg(1)->Arg(4)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
