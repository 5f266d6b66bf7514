// Wall-clock comparison of end-to-end inference against the segment-wise
// adapted path. With parallel workers the adapted path should stay within a
// small factor of the single full pass (informational, not a hard gate).

#include <benchmark/benchmark.h>

#include <random>

#include "dspass/adaptation.hpp"
#include "dspass/parallel.hpp"
#include "dspass/swaftnet.hpp"

using namespace dspass;

namespace {

Raster random_panorama(int h, int w) {
  std::mt19937 rng(123);
  std::uniform_real_distribution<float> dist(0.0f, 1.0f);
  Raster t(3, h, w);
  for (float& v : t.storage()) v = dist(rng);
  return t;
}

const Network& shared_net() {
  static Network net = [] {
    NetworkDef def;
    def.num_classes = 6;
    return build(def, SeededRandom{42});
  }();
  return net;
}

void bench_full_pass(benchmark::State& state) {
  set_num_threads(static_cast<int>(state.range(0)));
  const Network& net = shared_net();
  Raster pano = random_panorama(64, 256);
  for (auto _ : state) {
    benchmark::DoNotOptimize(full_pass(net, pano, PadMode::kRing));
  }
}
BENCHMARK(bench_full_pass)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void bench_run_adapted(benchmark::State& state) {
  set_num_threads(static_cast<int>(state.range(1)));
  const Network& net = shared_net();
  Raster pano = random_panorama(64, 256);
  SegmentPlan plan;
  plan.num_segments = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_adapted_full(net, pano, plan));
  }
}
BENCHMARK(bench_run_adapted)
    ->ArgsProduct({{1, 2, 4}, {1, 4}})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
