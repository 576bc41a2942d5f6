#include <benchmark/benchmark.h>

#include <msglance/glance.hpp>
#include <msglance/ssim.hpp>

using namespace msglance;

namespace {

Image noise(std::size_t n, std::size_t ch, std::uint64_t seed) {
  Rng rng(seed);
  Image img(n, n, ch);
  for (double& v : img.data()) v = rng.uniform();
  return img;
}

void BM_MsGlanceLoss(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Image ref = noise(n, 1, 1), pred = noise(n, 1, 2);
  GlanceConfig cfg;
  cfg.grid_rows = cfg.grid_cols = std::min<std::size_t>(n, 96);
  Rng rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(ms_glance_loss(ref, pred, cfg, rng));
}
BENCHMARK(BM_MsGlanceLoss)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_SsimLoss(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Image ref = noise(n, 1, 1), pred = noise(n, 1, 2);
  for (auto _ : state) benchmark::DoNotOptimize(ssim_loss_grad(ref, pred, SsimConfig{}));
}
BENCHMARK(BM_SsimLoss)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
