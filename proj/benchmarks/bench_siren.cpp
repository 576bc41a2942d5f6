#include <benchmark/benchmark.h>

#include <msglance/siren.hpp>
#include <msglance/trainer.hpp>

using namespace msglance;

namespace {

// One full-batch objective evaluation with gradients, i.e. a training step
// without the optimizer update.
void BM_ObjectiveStep(benchmark::State& state) {
  const auto kind = static_cast<LossKind>(state.range(0));
  Rng rng(1);
  Image target(64, 64, 1);
  for (double& v : target.data()) v = rng.uniform();
  const SirenConfig cfg;
  const SirenNetwork net = siren_init(cfg, rng);
  const Eigen::MatrixXd inputs = siren_inputs(64, 64, cfg);
  GlanceConfig glance;
  glance.grid_rows = glance.grid_cols = 64;
  SirenGradients grads;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        evaluate_objective(net, inputs, target, kind, 0.01, glance, SsimConfig{}, rng, &grads));
  }
  state.SetLabel(std::string(to_string(kind)));
}
BENCHMARK(BM_ObjectiveStep)
    ->Arg(static_cast<int>(LossKind::l2))
    ->Arg(static_cast<int>(LossKind::l2_msglance))
    ->Arg(static_cast<int>(LossKind::l2_ssim))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
