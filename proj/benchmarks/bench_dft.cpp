#include <benchmark/benchmark.h>

#include <msglance/dft.hpp>

using namespace msglance;

namespace {

void BM_Dft2(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  ComplexGrid g(n, n);
  for (std::size_t i = 0; i < g.data.size(); ++i) g.data[i] = {static_cast<double>(i % 7), 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(dft2(g));
}
// 320 is not a power of two and takes the direct path
BENCHMARK(BM_Dft2)->Arg(64)->Arg(256)->Arg(320)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
