#include <benchmark/benchmark.h>

#include <vector>

#include "alf/asymmetry.hpp"
#include "alf/losses.hpp"
#include "alf/rng.hpp"
#include "alf/trainer.hpp"

namespace {

const alf::LossSpec& spec_for(int index) {
  static const std::vector<alf::LossSpec> specs{
      alf::LossSpec::ce(), alf::LossSpec::agce(0.6, 0.6), alf::LossSpec::nce(),
      alf::LossSpec::apl(alf::LossSpec::nce(), alf::LossSpec::agce(6, 1.5), 1, 4)};
  return specs[static_cast<std::size_t>(index)];
}

std::vector<double> random_logits(std::size_t k) {
  alf::Rng rng(1);
  std::vector<double> z(k);
  for (double& v : z) v = rng.normal();
  return z;
}

void BM_LossValue(benchmark::State& state) {
  const auto& spec = spec_for(static_cast<int>(state.range(0)));
  const auto u = alf::softmax(std::span<const double>(random_logits(10)));
  for (auto _ : state) benchmark::DoNotOptimize(alf::loss_value(spec, std::span<const double>(u), 3));
  state.SetLabel(spec.to_string());
}
BENCHMARK(BM_LossValue)->DenseRange(0, 3);

void BM_LossGradLogits(benchmark::State& state) {
  const auto& spec = spec_for(static_cast<int>(state.range(0)));
  const auto z = random_logits(10);
  std::vector<double> grad(10), scratch(10);
  for (auto _ : state) {
    benchmark::DoNotOptimize(alf::loss_and_grad_logits(spec, z, 3, grad, scratch));
    benchmark::ClobberMemory();
  }
  state.SetLabel(spec.to_string());
}
BENCHMARK(BM_LossGradLogits)->DenseRange(0, 3);

void BM_RatioGrid(benchmark::State& state) {
  const auto spec = alf::LossSpec::aul(2, 3);
  for (auto _ : state) benchmark::DoNotOptimize(alf::asymmetry_ratio_numeric(spec, 0.01));
}
BENCHMARK(BM_RatioGrid)->Unit(benchmark::kMillisecond);

void BM_BruteArgmin(benchmark::State& state) {
  const auto spec = alf::LossSpec::agce(1, 2);
  const alf::WeightVector w({0.5, 0.3, 0.2});
  for (auto _ : state) benchmark::DoNotOptimize(alf::verify_argmin_brute(spec, w, 0.01));
}
BENCHMARK(BM_BruteArgmin)->Unit(benchmark::kMillisecond);

void BM_TrainEpoch(benchmark::State& state) {
  const auto data = alf::make_blobs(4, 1000, 20, 8.0, 1.0, 0);
  alf::TrainConfig cfg;
  cfg.epochs = 1;
  const auto spec = alf::LossSpec::agce(1, 2);
  for (auto _ : state) benchmark::DoNotOptimize(alf::train({20, 64, 64, 4}, cfg, spec, data));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(data.size()));
}
BENCHMARK(BM_TrainEpoch)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
