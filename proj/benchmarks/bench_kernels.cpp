#include <benchmark/benchmark.h>

#include <random>

#include "seisflow/metrics.hpp"
#include "seisflow/nas.hpp"
#include "seisflow/pruner.hpp"
#include "seisflow/rtm.hpp"
#include "seisflow/wavesim.hpp"

using namespace seisflow;

namespace {

Field2D noise(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Field2D f(rows, cols);
  for (double& v : f.values()) v = u(rng);
  return f;
}

void BM_PropagatorStep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const int order = static_cast<int>(state.range(1));
  const VelocityModel m{Grid2D{n, n, 10, 10}, Field2D(n, n, 2500.0)};
  const Propagator p(m, 0.8 * cfl_max_dt(m, order), SpongeBoundary{}, order);
  Field2D prev = p.make_field(), curr = p.make_field(), next = p.make_field();
  curr.values()[p.index(n / 2, n / 2)] = 1.0;
  for (auto _ : state) {
    p.step(prev, curr, next);
    std::swap(prev, curr);
    std::swap(curr, next);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(p.rows() * p.cols()));
}
BENCHMARK(BM_PropagatorStep)->Args({201, 2})->Args({201, 4})->Args({401, 4});

void BM_ForwardModel(benchmark::State& state) {
  const VelocityModel m{Grid2D{201, 201, 10, 10}, Field2D(201, 201, 2000.0)};
  Acquisition acq;
  acq.source = {1005, 25};
  acq.receiver_z = 25;
  acq.nt = 500;
  for (std::size_t i = 2; i + 3 <= 201; i += 2) acq.receiver_xs.push_back((i + 0.5) * 10);
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward_model(m, acq, RickerSource{}, SpongeBoundary{}, false));
  }
}
BENCHMARK(BM_ForwardModel)->Unit(benchmark::kMillisecond);

void BM_Ssim(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Field2D a = noise(n, n, 1), b = noise(n, n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(ssim(a, b));
}
BENCHMARK(BM_Ssim)->Arg(64)->Arg(256);

void BM_FeatureLoss(benchmark::State& state) {
  const Field2D a = noise(256, 256, 3), b = noise(256, 256, 4);
  const auto ext = FeatureExtractor::default_bank();
  for (auto _ : state) benchmark::DoNotOptimize(feature_loss(a, b, ext));
}
BENCHMARK(BM_FeatureLoss);

void BM_LevelPrune(benchmark::State& state) {
  std::mt19937_64 rng(5);
  std::normal_distribution<float> d(0.0f, 1.0f);
  std::vector<float> w(static_cast<std::size_t>(state.range(0)));
  for (float& v : w) v = d(rng);
  const auto t = WeightTensor::flat(w);
  for (auto _ : state) benchmark::DoNotOptimize(level_prune(t, {0.7}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LevelPrune)->Arg(64)->Arg(1 << 16)->Arg(1 << 20);

void BM_Discretize(benchmark::State& state) {
  const nas::CellSpec cell{static_cast<std::size_t>(state.range(0)), 2};
  std::mt19937_64 rng(6);
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<double> l(cell.edge_count() * nas::kNumOps);
  for (double& v : l) v = d(rng);
  const nas::AlphaMatrix alpha(cell.edge_count(), l);
  for (auto _ : state) benchmark::DoNotOptimize(nas::discretize(alpha, cell));
}
BENCHMARK(BM_Discretize)->Arg(4)->Arg(16);

void BM_SmoothModel(benchmark::State& state) {
  const VelocityModel m{Grid2D{201, 201, 10, 10}, noise(201, 201, 7)};
  for (auto _ : state) benchmark::DoNotOptimize(smooth_model(m, 8));
}
BENCHMARK(BM_SmoothModel);

}  // namespace

BENCHMARK_MAIN();
