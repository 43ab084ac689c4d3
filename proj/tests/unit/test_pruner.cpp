#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "seisflow/errors.hpp"
#include "seisflow/pruner.hpp"

using namespace seisflow;

namespace {

// Full sort of (|w|, index) pairs; the first m are pruned.
std::vector<std::uint8_t> full_sort_oracle(const std::vector<float>& w, double fraction) {
  std::vector<std::pair<float, std::size_t>> keyed;
  for (std::size_t k = 0; k < w.size(); ++k) keyed.emplace_back(std::fabs(w[k]), k);
  std::sort(keyed.begin(), keyed.end());
  const auto m = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(w.size())));
  std::vector<std::uint8_t> keep(w.size(), 1);
  for (std::size_t k = 0; k < m; ++k) keep[keyed[k].second] = 0;
  return keep;
}

std::vector<float> random_weights(std::mt19937_64& rng, std::size_t n) {
  // Coarse values so ties and exact zeros occur often.
  std::uniform_int_distribution<int> d(-8, 8);
  std::vector<float> w(n);
  for (auto& v : w) v = (rng() % 3 == 0) ? static_cast<float>(d(rng)) * 0.25f : std::ldexp(static_cast<float>(d(rng)), -3) + 1e-3f * (rng() % 7);
  return w;
}

}  // namespace

TEST(LevelPrune, HandExample) {
  const auto w = WeightTensor::flat({-0.1f, 0.5f, 0.2f, -0.4f, 0.05f});
  const auto mask = level_prune(w, {0.4});
  EXPECT_EQ(mask.keep, (std::vector<std::uint8_t>{0, 1, 1, 1, 0}));
  const auto pruned = apply_mask(w, mask);
  EXPECT_EQ(pruned.values, (std::vector<float>{0.0f, 0.5f, 0.2f, -0.4f, 0.0f}));
  EXPECT_DOUBLE_EQ(sparsity_of(pruned), 0.4);
}

TEST(LevelPrune, FractionEndpoints) {
  const auto w = WeightTensor::flat({1, -2, 3, 0, 5, 6, 7});
  EXPECT_EQ(level_prune(w, {0.0}).pruned(), 0u);
  EXPECT_EQ(level_prune(w, {1.0}).pruned(), 7u);
  EXPECT_EQ(apply_mask(w, level_prune(w, {0.0})).values, w.values);
  const auto all = apply_mask(w, level_prune(w, {1.0}));
  EXPECT_DOUBLE_EQ(sparsity_of(all), 1.0);
}

TEST(LevelPrune, TiesGoToLowerIndexAndZerosFirst) {
  const auto w = WeightTensor::flat({0.3f, -0.3f, 0.0f, 0.3f, 0.1f});
  EXPECT_EQ(level_prune(w, {0.2}).keep, (std::vector<std::uint8_t>{1, 1, 0, 1, 1}));
  EXPECT_EQ(level_prune(w, {0.6}).keep, (std::vector<std::uint8_t>{0, 1, 0, 1, 0}));
}

TEST(LevelPrune, ExactCountOverFractionGrid) {
  std::mt19937_64 rng(1);
  for (std::size_t n = 1; n <= 70; ++n) {
    const auto w = WeightTensor::flat(random_weights(rng, n));
    for (int f = 0; f <= 20; ++f) {
      const double fraction = f / 20.0;
      ASSERT_EQ(level_prune(w, {fraction}).pruned(), static_cast<std::size_t>(std::floor(fraction * n)));
    }
  }
}

TEST(LevelPrune, MatchesFullSortOracleAndOrderProperty) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng() % 64;
    const auto values = random_weights(rng, n);
    const double fraction = u(rng);
    const auto mask = level_prune(WeightTensor::flat(values), {fraction});
    ASSERT_EQ(mask.keep, full_sort_oracle(values, fraction)) << "trial " << trial;
    float max_pruned = -1, min_kept = INFINITY;
    for (std::size_t k = 0; k < n; ++k) {
      if (mask.keep[k]) min_kept = std::min(min_kept, std::fabs(values[k]));
      else max_pruned = std::max(max_pruned, std::fabs(values[k]));
    }
    ASSERT_LE(max_pruned, min_kept);
  }
}

TEST(LevelPrune, Idempotent) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto w = WeightTensor::flat(random_weights(rng, 1 + rng() % 50));
    const SparsityTarget s{(rng() % 11) / 10.0};
    const auto once = apply_mask(w, level_prune(w, s));
    const auto twice = apply_mask(once, level_prune(once, s));
    ASSERT_EQ(once.values, twice.values);
  }
}

TEST(LevelPrune, PermutationEquivariantForDistinctMagnitudes) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 40;
    std::vector<float> w(n);
    for (std::size_t k = 0; k < n; ++k) w[k] = (k + 1) * 0.5f * (rng() % 2 ? 1.0f : -1.0f);
    std::shuffle(w.begin(), w.end(), rng);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<float> pw(n);
    for (std::size_t k = 0; k < n; ++k) pw[k] = w[perm[k]];
    const SparsityTarget s{(rng() % 101) / 100.0};
    const auto m = level_prune(WeightTensor::flat(w), s);
    const auto pm = level_prune(WeightTensor::flat(pw), s);
    for (std::size_t k = 0; k < n; ++k) ASSERT_EQ(pm.keep[k], m.keep[perm[k]]);
  }
}

TEST(Sparsity, Examples) {
  EXPECT_DOUBLE_EQ(sparsity_of(WeightTensor::flat({0.0f, -0.0f, 0.0f})), 1.0);
  EXPECT_DOUBLE_EQ(sparsity_of(WeightTensor::flat({1.0f, -2.0f})), 0.0);
  EXPECT_THROW(sparsity_of(WeightTensor{}), DimensionMismatch);
}

TEST(Pruner, Errors) {
  const auto w = WeightTensor::flat({1, 2, 3});
  EXPECT_THROW(level_prune(w, {1.5}), ConfigError);
  EXPECT_THROW(level_prune(w, {-0.1}), ConfigError);
  EXPECT_THROW(apply_mask(w, PruneMask{{1, 0}}), DimensionMismatch);
  WeightTensor bad{{1, 2, 3}, {2, 2}};
  EXPECT_THROW(level_prune(bad, {0.5}), DimensionMismatch);
  WeightTensor inf = WeightTensor::flat({1, INFINITY});
  EXPECT_THROW(level_prune(inf, {0.5}), ConfigError);
}

TEST(Pruner, ShapeKept) {
  WeightTensor w{{1, -2, 3, -4, 5, -6}, {2, 3}};
  const auto out = apply_mask(w, level_prune(w, {0.5}));
  EXPECT_EQ(out.shape, w.shape);
  EXPECT_EQ(out.values, (std::vector<float>{0, 0, 0, -4, 5, -6}));
}
