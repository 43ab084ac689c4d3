#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "seisflow/errors.hpp"
#include "seisflow/metrics.hpp"
#include "support.hpp"

using namespace seisflow;
using testing_support::random_field;

namespace {

// Per-window SSIM straight from the definition, two-pass moments, own weight table.
double ssim_oracle(const Field2D& a, const Field2D& b, bool gaussian, std::size_t size, double sigma = 1.5) {
  std::vector<double> w(size * size);
  double wsum = 0;
  const double c = (size - 1) / 2.0;
  for (std::size_t p = 0; p < size; ++p)
    for (std::size_t q = 0; q < size; ++q) {
      const double d2 = (p - c) * (p - c) + (q - c) * (q - c);
      w[p * size + q] = gaussian ? std::exp(-d2 / (2 * sigma * sigma)) : 1.0;
      wsum += w[p * size + q];
    }
  for (double& x : w) x /= wsum;

  double lo = a(0, 0), hi = a(0, 0);
  for (const auto* f : {&a, &b})
    for (double v : f->values()) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  const double L = hi > lo ? hi - lo : 1.0;
  const double c1 = (0.01 * L) * (0.01 * L), c2 = (0.03 * L) * (0.03 * L);

  double total = 0;
  std::size_t count = 0;
  for (std::size_t j = 0; j + size <= a.rows(); ++j)
    for (std::size_t i = 0; i + size <= a.cols(); ++i) {
      double ma = 0, mb = 0;
      for (std::size_t p = 0; p < size; ++p)
        for (std::size_t q = 0; q < size; ++q) {
          ma += w[p * size + q] * a(j + p, i + q);
          mb += w[p * size + q] * b(j + p, i + q);
        }
      double va = 0, vb = 0, cov = 0;
      for (std::size_t p = 0; p < size; ++p)
        for (std::size_t q = 0; q < size; ++q) {
          const double da = a(j + p, i + q) - ma, db = b(j + p, i + q) - mb;
          va += w[p * size + q] * da * da;
          vb += w[p * size + q] * db * db;
          cov += w[p * size + q] * da * db;
        }
      total += (2 * ma * mb + c1) * (2 * cov + c2) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
      ++count;
    }
  return total / count;
}

}  // namespace

TEST(Ssim, IdentityIsOne) {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 20; ++k) {
    const auto x = random_field(rng, 64, 64, -3, 7);
    EXPECT_NEAR(ssim(x, x), 1.0, 1e-9);
    EXPECT_NEAR(ssim(x, x, SsimConfig::uniform(8)), 1.0, 1e-9);
  }
  const Field2D flat(20, 20, 4.0);
  EXPECT_NEAR(ssim(flat, flat), 1.0, 1e-12);
}

TEST(Ssim, SymmetricAndBounded) {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 20; ++k) {
    const auto a = random_field(rng, 40, 33);
    const auto b = random_field(rng, 40, 33, -0.5, 2);
    const double s = ssim(a, b);
    EXPECT_NEAR(s, ssim(b, a), 1e-12);
    EXPECT_GE(s, -1.0);
    EXPECT_LE(s, 1.0);
  }
}

TEST(Ssim, MatchesPerWindowOracle) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 10; ++k) {
    const auto a = random_field(rng, 64, 64);
    auto b = a;
    std::normal_distribution<double> n(0, 0.3 * (k + 1) / 10.0);
    for (double& v : b.values()) v += n(rng);
    EXPECT_NEAR(ssim(a, b), ssim_oracle(a, b, true, 11), 1e-6);
    EXPECT_NEAR(ssim(a, b, SsimConfig::uniform(8)), ssim_oracle(a, b, false, 8), 1e-6);
    EXPECT_NEAR(ssim(a, b, SsimConfig::uniform(3)), ssim_oracle(a, b, false, 3), 1e-6);
  }
}

TEST(Ssim, ContrastReversalAboutCommonMeanScoresNegative) {
  std::mt19937_64 rng(4);
  const auto x = random_field(rng, 48, 48, -0.5, 0.5);
  auto a = x, b = x;
  for (double& v : a.values()) v = 5.0 + v;
  for (double& v : b.values()) v = 5.0 - v;
  const double s = ssim(a, b);
  EXPECT_LT(s, 0.0);
  EXPECT_NEAR(s, ssim_oracle(a, b, true, 11), 1e-6);
}

TEST(Ssim, DecreasesWithNoiseLevel) {
  const double eps[] = {0.0, 0.02, 0.05, 0.1, 0.2, 0.4, 0.8};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(seed);
    Field2D a(48, 48);
    for (std::size_t j = 0; j < 48; ++j)
      for (std::size_t i = 0; i < 48; ++i) a(j, i) = std::sin(0.3 * i) * std::cos(0.2 * j);
    const auto noise = random_field(rng, 48, 48);
    double prev = 2.0;
    for (double e : eps) {
      auto b = a;
      for (std::size_t k = 0; k < b.size(); ++k) b.values()[k] += e * noise.values()[k];
      const double s = ssim(a, b);
      ASSERT_LT(s, prev) << "seed " << seed << " eps " << e;
      prev = s;
    }
  }
}

TEST(Ssim, FixedDynamicRange) {
  std::mt19937_64 rng(5);
  const auto a = random_field(rng, 30, 30, 0, 255);
  const auto b = random_field(rng, 30, 30, 0, 255);
  SsimConfig cfg;
  cfg.dynamic_range = 255.0;
  EXPECT_NE(ssim(a, b, cfg), ssim(a, b));
  EXPECT_GE(ssim(a, b, cfg), -1.0);
}

TEST(Ssim, Errors) {
  EXPECT_THROW(ssim(Field2D(20, 20), Field2D(20, 21)), DimensionMismatch);
  EXPECT_THROW(ssim(Field2D(10, 30), Field2D(10, 30)), DimensionMismatch);
  SsimConfig even;
  even.window_size = 10;
  EXPECT_THROW(ssim(Field2D(20, 20), Field2D(20, 20), even), ConfigError);
  SsimConfig bad;
  bad.k1 = 0;
  EXPECT_THROW(ssim(Field2D(20, 20), Field2D(20, 20), bad), ConfigError);
  Field2D nan(20, 20);
  nan(3, 3) = NAN;
  EXPECT_THROW(ssim(nan, Field2D(20, 20)), ConfigError);
}

TEST(PixelLoss, Examples) {
  std::mt19937_64 rng(6);
  const auto a = random_field(rng, 17, 23);
  EXPECT_EQ(pixel_loss(a, a, PixelNorm::L1), 0.0);
  EXPECT_EQ(pixel_loss(a, a, PixelNorm::L2), 0.0);
  auto shifted = a;
  for (double& v : shifted.values()) v -= 0.75;
  EXPECT_NEAR(pixel_loss(a, shifted, PixelNorm::L1), 0.75, 1e-12);

  const auto b = random_field(rng, 17, 23);
  double sum = 0;
  for (std::size_t j = 0; j < 17; ++j)
    for (std::size_t i = 0; i < 23; ++i) sum += (a(j, i) - b(j, i)) * (a(j, i) - b(j, i));
  EXPECT_NEAR(pixel_loss(a, b, PixelNorm::L2), std::sqrt(sum / (17 * 23)), 1e-12);
  EXPECT_THROW(pixel_loss(a, Field2D(17, 22), PixelNorm::L1), DimensionMismatch);
}

TEST(FeatureLoss, IdentityExtractorIsPixelDistance) {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 10; ++k) {
    const auto a = random_field(rng, 31, 26);
    const auto b = random_field(rng, 31, 26);
    double sq = 0;
    for (std::size_t q = 0; q < a.size(); ++q) sq += (a.values()[q] - b.values()[q]) * (a.values()[q] - b.values()[q]);
    EXPECT_NEAR(feature_loss(a, b, FeatureExtractor::identity()), std::sqrt(sq), 1e-9);
  }
}

TEST(FeatureLoss, ZeroIffEqualAndSymmetric) {
  std::mt19937_64 rng(8);
  const auto ext = FeatureExtractor::default_bank();
  for (int k = 0; k < 20; ++k) {
    const auto a = random_field(rng, 32, 40);
    EXPECT_EQ(feature_loss(a, a, ext), 0.0);
    auto b = a;
    b(rng() % 32, rng() % 40) += 1e-6;
    EXPECT_GT(feature_loss(a, b, ext), 0.0);
    const auto c = random_field(rng, 32, 40);
    EXPECT_DOUBLE_EQ(feature_loss(a, c, ext), feature_loss(c, a, ext));
    EXPECT_GE(feature_loss(a, c, ext), 0.0);
  }
}

TEST(FeatureLoss, DefaultBankShapes) {
  const auto out = FeatureExtractor::default_bank().extract(Field2D(33, 20, 1.0));
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[0].size(), 3u);
  EXPECT_EQ(out[1].size(), 2u);
  EXPECT_EQ(out[1][0].rows(), 17u);
  EXPECT_EQ(out[1][0].cols(), 10u);
  EXPECT_EQ(out[2][1].rows(), 9u);
  EXPECT_EQ(out[2][1].cols(), 5u);
  // Gradients of a constant vanish under replicate padding.
  EXPECT_EQ(out[2][0].max_abs(), 0.0);
}

TEST(FeatureLoss, GradientStageOnRamp) {
  Field2D ramp(12, 12);
  for (std::size_t j = 0; j < 12; ++j)
    for (std::size_t i = 0; i < 12; ++i) ramp(j, i) = 3.0 * i;
  const auto out = FeatureExtractor::default_bank().extract(ramp);
  EXPECT_DOUBLE_EQ(out[0][1](5, 5), 3.0);
  EXPECT_DOUBLE_EQ(out[0][1](5, 0), 1.5);  // replicate padding at the left edge
  EXPECT_DOUBLE_EQ(out[0][2](5, 5), 0.0);
}

TEST(FeatureLoss, Errors) {
  EXPECT_THROW(feature_loss(Field2D(8, 8), Field2D(8, 9), FeatureExtractor::default_bank()), DimensionMismatch);
  EXPECT_THROW(FeatureExtractor::default_bank().extract(Field2D(4, 4)), DimensionMismatch);
  EXPECT_THROW(FeatureExtractor({}), ConfigError);
  EXPECT_THROW(FeatureExtractor({FeatureStage{std::nullopt, 1, {Kernel2D{2, 1, {1, 1}}}}}), ConfigError);
}

TEST(CombinedLoss, Relations) {
  std::mt19937_64 rng(9);
  const auto a = random_field(rng, 25, 25);
  const auto b = random_field(rng, 25, 25);
  const auto ext = FeatureExtractor::default_bank();
  EXPECT_EQ(combined_loss(a, b, 0.0, ext, PixelNorm::L1), pixel_loss(a, b, PixelNorm::L1));
  EXPECT_EQ(combined_loss(a, a, 2.5, ext, PixelNorm::L2), 0.0);
  const double p = pixel_loss(a, b, PixelNorm::L2);
  EXPECT_NEAR(combined_loss(a, b, 1.0, FeatureExtractor::identity(), PixelNorm::L2), p * (1 + std::sqrt(625.0)), 1e-9);
  EXPECT_NEAR(combined_loss(a, b, 0.3, ext, PixelNorm::L1),
              pixel_loss(a, b, PixelNorm::L1) + 0.3 * feature_loss(a, b, ext), 1e-12);
}
