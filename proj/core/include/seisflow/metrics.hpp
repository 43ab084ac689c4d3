#pragma once

#include <optional>
#include <vector>

#include "seisflow/field.hpp"

namespace seisflow {

enum class SsimWindow { uniform, gaussian };

struct SsimConfig {
  double k1 = 0.01;
  double k2 = 0.03;
  /// Fixed L; when unset, L = max(a, b) - min(a, b) over both images (1 if that is 0).
  std::optional<double> dynamic_range;
  SsimWindow window = SsimWindow::gaussian;
  std::size_t window_size = 11;
  double sigma = 1.5;  // gaussian only

  static SsimConfig uniform(std::size_t size);

  void validate() const;
  /// Normalised window weights, window_size x window_size, row-major.
  std::vector<double> weights() const;
};

/// Mean SSIM over every valid (fully inside) window position.
double ssim(const Field2D& a, const Field2D& b, const SsimConfig& cfg = {});

enum class PixelNorm { L1, L2 };

/// L1: mean |a - b|.  L2: sqrt(mean (a - b)^2).
double pixel_loss(const Field2D& a, const Field2D& b, PixelNorm norm);

/// Odd-sized correlation kernel.
struct Kernel2D {
  std::size_t rows = 1;
  std::size_t cols = 1;
  std::vector<double> w{1.0};
};

/// One extractor stage: optional pre-filter, then decimation by `downsample`,
/// then each kernel of `bank` applied to the decimated carrier. The carrier
/// (not the bank output) feeds the next stage.
struct FeatureStage {
  std::optional<Kernel2D> prefilter;
  std::size_t downsample = 1;
  std::vector<Kernel2D> bank;
};

class FeatureExtractor {
 public:
  explicit FeatureExtractor(std::vector<FeatureStage> stages);

  /// Three stages with exact rational coefficients:
  ///   1. identity, d/dx [-1/2 0 1/2], d/dz (its transpose)
  ///   2. 5x5 binomial blur ([1 4 6 4 1]^T [1 4 6 4 1] / 256), 2x decimation, d/dx, d/dz
  ///   3. stage 2 repeated (quarter scale)
  static FeatureExtractor default_bank();
  /// Single identity stage; feature_loss reduces to the L2 pixel distance.
  static FeatureExtractor identity();

  const std::vector<FeatureStage>& stages() const noexcept { return stages_; }

  /// Output channels of every stage. Convolutions use replicate padding.
  /// Throws DimensionMismatch if the image is too small for the stage chain.
  std::vector<std::vector<Field2D>> extract(const Field2D& image) const;

 private:
  std::vector<FeatureStage> stages_;
};

/// Sum over stages of the Euclidean norm of the stage output difference.
double feature_loss(const Field2D& a, const Field2D& b, const FeatureExtractor& ext);

/// pixel_loss + lambda * feature_loss
double combined_loss(const Field2D& a, const Field2D& b, double lambda, const FeatureExtractor& ext,
                     PixelNorm norm);

}  // namespace seisflow
