#include "seisflow/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "seisflow/errors.hpp"

namespace seisflow {

namespace {

void require_finite(const Field2D& f, const char* what) {
  if (!f.all_finite()) throw ConfigError(std::string(what) + ": image contains non-finite values");
}

// Valid-mode separable correlation with a symmetric 1D kernel.
Field2D filter_valid(const Field2D& in, const std::vector<double>& k) {
  const std::size_t s = k.size();
  const std::size_t rows = in.rows() - s + 1;
  const std::size_t cols = in.cols() - s + 1;
  Field2D tmp(in.rows(), cols);
  for (std::size_t j = 0; j < in.rows(); ++j) {
    for (std::size_t i = 0; i < cols; ++i) {
      double acc = 0.0;
      for (std::size_t q = 0; q < s; ++q) acc += k[q] * in(j, i + q);
      tmp(j, i) = acc;
    }
  }
  Field2D out(rows, cols);
  for (std::size_t j = 0; j < rows; ++j) {
    for (std::size_t i = 0; i < cols; ++i) {
      double acc = 0.0;
      for (std::size_t p = 0; p < s; ++p) acc += k[p] * tmp(j + p, i);
      out(j, i) = acc;
    }
  }
  return out;
}

std::vector<double> window_1d(const SsimConfig& cfg) {
  const std::size_t s = cfg.window_size;
  std::vector<double> w(s, 1.0);
  if (cfg.window == SsimWindow::gaussian) {
    const double c = static_cast<double>(s - 1) / 2.0;
    for (std::size_t q = 0; q < s; ++q) {
      const double d = static_cast<double>(q) - c;
      w[q] = std::exp(-d * d / (2.0 * cfg.sigma * cfg.sigma));
    }
  }
  double total = 0.0;
  for (double v : w) total += v;
  for (double& v : w) v /= total;
  return w;
}

Field2D correlate_replicate(const Field2D& in, const Kernel2D& k) {
  const auto hr = static_cast<std::ptrdiff_t>(k.rows / 2);
  const auto hc = static_cast<std::ptrdiff_t>(k.cols / 2);
  const auto nr = static_cast<std::ptrdiff_t>(in.rows());
  const auto nc = static_cast<std::ptrdiff_t>(in.cols());
  Field2D out(in.rows(), in.cols());
  for (std::ptrdiff_t j = 0; j < nr; ++j) {
    for (std::ptrdiff_t i = 0; i < nc; ++i) {
      double acc = 0.0;
      for (std::ptrdiff_t p = -hr; p <= hr; ++p) {
        const auto jj = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(j + p, 0, nr - 1));
        for (std::ptrdiff_t q = -hc; q <= hc; ++q) {
          const auto ii = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i + q, 0, nc - 1));
          acc += k.w[static_cast<std::size_t>((p + hr) * static_cast<std::ptrdiff_t>(k.cols) + q + hc)] *
                 in(jj, ii);
        }
      }
      out(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) = acc;
    }
  }
  return out;
}

Field2D decimate(const Field2D& in, std::size_t factor) {
  if (factor == 1) return in;
  const std::size_t rows = (in.rows() + factor - 1) / factor;
  const std::size_t cols = (in.cols() + factor - 1) / factor;
  Field2D out(rows, cols);
  for (std::size_t j = 0; j < rows; ++j) {
    for (std::size_t i = 0; i < cols; ++i) out(j, i) = in(j * factor, i * factor);
  }
  return out;
}

Kernel2D grad_x() { return {1, 3, {-0.5, 0.0, 0.5}}; }
Kernel2D grad_z() { return {3, 1, {-0.5, 0.0, 0.5}}; }

Kernel2D binomial5() {
  const double b[5] = {1.0, 4.0, 6.0, 4.0, 1.0};
  Kernel2D k{5, 5, std::vector<double>(25)};
  for (std::size_t p = 0; p < 5; ++p) {
    for (std::size_t q = 0; q < 5; ++q) k.w[p * 5 + q] = b[p] * b[q] / 256.0;
  }
  return k;
}

void validate_kernel(const Kernel2D& k) {
  if (k.rows % 2 == 0 || k.cols % 2 == 0 || k.w.size() != k.rows * k.cols) {
    throw ConfigError("feature kernels must be odd-sized with rows*cols coefficients");
  }
  for (double v : k.w) {
    if (!std::isfinite(v)) throw ConfigError("feature kernel coefficient is not finite");
  }
}

}  // namespace

SsimConfig SsimConfig::uniform(std::size_t size) {
  SsimConfig cfg;
  cfg.window = SsimWindow::uniform;
  cfg.window_size = size;
  return cfg;
}

void SsimConfig::validate() const {
  if (!(k1 > 0.0 && k2 > 0.0)) throw ConfigError("SSIM k1 and k2 must be positive");
  if (dynamic_range && !(*dynamic_range > 0.0)) throw ConfigError("SSIM dynamic range must be positive");
  if (window_size < 3) throw ConfigError("SSIM window must be at least 3");
  if (window == SsimWindow::gaussian && window_size % 2 == 0) {
    throw ConfigError("gaussian SSIM window size must be odd");
  }
  if (window == SsimWindow::gaussian && !(sigma > 0.0)) throw ConfigError("SSIM sigma must be positive");
}

std::vector<double> SsimConfig::weights() const {
  const auto w = window_1d(*this);
  std::vector<double> out(w.size() * w.size());
  for (std::size_t p = 0; p < w.size(); ++p) {
    for (std::size_t q = 0; q < w.size(); ++q) out[p * w.size() + q] = w[p] * w[q];
  }
  return out;
}

double ssim(const Field2D& a, const Field2D& b, const SsimConfig& cfg) {
  cfg.validate();
  require_same_shape(a, b, "ssim");
  require_finite(a, "ssim");
  require_finite(b, "ssim");
  if (a.rows() < cfg.window_size || a.cols() < cfg.window_size) {
    throw DimensionMismatch("ssim: image " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                            " is smaller than the " + std::to_string(cfg.window_size) + " window");
  }

  double range = 0.0;
  if (cfg.dynamic_range) {
    range = *cfg.dynamic_range;
  } else {
    range = std::max(a.max(), b.max()) - std::min(a.min(), b.min());
    if (range == 0.0) range = 1.0;
  }
  const double c1 = (cfg.k1 * range) * (cfg.k1 * range);
  const double c2 = (cfg.k2 * range) * (cfg.k2 * range);

  Field2D aa(a.rows(), a.cols()), bb(a.rows(), a.cols()), ab(a.rows(), a.cols());
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double x = a.values()[k];
    const double y = b.values()[k];
    aa.values()[k] = x * x;
    bb.values()[k] = y * y;
    ab.values()[k] = x * y;
  }
  const auto w = window_1d(cfg);
  const Field2D mu_a = filter_valid(a, w);
  const Field2D mu_b = filter_valid(b, w);
  const Field2D e_aa = filter_valid(aa, w);
  const Field2D e_bb = filter_valid(bb, w);
  const Field2D e_ab = filter_valid(ab, w);

  double total = 0.0;
  for (std::size_t k = 0; k < mu_a.size(); ++k) {
    const double ma = mu_a.values()[k];
    const double mb = mu_b.values()[k];
    const double va = e_aa.values()[k] - ma * ma;
    const double vb = e_bb.values()[k] - mb * mb;
    const double cov = e_ab.values()[k] - ma * mb;
    total += ((2.0 * ma * mb + c1) * (2.0 * cov + c2)) /
             ((ma * ma + mb * mb + c1) * (va + vb + c2));
  }
  return total / static_cast<double>(mu_a.size());
}

double pixel_loss(const Field2D& a, const Field2D& b, PixelNorm norm) {
  require_same_shape(a, b, "pixel_loss");
  if (a.empty()) throw DimensionMismatch("pixel_loss on empty images");
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a.values()[k] - b.values()[k];
    acc += norm == PixelNorm::L1 ? std::abs(d) : d * d;
  }
  acc /= static_cast<double>(a.size());
  return norm == PixelNorm::L1 ? acc : std::sqrt(acc);
}

FeatureExtractor::FeatureExtractor(std::vector<FeatureStage> stages) : stages_(std::move(stages)) {
  if (stages_.empty()) throw ConfigError("feature extractor needs at least one stage");
  for (const auto& st : stages_) {
    if (st.downsample == 0) throw ConfigError("downsample factor must be >= 1");
    if (st.bank.empty()) throw ConfigError("each feature stage needs at least one kernel");
    if (st.prefilter) validate_kernel(*st.prefilter);
    for (const auto& k : st.bank) validate_kernel(k);
  }
}

FeatureExtractor FeatureExtractor::default_bank() {
  const Kernel2D identity_kernel{};
  FeatureStage s1{std::nullopt, 1, {identity_kernel, grad_x(), grad_z()}};
  FeatureStage s2{binomial5(), 2, {grad_x(), grad_z()}};
  FeatureStage s3 = s2;
  return FeatureExtractor({s1, s2, s3});
}

FeatureExtractor FeatureExtractor::identity() {
  return FeatureExtractor({FeatureStage{std::nullopt, 1, {Kernel2D{}}}});
}

std::vector<std::vector<Field2D>> FeatureExtractor::extract(const Field2D& image) const {
  std::vector<std::vector<Field2D>> out;
  out.reserve(stages_.size());
  Field2D carrier = image;
  for (std::size_t l = 0; l < stages_.size(); ++l) {
    const auto& st = stages_[l];
    if (st.prefilter) {
      if (carrier.rows() < st.prefilter->rows || carrier.cols() < st.prefilter->cols) {
        throw DimensionMismatch("image too small for feature stage " + std::to_string(l + 1));
      }
      carrier = correlate_replicate(carrier, *st.prefilter);
    }
    carrier = decimate(carrier, st.downsample);
    std::vector<Field2D> channels;
    channels.reserve(st.bank.size());
    for (const auto& k : st.bank) {
      if (carrier.rows() < k.rows || carrier.cols() < k.cols) {
        throw DimensionMismatch("image too small for feature stage " + std::to_string(l + 1));
      }
      channels.push_back(correlate_replicate(carrier, k));
    }
    out.push_back(std::move(channels));
  }
  return out;
}

double feature_loss(const Field2D& a, const Field2D& b, const FeatureExtractor& ext) {
  require_same_shape(a, b, "feature_loss");
  const auto fa = ext.extract(a);
  const auto fb = ext.extract(b);
  double total = 0.0;
  for (std::size_t l = 0; l < fa.size(); ++l) {
    double sq = 0.0;
    for (std::size_t c = 0; c < fa[l].size(); ++c) {
      const auto va = fa[l][c].values();
      const auto vb = fb[l][c].values();
      for (std::size_t k = 0; k < va.size(); ++k) sq += (va[k] - vb[k]) * (va[k] - vb[k]);
    }
    total += std::sqrt(sq);
  }
  return total;
}

double combined_loss(const Field2D& a, const Field2D& b, double lambda, const FeatureExtractor& ext,
                     PixelNorm norm) {
  const double pixel = pixel_loss(a, b, norm);
  if (lambda == 0.0) return pixel;
  return pixel + lambda * feature_loss(a, b, ext);
}

}  // namespace seisflow
