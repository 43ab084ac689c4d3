#include "seisflow/pruner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "seisflow/errors.hpp"

namespace seisflow {

WeightTensor WeightTensor::flat(std::vector<float> values) {
  WeightTensor t;
  t.shape = {values.size()};
  t.values = std::move(values);
  return t;
}

void WeightTensor::validate() const {
  const std::size_t n =
      std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
  if (shape.empty() || n != values.size()) {
    throw DimensionMismatch("weight tensor shape product does not match its " +
                            std::to_string(values.size()) + " values");
  }
  for (float v : values) {
    if (!std::isfinite(v)) throw ConfigError("weight tensor contains non-finite values");
  }
}

void SparsityTarget::validate() const {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw ConfigError("sparsity fraction must lie in [0, 1], got " + std::to_string(fraction));
  }
}

std::size_t PruneMask::pruned() const noexcept {
  return static_cast<std::size_t>(std::count(keep.begin(), keep.end(), std::uint8_t{0}));
}

PruneMask level_prune(const WeightTensor& w, SparsityTarget target) {
  w.validate();
  target.validate();
  const std::size_t n = w.size();
  const auto m = static_cast<std::size_t>(std::floor(target.fraction * static_cast<double>(n)));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto by_magnitude = [&](std::size_t a, std::size_t b) {
    return std::abs(w.values[a]) < std::abs(w.values[b]);
  };
  // Stable: equal magnitudes keep ascending index order.
  std::stable_sort(order.begin(), order.end(), by_magnitude);

  PruneMask mask{std::vector<std::uint8_t>(n, 1)};
  for (std::size_t k = 0; k < m; ++k) mask.keep[order[k]] = 0;
  return mask;
}

WeightTensor apply_mask(const WeightTensor& w, const PruneMask& mask) {
  if (mask.keep.size() != w.values.size()) {
    throw DimensionMismatch("mask length " + std::to_string(mask.keep.size()) +
                            " does not match tensor length " + std::to_string(w.values.size()));
  }
  WeightTensor out = w;
  for (std::size_t k = 0; k < out.values.size(); ++k) {
    if (!mask.keep[k]) out.values[k] = 0.0f;
  }
  return out;
}

double sparsity_of(const WeightTensor& w) {
  if (w.values.empty()) throw DimensionMismatch("sparsity of an empty tensor is undefined");
  const auto zeros = std::count_if(w.values.begin(), w.values.end(), [](float v) { return v == 0.0f; });
  return static_cast<double>(zeros) / static_cast<double>(w.values.size());
}

}  // namespace seisflow
