#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace seisflow {

struct WeightTensor {
  std::vector<float> values;
  std::vector<std::size_t> shape;

  /// Builds a rank-1 tensor.
  static WeightTensor flat(std::vector<float> values);

  std::size_t size() const noexcept { return values.size(); }
  /// product(shape) == size() and every value finite.
  void validate() const;
};

struct SparsityTarget {
  double fraction = 0.0;  // in [0, 1]
  void validate() const;
};

struct PruneMask {
  std::vector<std::uint8_t> keep;  // 1 = kept, 0 = pruned

  std::size_t pruned() const noexcept;
};

/// One-shot magnitude pruning of a single tensor.
///
/// Exactly floor(fraction * n) entries are pruned: the smallest by |w|, with
/// equal magnitudes pruned in ascending flat-index order. Existing zeros are
/// ordinary values of magnitude 0 and so go first.
PruneMask level_prune(const WeightTensor& w, SparsityTarget target);

WeightTensor apply_mask(const WeightTensor& w, const PruneMask& mask);

/// Fraction of entries that are exactly zero (either sign).
double sparsity_of(const WeightTensor& w);

}  // namespace seisflow
