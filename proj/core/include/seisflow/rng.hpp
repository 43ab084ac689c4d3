#pragma once

#include <cstdint>

namespace seisflow {

/// SplitMix64 counter-based generator.
///
/// The stream is fully specified so that any implementation reproduces it:
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
///
/// uniform() maps the top 53 bits to [0, 1); uniform_int(lo, hi) uses
/// lo + next() % (hi - lo + 1). The modulo bias is below 2^-40 for every span
/// this library draws from.
class SplitMix64 {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kMul1 = 0xBF58476D1CE4E5B9ULL;
  static constexpr std::uint64_t kMul2 = 0x94D049BB133111EBULL;

  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept;
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept;
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) noexcept;

 private:
  std::uint64_t state_;
};

/// The SplitMix64 output finalizer applied to a single word.
std::uint64_t mix64(std::uint64_t z) noexcept;

/// Child seed for stream `index` under `master`: mix64(master + kGamma * (index + 1)).
/// Used for per-model and per-component seeds so results never depend on scheduling.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

}  // namespace seisflow
