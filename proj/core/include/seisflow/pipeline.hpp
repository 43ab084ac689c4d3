#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "seisflow/config.hpp"
#include "seisflow/rtm.hpp"
#include "seisflow/velmodel.hpp"
#include "seisflow/wavesim.hpp"

namespace seisflow {

/// Everything computed for one model index, before anything touches disk.
struct ModelProducts {
  std::uint64_t seed = 0;
  VelocityModel model;
  std::vector<ShotGather> gathers;
  RtmImage image;  // stacked over shots, then Laplacian-filtered and muted per cfg
};

/// Velocity model, every shot gather and the stacked RTM image for model
/// `index`, seeded with derive_seed(cfg.master_seed, index).
ModelProducts simulate_model(const PipelineConfig& cfg, std::size_t index);

struct ManifestEntry {
  std::size_t model = 0;
  std::string kind;  // velocity | gather | rtm | error
  std::string path;  // relative to the output directory
  std::uint64_t seed = 0;
  std::uint64_t checksum = 0;  // FNV-1a of the file bytes
};

struct DatasetResult {
  std::vector<ManifestEntry> entries;
  std::vector<std::pair<std::size_t, std::string>> failures;  // (model, reason)

  bool ok() const noexcept { return failures.empty(); }
};

/// Writes model_NNNN/{velocity.f32r, shot_SSS.f32r..., rtm.f32r} under
/// cfg.output_dir plus manifest.csv, using up to `jobs` worker threads. A model
/// whose stages throw is recorded as a failure and the batch continues. Output
/// bytes do not depend on `jobs`.
DatasetResult run_dataset(const PipelineConfig& cfg, std::size_t jobs = 1);

/// CSV text: header `model,kind,path,seed,fnv1a64`, then one row per entry in
/// model order; seeds are decimal, checksums 16 lowercase hex digits.
std::string manifest_csv(const DatasetResult& result);

}  // namespace seisflow
