#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "seisflow/velmodel.hpp"
#include "seisflow/wavesim.hpp"

namespace seisflow {

/// Flat `key = value` text, one entry per line. `#` starts a comment, blank
/// lines are ignored, keys are unique. Throws FormatError with the line number.
class KeyValueFile {
 public:
  static KeyValueFile parse(std::string_view text);
  static KeyValueFile load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  const std::map<std::string, std::string>& entries() const noexcept { return entries_; }

  void set(const std::string& key, std::string value) { entries_[key] = std::move(value); }

  /// Typed getters return `fallback` when the key is absent and throw
  /// ConfigError when the value does not parse.
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;

 private:
  std::map<std::string, std::string> entries_;
};

/// Everything the dataset driver needs. Keys (defaults in parentheses):
///
///   nx, nz (201), dx, dz (10)
///   layers.min, layers.max (3, 6)           v_top.min, v_top.max (1500, 2000)
///   v_increment.min, v_increment.max (100, 300)
///   wobble_amp (40)   thickness_jitter (0.3)
///   salt.hulls.min, salt.hulls.max (1, 3)   salt.points.min, salt.points.max (3, 8)
///   salt.v.min, salt.v.max (4000, 4800)
///   salt.box.x0, .z0, .x1, .z1 (400, 600, 1600, 1600)
///   f0 (10)  t0 (0.15)  amplitude (1)
///   dt (0.001)  nt (1200)  source_z (20)  receiver_z (20)  receiver_stride (2 cells)
///   sponge.width (30)  sponge.strength (0.0075)  free_surface (false)
///   spatial_order (4)
///   rtm.smooth_radius (8)  rtm.save_stride (1)  rtm.laplacian (true)  rtm.remove_direct (true)
///   rtm.surface_mute (true)
///   master_seed (0)  n_models (1)  shots_per_model (1)  output_dir (out)
struct PipelineConfig {
  Grid2D grid;
  LayerConfig layers;
  SaltConfig salt;
  RickerSource source;
  double dt = 1e-3;
  std::size_t nt = 1200;
  double source_z = 20.0;
  double receiver_z = 20.0;
  std::size_t receiver_stride = 2;
  SpongeBoundary sponge;
  int spatial_order = 4;
  std::size_t smooth_radius = 8;
  std::size_t save_stride = 1;
  bool laplacian = true;
  bool remove_direct = true;
  bool surface_mute = true;  // after the Laplacian, at max(source_z, receiver_z)
  std::uint64_t master_seed = 0;
  std::size_t n_models = 1;
  std::size_t shots_per_model = 1;
  std::filesystem::path output_dir = "out";

  static PipelineConfig from_keys(const KeyValueFile& kv);
  static PipelineConfig load(const std::filesystem::path& path);
  /// Canonical key-value text that from_keys() reads back to the same config.
  std::string to_text() const;

  /// Component invariants plus n_models >= 1 and shots_per_model >= 1.
  void validate() const;
};

/// Geometry of shot `shot`: the source sits at the center of the cell holding
/// x = width * (shot + 1) / (shots_per_model + 1); receivers occupy cell centers
/// 2, 2 + stride, ... up to nx - 3 at receiver_z.
Acquisition shot_acquisition(const PipelineConfig& cfg, std::size_t shot);

}  // namespace seisflow
