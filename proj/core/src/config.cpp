#include "seisflow/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "seisflow/errors.hpp"
#include "seisflow/f32r.hpp"

namespace seisflow {

namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ConfigError("config key '" + key + "': cannot parse '" + text + "'");
  }
  return value;
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

KeyValueFile KeyValueFile::parse(std::string_view text) {
  KeyValueFile kv;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw FormatError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string key = trim(std::string_view(stripped).substr(0, eq));
    std::string value = trim(std::string_view(stripped).substr(eq + 1));
    if (key.empty()) throw FormatError("config line " + std::to_string(line_no) + ": empty key");
    if (kv.entries_.count(key)) {
      throw FormatError("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    kv.entries_.emplace(std::move(key), std::move(value));
  }
  return kv;
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return parse(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

double KeyValueFile::get_double(const std::string& key, double fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  // from_chars for double is missing from older libstdc++ releases.
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(it->second, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != it->second.size()) {
    throw ConfigError("config key '" + key + "': cannot parse '" + it->second + "'");
  }
  return v;
}

std::int64_t KeyValueFile::get_int(const std::string& key, std::int64_t fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : parse_number<std::int64_t>(key, it->second);
}

std::uint64_t KeyValueFile::get_uint(const std::string& key, std::uint64_t fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : parse_number<std::uint64_t>(key, it->second);
}

bool KeyValueFile::get_bool(const std::string& key, bool fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  const auto& v = it->second;
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config key '" + key + "': expected a boolean, got '" + v + "'");
}

std::string KeyValueFile::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

PipelineConfig PipelineConfig::from_keys(const KeyValueFile& kv) {
  static const char* const kKnown[] = {
      "nx", "nz", "dx", "dz", "layers.min", "layers.max", "v_top.min", "v_top.max",
      "v_increment.min", "v_increment.max", "wobble_amp", "thickness_jitter", "salt.hulls.min",
      "salt.hulls.max", "salt.points.min", "salt.points.max", "salt.v.min", "salt.v.max",
      "salt.box.x0", "salt.box.z0", "salt.box.x1", "salt.box.z1", "f0", "t0", "amplitude", "dt",
      "nt", "source_z", "receiver_z", "receiver_stride", "sponge.width", "sponge.strength",
      "free_surface", "spatial_order", "rtm.smooth_radius", "rtm.save_stride", "rtm.laplacian", "rtm.remove_direct",
      "rtm.surface_mute",
      "master_seed", "n_models", "shots_per_model", "output_dir"};
  for (const auto& [key, value] : kv.entries()) {
    bool known = false;
    for (const char* k : kKnown) known = known || key == k;
    if (!known) throw ConfigError("unknown config key '" + key + "'");
  }

  PipelineConfig c;
  c.grid.nx = kv.get_uint("nx", c.grid.nx);
  c.grid.nz = kv.get_uint("nz", c.grid.nz);
  c.grid.dx = kv.get_double("dx", c.grid.dx);
  c.grid.dz = kv.get_double("dz", c.grid.dz);
  c.layers.n_layers = {kv.get_int("layers.min", c.layers.n_layers.min), kv.get_int("layers.max", c.layers.n_layers.max)};
  c.layers.v_top = {kv.get_double("v_top.min", c.layers.v_top.min), kv.get_double("v_top.max", c.layers.v_top.max)};
  c.layers.v_increment = {kv.get_double("v_increment.min", c.layers.v_increment.min),
                          kv.get_double("v_increment.max", c.layers.v_increment.max)};
  c.layers.interface_wobble_amp = kv.get_double("wobble_amp", c.layers.interface_wobble_amp);
  c.layers.thickness_jitter = kv.get_double("thickness_jitter", c.layers.thickness_jitter);
  c.salt.n_hulls = {kv.get_int("salt.hulls.min", c.salt.n_hulls.min), kv.get_int("salt.hulls.max", c.salt.n_hulls.max)};
  c.salt.points_per_hull = {kv.get_int("salt.points.min", c.salt.points_per_hull.min),
                            kv.get_int("salt.points.max", c.salt.points_per_hull.max)};
  c.salt.v_salt = {kv.get_double("salt.v.min", c.salt.v_salt.min), kv.get_double("salt.v.max", c.salt.v_salt.max)};
  c.salt.placement_box = {kv.get_double("salt.box.x0", c.salt.placement_box.x0),
                          kv.get_double("salt.box.z0", c.salt.placement_box.z0),
                          kv.get_double("salt.box.x1", c.salt.placement_box.x1),
                          kv.get_double("salt.box.z1", c.salt.placement_box.z1)};
  c.source.f0 = kv.get_double("f0", c.source.f0);
  c.source.t0 = kv.get_double("t0", c.source.t0);
  c.source.amplitude = kv.get_double("amplitude", c.source.amplitude);
  c.dt = kv.get_double("dt", c.dt);
  c.nt = kv.get_uint("nt", c.nt);
  c.source_z = kv.get_double("source_z", c.source_z);
  c.receiver_z = kv.get_double("receiver_z", c.receiver_z);
  c.receiver_stride = kv.get_uint("receiver_stride", c.receiver_stride);
  c.sponge.width = kv.get_uint("sponge.width", c.sponge.width);
  c.sponge.strength = kv.get_double("sponge.strength", c.sponge.strength);
  c.sponge.free_surface = kv.get_bool("free_surface", c.sponge.free_surface);
  c.spatial_order = static_cast<int>(kv.get_int("spatial_order", c.spatial_order));
  c.smooth_radius = kv.get_uint("rtm.smooth_radius", c.smooth_radius);
  c.save_stride = kv.get_uint("rtm.save_stride", c.save_stride);
  c.laplacian = kv.get_bool("rtm.laplacian", c.laplacian);
  c.remove_direct = kv.get_bool("rtm.remove_direct", c.remove_direct);
  c.surface_mute = kv.get_bool("rtm.surface_mute", c.surface_mute);
  c.master_seed = kv.get_uint("master_seed", c.master_seed);
  c.n_models = kv.get_uint("n_models", c.n_models);
  c.shots_per_model = kv.get_uint("shots_per_model", c.shots_per_model);
  c.output_dir = kv.get_string("output_dir", c.output_dir.string());
  c.validate();
  return c;
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
  return from_keys(KeyValueFile::load(path));
}

std::string PipelineConfig::to_text() const {
  std::ostringstream os;
  const auto d = [&](const char* k, double v) { os << k << " = " << fmt_double(v) << '\n'; };
  const auto i = [&](const char* k, auto v) { os << k << " = " << v << '\n'; };
  i("nx", grid.nx);
  i("nz", grid.nz);
  d("dx", grid.dx);
  d("dz", grid.dz);
  i("layers.min", layers.n_layers.min);
  i("layers.max", layers.n_layers.max);
  d("v_top.min", layers.v_top.min);
  d("v_top.max", layers.v_top.max);
  d("v_increment.min", layers.v_increment.min);
  d("v_increment.max", layers.v_increment.max);
  d("wobble_amp", layers.interface_wobble_amp);
  d("thickness_jitter", layers.thickness_jitter);
  i("salt.hulls.min", salt.n_hulls.min);
  i("salt.hulls.max", salt.n_hulls.max);
  i("salt.points.min", salt.points_per_hull.min);
  i("salt.points.max", salt.points_per_hull.max);
  d("salt.v.min", salt.v_salt.min);
  d("salt.v.max", salt.v_salt.max);
  d("salt.box.x0", salt.placement_box.x0);
  d("salt.box.z0", salt.placement_box.z0);
  d("salt.box.x1", salt.placement_box.x1);
  d("salt.box.z1", salt.placement_box.z1);
  d("f0", source.f0);
  d("t0", source.t0);
  d("amplitude", source.amplitude);
  d("dt", dt);
  i("nt", nt);
  d("source_z", source_z);
  d("receiver_z", receiver_z);
  i("receiver_stride", receiver_stride);
  i("sponge.width", sponge.width);
  d("sponge.strength", sponge.strength);
  i("free_surface", sponge.free_surface ? "true" : "false");
  i("spatial_order", spatial_order);
  i("rtm.smooth_radius", smooth_radius);
  i("rtm.save_stride", save_stride);
  i("rtm.laplacian", laplacian ? "true" : "false");
  i("rtm.remove_direct", remove_direct ? "true" : "false");
  i("rtm.surface_mute", surface_mute ? "true" : "false");
  i("master_seed", master_seed);
  i("n_models", n_models);
  i("shots_per_model", shots_per_model);
  i("output_dir", output_dir.string());
  return os.str();
}

void PipelineConfig::validate() const {
  grid.validate();
  layers.validate();
  salt.validate(grid, layers);
  source.validate();
  sponge.validate();
  if (spatial_order != 2 && spatial_order != 4) throw ConfigError("spatial_order must be 2 or 4");
  if (receiver_stride == 0) throw ConfigError("receiver_stride must be >= 1");
  if (save_stride == 0) throw ConfigError("rtm.save_stride must be >= 1");
  if (n_models < 1) throw ConfigError("n_models must be >= 1");
  if (shots_per_model < 1) throw ConfigError("shots_per_model must be >= 1");
  if (layers.n_layers.max > static_cast<std::int64_t>(grid.nz)) throw ConfigError("layer count exceeds nz");
  // Geometry and CFL are checked against the worst case any model can reach.
  shot_acquisition(*this, 0).validate(grid);
  VelocityModel fastest{grid, Field2D(grid.nz, grid.nx, salt.n_hulls.max > 0 ? salt.v_salt.max : layers.max_velocity())};
  if (dt > cfl_max_dt(fastest, spatial_order)) {
    throw ConfigError("dt=" + fmt_double(dt) + " is unstable for velocities up to " +
                      fmt_double(fastest.vp.max()) + " m/s");
  }
}

Acquisition shot_acquisition(const PipelineConfig& cfg, std::size_t shot) {
  const Grid2D& g = cfg.grid;
  Acquisition acq;
  const double target = g.width() * static_cast<double>(shot + 1) / static_cast<double>(cfg.shots_per_model + 1);
  const double cell = std::clamp(std::floor(target / g.dx), 2.0, static_cast<double>(g.nx) - 3.0);
  acq.source = {(cell + 0.5) * g.dx, cfg.source_z};
  for (std::size_t i = 2; i + 3 <= g.nx; i += cfg.receiver_stride) {
    acq.receiver_xs.push_back((static_cast<double>(i) + 0.5) * g.dx);
  }
  acq.receiver_z = cfg.receiver_z;
  acq.dt = cfg.dt;
  acq.nt = cfg.nt;
  return acq;
}

}  // namespace seisflow
