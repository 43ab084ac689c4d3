#include "seisflow/velmodel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "seisflow/errors.hpp"
#include "seisflow/rng.hpp"

namespace seisflow {

namespace {

double cross(Point2 o, Point2 a, Point2 b) noexcept {
  return (a.x - o.x) * (b.z - o.z) - (a.z - o.z) * (b.x - o.x);
}

bool finite_range(const RealRange& r) { return std::isfinite(r.min) && std::isfinite(r.max); }

constexpr int kWobbleHarmonics = 3;

}  // namespace

void Grid2D::validate() const {
  if (nx < 16 || nz < 16) {
    throw ConfigError("grid must be at least 16x16 cells, got nx=" + std::to_string(nx) +
                      " nz=" + std::to_string(nz));
  }
  if (!(std::isfinite(dx) && std::isfinite(dz) && dx > 0.0 && dz > 0.0)) {
    throw ConfigError("grid spacing must be finite and positive");
  }
}

double LayerConfig::max_velocity() const noexcept {
  return v_top.max + static_cast<double>(std::max<std::int64_t>(n_layers.max - 1, 0)) *
                         v_increment.max;
}

void LayerConfig::validate() const {
  if (!n_layers.valid() || n_layers.min < 1) throw ConfigError("n_layers range must satisfy 1 <= min <= max");
  if (!finite_range(v_top) || !v_top.valid()) throw ConfigError("v_top range is empty or non-finite");
  if (!finite_range(v_increment) || !v_increment.valid() || v_increment.min < 0.0) {
    throw ConfigError("v_increment range must be finite, non-empty and non-negative");
  }
  if (v_top.min < kMinVelocity) throw ConfigError("v_top min must be >= 1400 m/s");
  if (max_velocity() > kMaxVelocity) {
    throw ConfigError("layer config can reach " + std::to_string(max_velocity()) +
                      " m/s, above the 6000 m/s ceiling");
  }
  if (!std::isfinite(interface_wobble_amp) || interface_wobble_amp < 0.0) {
    throw ConfigError("interface wobble amplitude must be finite and >= 0");
  }
  if (!(thickness_jitter >= 0.0 && thickness_jitter < 1.0)) {
    throw ConfigError("thickness jitter must lie in [0, 1)");
  }
}

void SaltConfig::validate(const Grid2D& grid, const LayerConfig& layers) const {
  if (!n_hulls.valid() || n_hulls.min < 0) throw ConfigError("n_hulls range must satisfy 0 <= min <= max");
  if (!points_per_hull.valid() || points_per_hull.min < 3) {
    throw ConfigError("points_per_hull range must satisfy 3 <= min <= max");
  }
  if (!finite_range(v_salt) || !v_salt.valid() || v_salt.min < kMinSaltVelocity ||
      v_salt.max > kMaxSaltVelocity) {
    throw ConfigError("v_salt range must lie within [3500, 6000] m/s");
  }
  if (v_salt.min <= layers.max_velocity()) {
    throw ConfigError("v_salt min must exceed the maximum sediment velocity " +
                      std::to_string(layers.max_velocity()));
  }
  const auto& b = placement_box;
  if (!(b.x0 >= 0.0 && b.z0 >= 0.0 && b.x1 <= grid.width() && b.z1 <= grid.depth() &&
        b.x0 < b.x1 && b.z0 < b.z1)) {
    throw ConfigError("salt placement box must be a non-empty rectangle inside the grid");
  }
}

ConvexPolygon::ConvexPolygon(std::vector<Point2> vertices) : vertices_(std::move(vertices)) {
  const std::size_t n = vertices_.size();
  if (n < 3) throw DegenerateInputError("convex polygon needs at least 3 vertices");
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = vertices_[i];
    const Point2 b = vertices_[(i + 1) % n];
    const Point2 c = vertices_[(i + 2) % n];
    if (!(std::isfinite(a.x) && std::isfinite(a.z))) throw DegenerateInputError("non-finite vertex");
    if (a == b) throw DegenerateInputError("repeated polygon vertex");
    if (!(cross(a, b, c) > 0.0)) {
      throw DegenerateInputError("polygon is not strictly convex counter-clockwise");
    }
  }
}

bool ConvexPolygon::contains(Point2 p) const noexcept {
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = vertices_[i];
    const Point2 b = vertices_[(i + 1) % n];
    const double c = cross(a, b, p);
    // Relative slack so points on an edge stay inside despite rounding.
    const double scale = std::hypot(b.x - a.x, b.z - a.z) * std::hypot(p.x - a.x, p.z - a.z);
    if (c < -1e-12 * scale) return false;
  }
  return true;
}

std::size_t CellMask::count() const noexcept {
  return static_cast<std::size_t>(std::count(cells.begin(), cells.end(), std::uint8_t{1}));
}

VelocityModel generate_background(const Grid2D& grid, const LayerConfig& cfg) {
  grid.validate();
  cfg.validate();
  if (cfg.n_layers.max > static_cast<std::int64_t>(grid.nz)) {
    throw ConfigError("layer count " + std::to_string(cfg.n_layers.max) + " exceeds nz=" +
                      std::to_string(grid.nz));
  }

  // Draw order is part of the reproducibility contract: count, top velocity,
  // increments, thicknesses, then wobble phases per interface.
  SplitMix64 rng(cfg.seed);
  const auto n = static_cast<std::size_t>(rng.uniform_int(cfg.n_layers.min, cfg.n_layers.max));

  std::vector<double> layer_v(n);
  layer_v[0] = rng.uniform(cfg.v_top.min, cfg.v_top.max);
  for (std::size_t k = 1; k < n; ++k) {
    layer_v[k] = layer_v[k - 1] + rng.uniform(cfg.v_increment.min, cfg.v_increment.max);
  }

  std::vector<double> cumulative(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = 1.0 + cfg.thickness_jitter * (2.0 * rng.uniform() - 1.0);
    cumulative[k + 1] = cumulative[k] + t;
  }
  const double total = cumulative[n];
  const double depth = grid.depth();

  struct Interface {
    double base;
    double phase[kWobbleHarmonics];
  };
  std::vector<Interface> interfaces(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    interfaces[k].base = depth * cumulative[k + 1] / total;
    for (double& ph : interfaces[k].phase) ph = 2.0 * std::numbers::pi * rng.uniform();
  }

  // Harmonic weights 1/h normalised so the wobble never exceeds the amplitude.
  double weight_sum = 0.0;
  for (int h = 1; h <= kWobbleHarmonics; ++h) weight_sum += 1.0 / h;

  VelocityModel out{grid, Field2D(grid.nz, grid.nx)};
  std::vector<double> interface_depth(interfaces.size());
  const double width = grid.width();
  for (std::size_t i = 0; i < grid.nx; ++i) {
    const double x = (static_cast<double>(i) + 0.5) * grid.dx;
    for (std::size_t k = 0; k < interfaces.size(); ++k) {
      double wobble = 0.0;
      for (int h = 1; h <= kWobbleHarmonics; ++h) {
        wobble += (1.0 / h) / weight_sum *
                  std::sin(2.0 * std::numbers::pi * h * x / width + interfaces[k].phase[h - 1]);
      }
      interface_depth[k] = interfaces[k].base + cfg.interface_wobble_amp * wobble;
    }
    for (std::size_t j = 0; j < grid.nz; ++j) {
      const double z = (static_cast<double>(j) + 0.5) * grid.dz;
      std::size_t layer = 0;
      for (double d : interface_depth) layer += (d <= z) ? 1 : 0;
      out.vp(j, i) = layer_v[layer];
    }
  }
  return out;
}

ConvexPolygon convex_hull(std::span<const Point2> points) {
  std::vector<Point2> pts(points.begin(), points.end());
  for (const auto& p : pts) {
    if (!(std::isfinite(p.x) && std::isfinite(p.z))) throw DegenerateInputError("non-finite hull point");
  }
  std::sort(pts.begin(), pts.end(),
            [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.z < b.z); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) throw DegenerateInputError("convex hull needs at least 3 distinct points");

  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  if (hull.size() < 3) throw DegenerateInputError("convex hull input points are collinear");
  return ConvexPolygon(std::move(hull));
}

CellMask rasterize_union(std::span<const ConvexPolygon> polygons, const Grid2D& grid) {
  CellMask mask{grid.nz, grid.nx, std::vector<std::uint8_t>(grid.nz * grid.nx, 0)};
  const auto clamp_index = [](double v, std::size_t n) -> std::size_t {
    if (v < 0.0) return 0;
    if (v > static_cast<double>(n - 1)) return n - 1;
    return static_cast<std::size_t>(v);
  };
  for (const auto& poly : polygons) {
    double xmin = poly.vertices()[0].x, xmax = xmin;
    double zmin = poly.vertices()[0].z, zmax = zmin;
    for (const auto& v : poly.vertices()) {
      xmin = std::min(xmin, v.x);
      xmax = std::max(xmax, v.x);
      zmin = std::min(zmin, v.z);
      zmax = std::max(zmax, v.z);
    }
    // One cell of slack each side; contains() decides membership.
    const std::size_t i0 = clamp_index(std::floor(xmin / grid.dx - 0.5) - 1.0, grid.nx);
    const std::size_t i1 = clamp_index(std::ceil(xmax / grid.dx - 0.5) + 1.0, grid.nx);
    const std::size_t j0 = clamp_index(std::floor(zmin / grid.dz - 0.5) - 1.0, grid.nz);
    const std::size_t j1 = clamp_index(std::ceil(zmax / grid.dz - 0.5) + 1.0, grid.nz);
    for (std::size_t j = j0; j <= j1; ++j) {
      const double z = (static_cast<double>(j) + 0.5) * grid.dz;
      for (std::size_t i = i0; i <= i1; ++i) {
        auto& cell = mask.cells[j * grid.nx + i];
        if (cell) continue;
        if (poly.contains({(static_cast<double>(i) + 0.5) * grid.dx, z})) cell = 1;
      }
    }
  }
  return mask;
}

VelocityModel insert_salt(const VelocityModel& model, const CellMask& mask, double v_salt) {
  if (mask.rows != model.vp.rows() || mask.cols != model.vp.cols() ||
      mask.cells.size() != model.vp.size()) {
    throw DimensionMismatch("salt mask dimensions do not match the velocity model");
  }
  if (!(v_salt >= kMinSaltVelocity && v_salt <= kMaxSaltVelocity)) {
    throw ConfigError("salt velocity " + std::to_string(v_salt) + " outside [3500, 6000] m/s");
  }
  VelocityModel out = model;
  auto vp = out.vp.values();
  for (std::size_t k = 0; k < vp.size(); ++k) {
    if (mask.cells[k]) vp[k] = v_salt;
  }
  return out;
}

VelocityModel generate_model(const Grid2D& grid, const LayerConfig& layers,
                             const SaltConfig& salt, std::uint64_t seed) {
  grid.validate();
  layers.validate();
  salt.validate(grid, layers);

  LayerConfig seeded = layers;
  seeded.seed = seed;
  VelocityModel background = generate_background(grid, seeded);

  SplitMix64 rng(derive_seed(seed, 1));
  const auto n_hulls = rng.uniform_int(salt.n_hulls.min, salt.n_hulls.max);
  if (n_hulls == 0) return background;
  const double v_salt = rng.uniform(salt.v_salt.min, salt.v_salt.max);

  const auto& box = salt.placement_box;
  std::vector<ConvexPolygon> hulls;
  hulls.reserve(static_cast<std::size_t>(n_hulls));
  constexpr int kMaxAttempts = 16;
  for (std::int64_t h = 0; h < n_hulls; ++h) {
    for (int attempt = 0;; ++attempt) {
      const auto n_points = rng.uniform_int(salt.points_per_hull.min, salt.points_per_hull.max);
      std::vector<Point2> pts(static_cast<std::size_t>(n_points));
      for (auto& p : pts) {
        p.x = rng.uniform(box.x0, box.x1);
        p.z = rng.uniform(box.z0, box.z1);
      }
      try {
        hulls.push_back(convex_hull(pts));
        break;
      } catch (const DegenerateInputError&) {
        if (attempt + 1 >= kMaxAttempts) throw;
      }
    }
  }
  return insert_salt(background, rasterize_union(hulls, grid), v_salt);
}

}  // namespace seisflow
