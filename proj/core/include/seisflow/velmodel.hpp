#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "seisflow/field.hpp"

namespace seisflow {

/// Bounds every generated velocity must respect (m/s).
inline constexpr double kMinVelocity = 1400.0;
inline constexpr double kMaxVelocity = 6000.0;
/// Accepted salt velocity band for insert_salt (m/s).
inline constexpr double kMinSaltVelocity = 3500.0;
inline constexpr double kMaxSaltVelocity = 6000.0;

struct Grid2D {
  std::size_t nx = 201;
  std::size_t nz = 201;
  double dx = 10.0;
  double dz = 10.0;

  double width() const noexcept { return static_cast<double>(nx) * dx; }
  double depth() const noexcept { return static_cast<double>(nz) * dz; }

  /// Throws ConfigError unless nx, nz >= 16 and dx, dz are finite and positive.
  void validate() const;

  friend bool operator==(const Grid2D&, const Grid2D&) = default;
};

template <typename T>
struct Interval {
  T min{};
  T max{};

  bool valid() const noexcept { return min <= max; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

using IntRange = Interval<std::int64_t>;
using RealRange = Interval<double>;

struct VelocityModel {
  Grid2D grid;
  Field2D vp;  // nz rows x nx cols, m/s

  friend bool operator==(const VelocityModel&, const VelocityModel&) = default;
};

struct LayerConfig {
  IntRange n_layers{3, 6};
  RealRange v_top{1500.0, 2000.0};
  RealRange v_increment{100.0, 300.0};
  double interface_wobble_amp = 40.0;  // m
  /// Relative spread of layer thicknesses in [0, 1); 0 gives an equal partition of depth.
  double thickness_jitter = 0.3;
  std::uint64_t seed = 0;

  /// Largest velocity any draw from this config can produce.
  double max_velocity() const noexcept;
  void validate() const;
};

/// Axis-aligned rectangle in meters.
struct Box {
  double x0 = 0.0;
  double z0 = 0.0;
  double x1 = 0.0;
  double z1 = 0.0;

  double area() const noexcept { return (x1 - x0) * (z1 - z0); }
};

struct SaltConfig {
  IntRange n_hulls{1, 3};
  IntRange points_per_hull{3, 8};
  RealRange v_salt{4000.0, 4800.0};
  Box placement_box{400.0, 600.0, 1600.0, 1600.0};

  void validate(const Grid2D& grid, const LayerConfig& layers) const;
};

struct Point2 {
  double x = 0.0;
  double z = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

/// Strictly convex polygon with counter-clockwise vertices in the (x, z) plane.
class ConvexPolygon {
 public:
  /// Validates >= 3 distinct vertices with all consecutive cross products > 0.
  explicit ConvexPolygon(std::vector<Point2> vertices);

  std::span<const Point2> vertices() const noexcept { return vertices_; }

  /// Closed containment: points on an edge count as inside.
  bool contains(Point2 p) const noexcept;

 private:
  std::vector<Point2> vertices_;
};

/// nz x nx boolean mask stored row-major.
struct CellMask {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> cells;

  bool operator()(std::size_t r, std::size_t c) const noexcept { return cells[r * cols + c] != 0; }
  std::size_t count() const noexcept;

  friend bool operator==(const CellMask&, const CellMask&) = default;
};

VelocityModel generate_background(const Grid2D& grid, const LayerConfig& cfg);

/// Andrew's monotone chain. Collinear boundary points are dropped so the result
/// is strictly convex. Throws DegenerateInputError for < 3 distinct points or
/// an all-collinear set.
ConvexPolygon convex_hull(std::span<const Point2> points);

/// Cell (i, j) is set iff its center ((i + 0.5) dx, (j + 0.5) dz) lies in any polygon.
CellMask rasterize_union(std::span<const ConvexPolygon> polygons, const Grid2D& grid);

VelocityModel insert_salt(const VelocityModel& model, const CellMask& mask, double v_salt);

/// Background (with `layers.seed` replaced by `seed`) followed by a salt body
/// made of random convex hulls. The salt stream uses derive_seed(seed, 1).
VelocityModel generate_model(const Grid2D& grid, const LayerConfig& layers,
                             const SaltConfig& salt, std::uint64_t seed);

}  // namespace seisflow
