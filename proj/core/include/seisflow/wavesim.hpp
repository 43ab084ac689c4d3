#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "seisflow/field.hpp"
#include "seisflow/velmodel.hpp"

namespace seisflow {

struct RickerSource {
  double f0 = 10.0;         // dominant frequency, Hz
  double t0 = 0.15;         // peak delay, s
  double amplitude = 1.0;

  /// f0 > 0 and t0 >= 1 / f0.
  void validate() const;
};

/// amplitude * (1 - 2 pi^2 f0^2 (t - t0)^2) * exp(-pi^2 f0^2 (t - t0)^2)
double ricker(const RickerSource& src, double t) noexcept;

/// Cerjan-style taper on an absorbing band padded around the model.
///
/// A cell d cells deep into the band (d = 1 next to the model, d = width at the
/// outer edge) is scaled by exp(-(strength * d)^2) per direction every step.
/// With free_surface set, the top is not padded and the field is pinned to zero
/// just above the first row.
struct SpongeBoundary {
  std::size_t width = 30;
  double strength = 0.0075;
  bool free_surface = false;

  void validate() const;
};

struct Acquisition {
  Point2 source{1000.0, 20.0};
  std::vector<double> receiver_xs;
  double receiver_z = 20.0;
  double dt = 1e-3;
  std::size_t nt = 1000;

  std::vector<Point2> receivers() const;

  /// dt > 0, nt >= 2, at least one receiver, and every position at least two
  /// cells from every edge of the grid.
  void validate(const Grid2D& grid) const;
};

struct ShotGather {
  Field2D data;  // nt rows x n_receivers cols
  double dt = 0.0;
  std::vector<double> receiver_xs;
  double receiver_z = 0.0;

  std::size_t nt() const noexcept { return data.rows(); }
  std::size_t n_receivers() const noexcept { return data.cols(); }
};

/// Source-side snapshots of the physical region stored in single precision.
/// Snapshot k holds time step k * save_stride.
class WavefieldHistory {
 public:
  WavefieldHistory(std::size_t nz, std::size_t nx, std::size_t nt, std::size_t save_stride);

  std::size_t save_stride() const noexcept { return stride_; }
  /// ceil(nt / save_stride)
  std::size_t count() const noexcept { return count_; }
  std::size_t rows() const noexcept { return nz_; }
  std::size_t cols() const noexcept { return nx_; }

  std::span<float> snapshot(std::size_t k) noexcept;
  std::span<const float> snapshot(std::size_t k) const noexcept;
  Field2D snapshot_field(std::size_t k) const;

 private:
  std::size_t nz_, nx_, stride_, count_;
  std::vector<float> data_;
};

struct SimulationOptions {
  int spatial_order = 4;  // 2 or 4
  bool enforce_cfl = true;
  std::size_t save_stride = 1;
  double divergence_threshold = 1e9;
  std::size_t check_interval = 100;
};

/// Largest stable dt: min(dx, dz) / v_max * sqrt(2 / S), where S is the sum of
/// absolute second-derivative stencil coefficients (4 for order 2, 16/3 for
/// order 4). Order 2 gives the familiar h / (v sqrt 2).
double cfl_max_dt(const VelocityModel& model, int spatial_order);

/// Explicit second-order-in-time acoustic propagator on a padded grid.
///
/// One step computes
///   u_next = G * (2 u_curr - G u_prev + (v dt)^2 lap(u_curr) + s)
/// where G is the sponge taper (1 inside the model) and s collects injected
/// terms. A point source of value f adds dt^2 f / (dx dz) at its nearest cell.
/// Fields carry a zero halo of stencil-radius cells that is never written.
class Propagator {
 public:
  Propagator(const VelocityModel& model, double dt, const SpongeBoundary& sponge,
             int spatial_order = 4);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t halo() const noexcept { return halo_; }
  double dt() const noexcept { return dt_; }
  int spatial_order() const noexcept { return order_; }
  const Grid2D& grid() const noexcept { return grid_; }

  Field2D make_field() const { return Field2D(rows_, cols_); }

  /// Flat index into a padded field of physical cell (row j, column i).
  std::size_t index(std::size_t j, std::size_t i) const noexcept {
    return (j + top_ + halo_) * cols_ + (i + left_ + halo_);
  }

  /// Nearest physical cell to (x, z), as a padded flat index.
  std::size_t nearest(Point2 p) const noexcept;

  struct Bilinear {
    std::size_t idx[4];
    double w[4];
  };
  Bilinear bilinear(Point2 p) const noexcept;

  void step(const Field2D& prev, const Field2D& curr, Field2D& next) const;

  /// Adds `term` inside the taper bracket at padded flat index `idx` of a
  /// freshly stepped field.
  void add_term(Field2D& next, std::size_t idx, double term) const noexcept {
    next.values()[idx] += taper_[idx] * term;
  }

  /// dt^2 / (dx dz), the factor applied to point-source values.
  double source_scale() const noexcept { return source_scale_; }
  /// (v dt)^2 at padded flat index.
  double vdt2(std::size_t idx) const noexcept { return vdt2_[idx]; }

  double sample(const Field2D& u, const Bilinear& b) const noexcept;

  /// Copies the physical region of a padded field.
  Field2D physical(const Field2D& padded) const;
  void physical(const Field2D& padded, std::span<float> out) const;

 private:
  Grid2D grid_;
  double dt_;
  int order_;
  std::size_t halo_, top_, left_, rows_, cols_;
  double source_scale_;
  std::vector<double> coeffs_;
  std::vector<double> vdt2_;
  std::vector<double> taper_;
};

/// One update with a single point source, for callers that want the bare
/// scheme without managing a Propagator. Fields are padded (see Propagator).
Field2D step(const Field2D& u_prev, const Field2D& u_curr, const VelocityModel& model, double dt,
             const SpongeBoundary& sponge, double src_value, Point2 src_position,
             int spatial_order = 4);

struct ForwardResult {
  ShotGather gather;
  std::optional<WavefieldHistory> history;
};

/// Propagates a Ricker point source and records every step at the receivers.
/// Gather row n is the wavefield at time n * dt (row 0 is the zero initial
/// state); the source sample at n * dt drives the update from step n to n + 1.
/// Throws StabilityError when dt exceeds cfl_max_dt (unless disabled) and
/// DivergenceError naming the step when max |u| goes non-finite or above the
/// guard threshold.
ForwardResult forward_model(const VelocityModel& model, const Acquisition& acq,
                            const RickerSource& src, const SpongeBoundary& sponge,
                            bool save_wavefield, const SimulationOptions& opts = {});

/// Forward modeling driven by a space-time source field: entry n (physical
/// grid) is injected at every cell during the update from step n to n + 1,
/// for n in [0, nt - 1). Records nt rows at `receivers`.
Field2D forward_from_source_field(const Propagator& prop, std::span<const Field2D> source,
                                  std::size_t nt, std::span<const Point2> receivers);

/// Runs the adjoint of the recording operator: gather traces are injected in
/// reversed time order (transposed bilinear weights, scaled by (v dt)^2 at
/// the injection cells) and propagated with the same scheme. `on_time(m, z)`
/// receives the back-propagated padded field aligned with forward time m,
/// for m = nt - 1 down to 0.
void backpropagate(const Propagator& prop, const Field2D& data, std::span<const Point2> receivers,
                   const std::function<void(std::size_t, const Field2D&)>& on_time);

/// Exact adjoint of forward_from_source_field built on backpropagate():
/// returns nt - 1 physical fields.
std::vector<Field2D> adjoint_source_field(const Propagator& prop, const Field2D& data,
                                          std::span<const Point2> receivers);

}  // namespace seisflow
