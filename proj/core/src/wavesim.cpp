#include "seisflow/wavesim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "seisflow/errors.hpp"

namespace seisflow {

namespace {

std::vector<double> laplacian_coefficients(int order) {
  switch (order) {
    case 2:
      return {-2.0, 1.0};
    case 4:
      return {-5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0};
    default:
      throw ConfigError("spatial order must be 2 or 4, got " + std::to_string(order));
  }
}

double abs_coefficient_sum(const std::vector<double>& c) {
  double s = std::abs(c[0]);
  for (std::size_t k = 1; k < c.size(); ++k) s += 2.0 * std::abs(c[k]);
  return s;
}

void check_divergence(const Field2D& u, std::size_t step, double threshold) {
  const double m = u.max_abs();
  if (!std::isfinite(m) || m > threshold) throw DivergenceError(step, m);
}

}  // namespace

void RickerSource::validate() const {
  if (!(std::isfinite(f0) && f0 > 0.0)) throw ConfigError("ricker f0 must be positive");
  if (!(std::isfinite(t0) && t0 * f0 >= 1.0 - 1e-12)) throw ConfigError("ricker t0 must be >= 1/f0");
  if (!std::isfinite(amplitude)) throw ConfigError("ricker amplitude must be finite");
}

double ricker(const RickerSource& src, double t) noexcept {
  const double a = std::numbers::pi * std::numbers::pi * src.f0 * src.f0 * (t - src.t0) * (t - src.t0);
  return src.amplitude * (1.0 - 2.0 * a) * std::exp(-a);
}

void SpongeBoundary::validate() const {
  if (!(strength >= 0.0 && strength < 1.0)) throw ConfigError("sponge strength must lie in [0, 1)");
}

std::vector<Point2> Acquisition::receivers() const {
  std::vector<Point2> out;
  out.reserve(receiver_xs.size());
  for (double x : receiver_xs) out.push_back({x, receiver_z});
  return out;
}

void Acquisition::validate(const Grid2D& grid) const {
  if (!(std::isfinite(dt) && dt > 0.0)) throw ConfigError("acquisition dt must be positive");
  if (nt < 2) throw ConfigError("acquisition needs nt >= 2");
  if (receiver_xs.empty()) throw ConfigError("acquisition needs at least one receiver");
  const auto inside = [&](Point2 p) {
    return p.x >= 2.0 * grid.dx && p.x <= grid.width() - 2.0 * grid.dx && p.z >= 2.0 * grid.dz &&
           p.z <= grid.depth() - 2.0 * grid.dz;
  };
  if (!inside(source)) throw ConfigError("source position must be at least 2 cells inside the grid");
  for (const auto& r : receivers()) {
    if (!inside(r)) {
      throw ConfigError("receiver at x=" + std::to_string(r.x) + " z=" + std::to_string(r.z) +
                        " is not at least 2 cells inside the grid");
    }
  }
}

WavefieldHistory::WavefieldHistory(std::size_t nz, std::size_t nx, std::size_t nt,
                                   std::size_t save_stride)
    : nz_(nz), nx_(nx), stride_(save_stride) {
  if (stride_ == 0) throw ConfigError("save stride must be >= 1");
  count_ = (nt + stride_ - 1) / stride_;
  data_.assign(count_ * nz_ * nx_, 0.0f);
}

std::span<float> WavefieldHistory::snapshot(std::size_t k) noexcept {
  return std::span<float>(data_).subspan(k * nz_ * nx_, nz_ * nx_);
}

std::span<const float> WavefieldHistory::snapshot(std::size_t k) const noexcept {
  return std::span<const float>(data_).subspan(k * nz_ * nx_, nz_ * nx_);
}

Field2D WavefieldHistory::snapshot_field(std::size_t k) const {
  const auto s = snapshot(k);
  return Field2D(nz_, nx_, std::vector<double>(s.begin(), s.end()));
}

double cfl_max_dt(const VelocityModel& model, int spatial_order) {
  const auto coeffs = laplacian_coefficients(spatial_order);
  const double h = std::min(model.grid.dx, model.grid.dz);
  return h / model.vp.max() * std::sqrt(2.0 / abs_coefficient_sum(coeffs));
}

Propagator::Propagator(const VelocityModel& model, double dt, const SpongeBoundary& sponge,
                       int spatial_order)
    : grid_(model.grid), dt_(dt), order_(spatial_order), coeffs_(laplacian_coefficients(spatial_order)) {
  sponge.validate();
  if (!(std::isfinite(dt) && dt > 0.0)) throw ConfigError("time step must be positive");
  if (model.vp.rows() != grid_.nz || model.vp.cols() != grid_.nx) {
    throw DimensionMismatch("velocity field does not match its grid");
  }
  halo_ = coeffs_.size() - 1;
  top_ = sponge.free_surface ? 0 : sponge.width;
  left_ = sponge.width;
  const std::size_t bottom = sponge.width;
  rows_ = top_ + grid_.nz + bottom + 2 * halo_;
  cols_ = left_ + grid_.nx + sponge.width + 2 * halo_;
  source_scale_ = dt * dt / (grid_.dx * grid_.dz);

  vdt2_.assign(rows_ * cols_, 0.0);
  taper_.assign(rows_ * cols_, 1.0);
  const auto band_depth = [&](std::size_t pos, std::size_t lead, std::size_t n) -> double {
    // pos counts cells from the outer edge of the padded (halo-free) grid
    if (pos < lead) return static_cast<double>(lead - pos);
    if (pos >= lead + n) return static_cast<double>(pos - (lead + n) + 1);
    return 0.0;
  };
  for (std::size_t r = halo_; r < rows_ - halo_; ++r) {
    const std::size_t pr = r - halo_;
    const std::size_t j = std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(pr) -
                                                         static_cast<std::ptrdiff_t>(top_),
                                                     0, static_cast<std::ptrdiff_t>(grid_.nz) - 1);
    const double dz_band = band_depth(pr, top_, grid_.nz);
    for (std::size_t c = halo_; c < cols_ - halo_; ++c) {
      const std::size_t pc = c - halo_;
      const std::size_t i = std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(pc) -
                                                           static_cast<std::ptrdiff_t>(left_),
                                                       0, static_cast<std::ptrdiff_t>(grid_.nx) - 1);
      const double v = model.vp(j, i);
      vdt2_[r * cols_ + c] = v * v * dt * dt;
      const double dx_band = band_depth(pc, left_, grid_.nx);
      const double gx = std::exp(-(sponge.strength * dx_band) * (sponge.strength * dx_band));
      const double gz = std::exp(-(sponge.strength * dz_band) * (sponge.strength * dz_band));
      taper_[r * cols_ + c] = gx * gz;
    }
  }
}

std::size_t Propagator::nearest(Point2 p) const noexcept {
  const auto i = static_cast<std::size_t>(std::lround(p.x / grid_.dx - 0.5));
  const auto j = static_cast<std::size_t>(std::lround(p.z / grid_.dz - 0.5));
  return index(std::min(j, grid_.nz - 1), std::min(i, grid_.nx - 1));
}

Propagator::Bilinear Propagator::bilinear(Point2 p) const noexcept {
  const double fx = p.x / grid_.dx - 0.5;
  const double fz = p.z / grid_.dz - 0.5;
  const double i0 = std::clamp(std::floor(fx), 0.0, static_cast<double>(grid_.nx - 2));
  const double j0 = std::clamp(std::floor(fz), 0.0, static_cast<double>(grid_.nz - 2));
  const double wx = fx - i0;
  const double wz = fz - j0;
  const auto i = static_cast<std::size_t>(i0);
  const auto j = static_cast<std::size_t>(j0);
  return Bilinear{{index(j, i), index(j, i + 1), index(j + 1, i), index(j + 1, i + 1)},
                  {(1 - wz) * (1 - wx), (1 - wz) * wx, wz * (1 - wx), wz * wx}};
}

double Propagator::sample(const Field2D& u, const Bilinear& b) const noexcept {
  const auto v = u.values();
  return b.w[0] * v[b.idx[0]] + b.w[1] * v[b.idx[1]] + b.w[2] * v[b.idx[2]] + b.w[3] * v[b.idx[3]];
}

void Propagator::step(const Field2D& prev, const Field2D& curr, Field2D& next) const {
  const double inv_dx2 = 1.0 / (grid_.dx * grid_.dx);
  const double inv_dz2 = 1.0 / (grid_.dz * grid_.dz);
  const double center = coeffs_[0] * (inv_dx2 + inv_dz2);
  const auto up = prev.values();
  const auto uc = curr.values();
  auto un = next.values();
  const std::size_t stride = cols_;
  const std::size_t h = halo_;

  for (std::size_t r = h; r < rows_ - h; ++r) {
    const std::size_t row = r * stride;
    for (std::size_t c = h; c < cols_ - h; ++c) {
      const std::size_t k = row + c;
      double lap = center * uc[k];
      for (std::size_t m = 1; m <= h; ++m) {
        lap += coeffs_[m] * ((uc[k - m] + uc[k + m]) * inv_dx2 +
                             (uc[k - m * stride] + uc[k + m * stride]) * inv_dz2);
      }
      const double g = taper_[k];
      un[k] = g * (2.0 * uc[k] - g * up[k] + vdt2_[k] * lap);
    }
  }
}

Field2D Propagator::physical(const Field2D& padded) const {
  Field2D out(grid_.nz, grid_.nx);
  for (std::size_t j = 0; j < grid_.nz; ++j) {
    for (std::size_t i = 0; i < grid_.nx; ++i) out(j, i) = padded.values()[index(j, i)];
  }
  return out;
}

void Propagator::physical(const Field2D& padded, std::span<float> out) const {
  const auto src = padded.values();
  for (std::size_t j = 0; j < grid_.nz; ++j) {
    const std::size_t base = index(j, 0);
    for (std::size_t i = 0; i < grid_.nx; ++i) {
      out[j * grid_.nx + i] = static_cast<float>(src[base + i]);
    }
  }
}

Field2D step(const Field2D& u_prev, const Field2D& u_curr, const VelocityModel& model, double dt,
             const SpongeBoundary& sponge, double src_value, Point2 src_position, int spatial_order) {
  const Propagator prop(model, dt, sponge, spatial_order);
  const Field2D shape = prop.make_field();
  require_same_shape(u_prev, shape, "step(u_prev)");
  require_same_shape(u_curr, shape, "step(u_curr)");
  Field2D next = prop.make_field();
  prop.step(u_prev, u_curr, next);
  if (src_value != 0.0) prop.add_term(next, prop.nearest(src_position), prop.source_scale() * src_value);
  return next;
}

ForwardResult forward_model(const VelocityModel& model, const Acquisition& acq,
                            const RickerSource& src, const SpongeBoundary& sponge,
                            bool save_wavefield, const SimulationOptions& opts) {
  model.grid.validate();
  acq.validate(model.grid);
  src.validate();
  if (opts.enforce_cfl) {
    const double dt_max = cfl_max_dt(model, opts.spatial_order);
    if (acq.dt > dt_max) {
      throw StabilityError("dt=" + std::to_string(acq.dt) + " exceeds the stability limit " +
                           std::to_string(dt_max));
    }
  }
  const std::size_t check_every = std::max<std::size_t>(opts.check_interval, 1);

  const Propagator prop(model, acq.dt, sponge, opts.spatial_order);
  const auto receivers = acq.receivers();
  std::vector<Propagator::Bilinear> taps;
  taps.reserve(receivers.size());
  for (const auto& r : receivers) taps.push_back(prop.bilinear(r));
  const std::size_t src_idx = prop.nearest(acq.source);

  ForwardResult result;
  result.gather.data = Field2D(acq.nt, receivers.size());
  result.gather.dt = acq.dt;
  result.gather.receiver_xs = acq.receiver_xs;
  result.gather.receiver_z = acq.receiver_z;
  if (save_wavefield) {
    result.history.emplace(model.grid.nz, model.grid.nx, acq.nt, opts.save_stride);
  }

  Field2D prev = prop.make_field();
  Field2D curr = prop.make_field();
  Field2D next = prop.make_field();
  // Row 0 and snapshot 0 are the zero initial state.
  for (std::size_t n = 0; n + 1 < acq.nt; ++n) {
    prop.step(prev, curr, next);
    prop.add_term(next, src_idx, prop.source_scale() * ricker(src, static_cast<double>(n) * acq.dt));
    std::swap(prev, curr);
    std::swap(curr, next);

    const std::size_t t = n + 1;
    for (std::size_t r = 0; r < taps.size(); ++r) result.gather.data(t, r) = prop.sample(curr, taps[r]);
    if (result.history && t % opts.save_stride == 0) {
      prop.physical(curr, result.history->snapshot(t / opts.save_stride));
    }
    if (t % check_every == 0 || t + 1 == acq.nt) check_divergence(curr, t, opts.divergence_threshold);
  }
  return result;
}

Field2D forward_from_source_field(const Propagator& prop, std::span<const Field2D> source,
                                  std::size_t nt, std::span<const Point2> receivers) {
  if (nt < 2 || source.size() + 1 < nt) {
    throw DimensionMismatch("source field needs nt - 1 time slices");
  }
  const Grid2D& g = prop.grid();
  for (const auto& s : source) {
    if (s.rows() != g.nz || s.cols() != g.nx) throw DimensionMismatch("source slice shape mismatch");
  }
  std::vector<Propagator::Bilinear> taps;
  for (const auto& r : receivers) taps.push_back(prop.bilinear(r));

  Field2D data(nt, receivers.size());
  Field2D prev = prop.make_field();
  Field2D curr = prop.make_field();
  Field2D next = prop.make_field();
  for (std::size_t n = 0; n + 1 < nt; ++n) {
    prop.step(prev, curr, next);
    const Field2D& s = source[n];
    for (std::size_t j = 0; j < g.nz; ++j) {
      for (std::size_t i = 0; i < g.nx; ++i) {
        if (s(j, i) != 0.0) prop.add_term(next, prop.index(j, i), prop.source_scale() * s(j, i));
      }
    }
    std::swap(prev, curr);
    std::swap(curr, next);
    for (std::size_t r = 0; r < taps.size(); ++r) data(n + 1, r) = prop.sample(curr, taps[r]);
  }
  return data;
}

void backpropagate(const Propagator& prop, const Field2D& data, std::span<const Point2> receivers,
                   const std::function<void(std::size_t, const Field2D&)>& on_time) {
  if (data.cols() != receivers.size()) {
    throw DimensionMismatch("gather has " + std::to_string(data.cols()) + " traces but " +
                            std::to_string(receivers.size()) + " receivers were given");
  }
  const std::size_t nt = data.rows();
  std::vector<Propagator::Bilinear> taps;
  for (const auto& r : receivers) taps.push_back(prop.bilinear(r));

  // Reversed-time step k injects trace sample m = nt - 1 - k and produces the
  // adjoint state aligned with forward time m.
  Field2D prev = prop.make_field();
  Field2D curr = prop.make_field();
  Field2D next = prop.make_field();
  for (std::size_t k = 0; k < nt; ++k) {
    const std::size_t m = nt - 1 - k;
    prop.step(prev, curr, next);
    for (std::size_t r = 0; r < taps.size(); ++r) {
      const double g = data(m, r);
      if (g == 0.0) continue;
      const auto& b = taps[r];
      for (int q = 0; q < 4; ++q) prop.add_term(next, b.idx[q], prop.vdt2(b.idx[q]) * b.w[q] * g);
    }
    std::swap(prev, curr);
    std::swap(curr, next);
    on_time(m, curr);
  }
}

std::vector<Field2D> adjoint_source_field(const Propagator& prop, const Field2D& data,
                                          std::span<const Point2> receivers) {
  const std::size_t nt = data.rows();
  if (nt < 2) throw DimensionMismatch("adjoint needs at least 2 time samples");
  const Grid2D& g = prop.grid();
  std::vector<Field2D> out(nt - 1, Field2D(g.nz, g.nx));
  // Source slice n drives forward state n + 1, so it pairs with adjoint state n + 1.
  backpropagate(prop, data, receivers, [&](std::size_t m, const Field2D& z) {
    if (m == 0) return;
    Field2D& slice = out[m - 1];
    for (std::size_t j = 0; j < g.nz; ++j) {
      for (std::size_t i = 0; i < g.nx; ++i) {
        const std::size_t idx = prop.index(j, i);
        slice(j, i) = prop.source_scale() * z.values()[idx] / prop.vdt2(idx);
      }
    }
  });
  return out;
}

}  // namespace seisflow
