#include "seisflow/rtm.hpp"

#include <cmath>
#include <string>

#include "seisflow/errors.hpp"

namespace seisflow {

namespace {

// Half-sample symmetric reflection into [0, n): ... c b a | a b c ... | c b a
std::size_t mirror(std::ptrdiff_t idx, std::size_t n) {
  const auto period = static_cast<std::ptrdiff_t>(2 * n);
  std::ptrdiff_t m = idx % period;
  if (m < 0) m += period;
  if (m >= static_cast<std::ptrdiff_t>(n)) m = period - 1 - m;
  return static_cast<std::size_t>(m);
}

void check_gather(const ShotGather& gather, const Acquisition& acq) {
  if (gather.nt() != acq.nt || gather.n_receivers() != acq.receiver_xs.size()) {
    throw DimensionMismatch("gather is " + std::to_string(gather.nt()) + "x" +
                            std::to_string(gather.n_receivers()) + " but acquisition expects " +
                            std::to_string(acq.nt) + "x" + std::to_string(acq.receiver_xs.size()));
  }
  if (std::abs(gather.dt - acq.dt) > 1e-12 * acq.dt) {
    throw DimensionMismatch("gather dt does not match acquisition dt");
  }
  if (!gather.receiver_xs.empty()) {
    for (std::size_t r = 0; r < acq.receiver_xs.size(); ++r) {
      if (std::abs(gather.receiver_xs[r] - acq.receiver_xs[r]) > 1e-9) {
        throw DimensionMismatch("gather receiver positions differ from acquisition");
      }
    }
  }
}

}  // namespace

MigrationModel smooth_model(const VelocityModel& model, std::size_t radius_cells) {
  MigrationModel out{model.grid, model.vp};
  if (radius_cells == 0) return out;

  const double sigma = static_cast<double>(radius_cells) / 2.0;
  const auto half = static_cast<std::ptrdiff_t>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(static_cast<std::size_t>(2 * half + 1));
  double total = 0.0;
  for (std::ptrdiff_t k = -half; k <= half; ++k) {
    const double w = std::exp(-static_cast<double>(k * k) / (2.0 * sigma * sigma));
    kernel[static_cast<std::size_t>(k + half)] = w;
    total += w;
  }
  for (double& w : kernel) w /= total;

  const std::size_t nz = model.vp.rows();
  const std::size_t nx = model.vp.cols();
  Field2D tmp(nz, nx);
  for (std::size_t j = 0; j < nz; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      double acc = 0.0;
      for (std::ptrdiff_t k = -half; k <= half; ++k) {
        acc += kernel[static_cast<std::size_t>(k + half)] *
               model.vp(j, mirror(static_cast<std::ptrdiff_t>(i) + k, nx));
      }
      tmp(j, i) = acc;
    }
  }
  for (std::size_t j = 0; j < nz; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      double acc = 0.0;
      for (std::ptrdiff_t k = -half; k <= half; ++k) {
        acc += kernel[static_cast<std::size_t>(k + half)] *
               tmp(mirror(static_cast<std::ptrdiff_t>(j) + k, nz), i);
      }
      out.vp_smooth(j, i) = acc;
    }
  }
  return out;
}

RtmImage rtm_shot(const MigrationModel& mig, const ShotGather& gather, const Acquisition& acq,
                  const RickerSource& src, const SpongeBoundary& sponge, const RtmOptions& opts) {
  const VelocityModel model = mig.as_velocity_model();
  model.grid.validate();
  acq.validate(model.grid);
  check_gather(gather, acq);

  SimulationOptions sim;
  sim.spatial_order = opts.spatial_order;
  sim.save_stride = opts.save_stride;
  // Throws StabilityError before any stepping when dt is too large.
  const ForwardResult fwd = forward_model(model, acq, src, sponge, true, sim);
  const WavefieldHistory& history = *fwd.history;

  const Propagator prop(model, acq.dt, sponge, opts.spatial_order);
  const auto receivers = acq.receivers();
  RtmImage image{model.grid, Field2D(model.grid.nz, model.grid.nx)};
  auto img = image.values.values();
  const std::size_t nx = model.grid.nx;
  backpropagate(prop, gather.data, receivers, [&](std::size_t m, const Field2D& z) {
    if (m % opts.save_stride != 0) return;
    const auto snap = history.snapshot(m / opts.save_stride);
    const auto zv = z.values();
    for (std::size_t j = 0; j < model.grid.nz; ++j) {
      const std::size_t base = prop.index(j, 0);
      for (std::size_t i = 0; i < nx; ++i) {
        img[j * nx + i] += static_cast<double>(snap[j * nx + i]) * zv[base + i];
      }
    }
  });
  return image;
}

ShotGather remove_direct_arrival(const ShotGather& gather, const MigrationModel& mig,
                                 const Acquisition& acq, const RickerSource& src,
                                 const SpongeBoundary& sponge, int spatial_order) {
  check_gather(gather, acq);
  SimulationOptions sim;
  sim.spatial_order = spatial_order;
  const ShotGather smooth = forward_model(mig.as_velocity_model(), acq, src, sponge, false, sim).gather;
  ShotGather out = gather;
  auto v = out.data.values();
  const auto s = smooth.data.values();
  for (std::size_t k = 0; k < v.size(); ++k) v[k] -= s[k];
  return out;
}

RtmImage stack_images(std::span<const RtmImage> images) {
  if (images.empty()) throw DimensionMismatch("cannot stack an empty image list");
  RtmImage out = images.front();
  for (std::size_t s = 1; s < images.size(); ++s) {
    if (!(images[s].grid == out.grid) || !images[s].values.same_shape(out.values)) {
      throw DimensionMismatch("stack_images: image " + std::to_string(s) + " is on a different grid");
    }
    auto acc = out.values.values();
    const auto v = images[s].values.values();
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += v[k];
  }
  return out;
}

RtmImage laplacian_filter(const RtmImage& image) {
  const Field2D& u = image.values;
  const std::size_t nz = u.rows();
  const std::size_t nx = u.cols();
  RtmImage out{image.grid, Field2D(nz, nx)};
  for (std::size_t j = 0; j < nz; ++j) {
    const std::size_t jm = j == 0 ? 0 : j - 1;
    const std::size_t jp = j + 1 == nz ? j : j + 1;
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t im = i == 0 ? 0 : i - 1;
      const std::size_t ip = i + 1 == nx ? i : i + 1;
      out.values(j, i) = u(jm, i) + u(jp, i) + u(j, im) + u(j, ip) - 4.0 * u(j, i);
    }
  }
  return out;
}

RtmImage surface_mute(const RtmImage& image, double z) {
  RtmImage out = image;
  for (std::size_t j = 0; j < out.values.rows() && (j + 0.5) * out.grid.dz <= z; ++j) {
    for (std::size_t i = 0; i < out.values.cols(); ++i) out.values(j, i) = 0.0;
  }
  return out;
}

}  // namespace seisflow
