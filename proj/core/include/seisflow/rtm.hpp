#pragma once

#include <span>
#include <vector>

#include "seisflow/field.hpp"
#include "seisflow/velmodel.hpp"
#include "seisflow/wavesim.hpp"

namespace seisflow {

struct MigrationModel {
  Grid2D grid;
  Field2D vp_smooth;  // m/s

  VelocityModel as_velocity_model() const { return {grid, vp_smooth}; }
};

struct RtmImage {
  Grid2D grid;
  Field2D values;

  friend bool operator==(const RtmImage&, const RtmImage&) = default;
};

/// Separable Gaussian blur with sigma = radius / 2, truncated at ceil(3 sigma)
/// and mirrored (half-sample symmetric) at the edges. Radius 0 is the identity.
MigrationModel smooth_model(const VelocityModel& model, std::size_t radius_cells);

struct RtmOptions {
  int spatial_order = 4;
  std::size_t save_stride = 1;
};

/// Zero-lag cross-correlation RTM of one shot:
///   image(z, x) = sum over saved steps m of u_s(m, z, x) * u_r(m, z, x)
/// u_s is the Ricker source propagated through the migration model and u_r the
/// back-propagated gather (see backpropagate()). No illumination normalisation.
RtmImage rtm_shot(const MigrationModel& mig, const ShotGather& gather, const Acquisition& acq,
                  const RickerSource& src, const SpongeBoundary& sponge, const RtmOptions& opts = {});

/// Residual gather: `gather` minus the data modeled in the migration model
/// with the same acquisition. Removes the direct arrival (and anything else
/// the smooth model already explains) before imaging.
ShotGather remove_direct_arrival(const ShotGather& gather, const MigrationModel& mig,
                                 const Acquisition& acq, const RickerSource& src,
                                 const SpongeBoundary& sponge, int spatial_order = 4);

/// Element-wise sum in list order.
RtmImage stack_images(std::span<const RtmImage> images);

/// 5-point Laplacian in cell units with replicated edges.
RtmImage laplacian_filter(const RtmImage& image);

/// Zeroes every row whose cell centre lies at or above depth z (m). Applied
/// after filtering, it removes the source and receiver cross-talk that piles up
/// on the acquisition rows.
RtmImage surface_mute(const RtmImage& image, double z);

}  // namespace seisflow
