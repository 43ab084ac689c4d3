#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "seisflow/field.hpp"
#include "seisflow/pruner.hpp"
#include "seisflow/rtm.hpp"
#include "seisflow/velmodel.hpp"
#include "seisflow/wavesim.hpp"

namespace seisflow {

/// F32R raster: a 32-byte little-endian header followed by rows*cols f32
/// values in row-major order.
///
///   offset  size  field
///        0     4  magic "F32R"
///        4     2  version (u16, currently 1)
///        6     2  kind (u16: 0 = field, 1 = gather)
///        8     4  rows (u32)
///       12     4  cols (u32)
///       16     8  meta0 (f64)  field: dz   gather: dt
///       24     8  meta1 (f64)  field: dx   gather: source x (m)
enum class RasterKind : std::uint16_t { field = 0, gather = 1 };

inline constexpr std::uint16_t kF32RVersion = 1;
inline constexpr std::size_t kF32RHeaderSize = 32;

struct Raster {
  RasterKind kind = RasterKind::field;
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  double meta0 = 0.0;
  double meta1 = 0.0;
  std::vector<float> data;

  friend bool operator==(const Raster&, const Raster&) = default;
};

std::vector<std::uint8_t> encode_f32r(const Raster& r);
/// Throws FormatError on bad magic, unknown version or kind, zero or
/// overflowing dimensions, and payloads shorter or longer than rows*cols*4.
Raster decode_f32r(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

void write_f32r(const std::filesystem::path& path, const Raster& r);
Raster read_f32r(const std::filesystem::path& path);

Raster to_raster(const Field2D& f, double dz = 1.0, double dx = 1.0);
Field2D field_from_raster(const Raster& r);

Raster to_raster(const VelocityModel& m);
VelocityModel velocity_from_raster(const Raster& r);

Raster to_raster(const RtmImage& img);

/// Gather raster: nt rows by n_receivers cols, meta0 = dt, meta1 = source x.
Raster to_raster(const ShotGather& g, double source_x);

/// Rank-1 tensors become one row; rank-2 keep their shape; higher ranks are
/// flattened to (shape[0], product of the rest).
Raster to_raster(const WeightTensor& w);
WeightTensor tensor_from_raster(const Raster& r);

/// 64-bit FNV-1a: offset basis 0xcbf29ce484222325, prime 0x100000001b3.
std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) noexcept;

}  // namespace seisflow
