#include "seisflow/f32r.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <string>

#include "seisflow/errors.hpp"

namespace seisflow {

namespace {

constexpr char kMagic[4] = {'F', '3', '2', 'R'};

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T v) {
  for (std::size_t b = 0; b < sizeof(T); ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

template <typename T>
T get_le(std::span<const std::uint8_t> in, std::size_t offset) {
  T v = 0;
  for (std::size_t b = 0; b < sizeof(T); ++b) v |= static_cast<T>(in[offset + b]) << (8 * b);
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_f32r(const Raster& r) {
  if (r.data.size() != static_cast<std::size_t>(r.rows) * r.cols) {
    throw DimensionMismatch("raster payload does not match its dimensions");
  }
  std::vector<std::uint8_t> out;
  out.reserve(kF32RHeaderSize + 4 * r.data.size());
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  put_le<std::uint16_t>(out, kF32RVersion);
  put_le<std::uint16_t>(out, static_cast<std::uint16_t>(r.kind));
  put_le<std::uint32_t>(out, r.rows);
  put_le<std::uint32_t>(out, r.cols);
  put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(r.meta0));
  put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(r.meta1));
  for (float v : r.data) put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

Raster decode_f32r(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kF32RHeaderSize) throw FormatError("F32R: truncated header");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw FormatError("F32R: bad magic");
  const auto version = get_le<std::uint16_t>(bytes, 4);
  if (version != kF32RVersion) throw FormatError("F32R: unsupported version " + std::to_string(version));
  const auto kind = get_le<std::uint16_t>(bytes, 6);
  if (kind > 1) throw FormatError("F32R: unknown kind " + std::to_string(kind));

  Raster r;
  r.kind = static_cast<RasterKind>(kind);
  r.rows = get_le<std::uint32_t>(bytes, 8);
  r.cols = get_le<std::uint32_t>(bytes, 12);
  r.meta0 = std::bit_cast<double>(get_le<std::uint64_t>(bytes, 16));
  r.meta1 = std::bit_cast<double>(get_le<std::uint64_t>(bytes, 24));
  if (r.rows == 0 || r.cols == 0) throw FormatError("F32R: zero dimension");

  std::size_t count = 0, payload = 0;
  if (__builtin_mul_overflow(static_cast<std::size_t>(r.rows), static_cast<std::size_t>(r.cols), &count) ||
      __builtin_mul_overflow(count, std::size_t{4}, &payload)) {
    throw FormatError("F32R: dimensions overflow");
  }
  const std::size_t available = bytes.size() - kF32RHeaderSize;
  if (available < payload) {
    throw FormatError("F32R: truncated payload (" + std::to_string(available) + " of " +
                      std::to_string(payload) + " bytes)");
  }
  if (available > payload) throw FormatError("F32R: trailing bytes after payload");
  r.data.resize(count);
  for (std::size_t k = 0; k < count; ++k) {
    r.data[k] = std::bit_cast<float>(get_le<std::uint32_t>(bytes, kF32RHeaderSize + 4 * k));
  }
  return r;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed for " + path.string());
}

void write_f32r(const std::filesystem::path& path, const Raster& r) { write_file(path, encode_f32r(r)); }

Raster read_f32r(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  try {
    return decode_f32r(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

Raster to_raster(const Field2D& f, double dz, double dx) {
  Raster r{RasterKind::field, static_cast<std::uint32_t>(f.rows()), static_cast<std::uint32_t>(f.cols()),
           dz, dx, {}};
  r.data.assign(f.values().begin(), f.values().end());
  return r;
}

Field2D field_from_raster(const Raster& r) {
  return Field2D(r.rows, r.cols, std::vector<double>(r.data.begin(), r.data.end()));
}

Raster to_raster(const VelocityModel& m) { return to_raster(m.vp, m.grid.dz, m.grid.dx); }

VelocityModel velocity_from_raster(const Raster& r) {
  if (r.kind != RasterKind::field) throw FormatError("expected a field raster for a velocity model");
  VelocityModel m{Grid2D{r.cols, r.rows, r.meta1, r.meta0}, field_from_raster(r)};
  m.grid.validate();
  if (!m.vp.all_finite()) throw FormatError("velocity raster contains non-finite values");
  return m;
}

Raster to_raster(const RtmImage& img) { return to_raster(img.values, img.grid.dz, img.grid.dx); }

Raster to_raster(const ShotGather& g, double source_x) {
  Raster r = to_raster(g.data, g.dt, source_x);
  r.kind = RasterKind::gather;
  return r;
}

Raster to_raster(const WeightTensor& w) {
  w.validate();
  std::size_t rows = 1, cols = w.size();
  if (w.shape.size() >= 2) {
    rows = w.shape[0];
    cols = w.size() / rows;
  }
  return Raster{RasterKind::field, static_cast<std::uint32_t>(rows), static_cast<std::uint32_t>(cols), 0.0,
                0.0, w.values};
}

WeightTensor tensor_from_raster(const Raster& r) {
  WeightTensor w;
  w.values = r.data;
  w.shape = r.rows == 1 ? std::vector<std::size_t>{r.cols} : std::vector<std::size_t>{r.rows, r.cols};
  return w;
}

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace seisflow
