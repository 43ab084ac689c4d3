#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <random>

#include "seisflow/config.hpp"
#include "seisflow/errors.hpp"
#include "seisflow/f32r.hpp"
#include "seisflow/render.hpp"
#include "support.hpp"

using namespace seisflow;

namespace {

Raster random_raster(std::mt19937_64& rng, std::uint32_t rows, std::uint32_t cols) {
  Raster r{RasterKind::field, rows, cols, 10.0, 12.5, std::vector<float>(rows * cols)};
  for (auto& v : r.data) v = std::bit_cast<float>(static_cast<std::uint32_t>(rng()));
  for (auto& v : r.data)
    if (!std::isfinite(v)) v = 0.0f;
  return r;
}

std::uint64_t fnv_reference(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::span<const std::uint8_t> bytes_of(const std::string& s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

}  // namespace

TEST(F32R, HeaderLayout) {
  const Raster r{RasterKind::gather, 3, 2, 0.002, 505.0, {1, 2, 3, 4, 5, 6}};
  const auto b = encode_f32r(r);
  ASSERT_EQ(b.size(), kF32RHeaderSize + 6 * 4);
  EXPECT_EQ(std::string(b.begin(), b.begin() + 4), "F32R");
  EXPECT_EQ(b[4], 1);
  EXPECT_EQ(b[5], 0);
  EXPECT_EQ(b[6], 1);
  EXPECT_EQ(b[8], 3);
  EXPECT_EQ(b[12], 2);
  double meta0 = 0;
  std::memcpy(&meta0, b.data() + 16, 8);
  EXPECT_EQ(meta0, 0.002);
  float last = 0;
  std::memcpy(&last, b.data() + 32 + 20, 4);
  EXPECT_EQ(last, 6.0f);
}

TEST(F32R, RoundTripIsBitExact) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    auto r = random_raster(rng, 1 + rng() % 40, 1 + rng() % 40);
    r.data[0] = -0.0f;
    const auto back = decode_f32r(encode_f32r(r));
    ASSERT_EQ(back.rows, r.rows);
    ASSERT_EQ(back.cols, r.cols);
    ASSERT_EQ(back.meta0, r.meta0);
    for (std::size_t k = 0; k < r.data.size(); ++k)
      ASSERT_EQ(std::bit_cast<std::uint32_t>(back.data[k]), std::bit_cast<std::uint32_t>(r.data[k]));
  }
}

TEST(F32R, FileRoundTrip) {
  testing_support::TempDir dir("f32r");
  std::mt19937_64 rng(2);
  const auto r = random_raster(rng, 7, 9);
  write_f32r(dir.path() / "a.f32r", r);
  EXPECT_EQ(read_f32r(dir.path() / "a.f32r"), r);
  EXPECT_THROW(read_f32r(dir.path() / "missing.f32r"), Error);
}

TEST(F32R, MalformedInputs) {
  const auto good = encode_f32r(Raster{RasterKind::field, 2, 2, 1, 1, {1, 2, 3, 4}});
  auto bad = good;
  bad[0] = 'X';
  EXPECT_THROW(decode_f32r(bad), FormatError);
  EXPECT_THROW(decode_f32r(std::span(good).first(20)), FormatError);
  EXPECT_THROW(decode_f32r(std::span(good).first(good.size() - 1)), FormatError);
  auto extra = good;
  extra.push_back(0);
  EXPECT_THROW(decode_f32r(extra), FormatError);
  auto version = good;
  version[4] = 9;
  EXPECT_THROW(decode_f32r(version), FormatError);
  auto kind = good;
  kind[6] = 7;
  EXPECT_THROW(decode_f32r(kind), FormatError);
  auto big = good;
  big[8] = 0xff;
  big[9] = 0xff;
  EXPECT_THROW(decode_f32r(big), FormatError);  // header larger than payload
  auto huge = good;
  std::memset(huge.data() + 8, 0xff, 8);
  EXPECT_THROW(decode_f32r(huge), FormatError);
  auto empty = good;
  std::memset(empty.data() + 8, 0, 4);
  EXPECT_THROW(decode_f32r(empty), FormatError);
}

TEST(F32R, TypedConversions) {
  std::mt19937_64 rng(3);
  const VelocityModel m{Grid2D{20, 18, 7.5, 12.5}, testing_support::random_field(rng, 18, 20, 1500, 4000)};
  const auto r = to_raster(m);
  EXPECT_EQ(r.meta0, 12.5);
  EXPECT_EQ(r.meta1, 7.5);
  const auto back = velocity_from_raster(r);
  EXPECT_EQ(back.grid, m.grid);
  for (std::size_t k = 0; k < m.vp.size(); ++k)
    ASSERT_EQ(back.vp.values()[k], static_cast<double>(static_cast<float>(m.vp.values()[k])));

  ShotGather g{Field2D(5, 3, 0.5), 0.002, {10, 20, 30}, 20};
  const auto gr = to_raster(g, 505.0);
  EXPECT_EQ(gr.kind, RasterKind::gather);
  EXPECT_EQ(gr.meta0, 0.002);
  EXPECT_EQ(gr.meta1, 505.0);

  const WeightTensor w{{1, 2, 3, 4, 5, 6}, {3, 2}};
  const auto wr = to_raster(w);
  EXPECT_EQ(wr.rows, 3u);
  EXPECT_EQ(tensor_from_raster(wr).values, w.values);
}

TEST(Fnv1a, MatchesReference) {
  EXPECT_EQ(fnv1a64({}), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64(bytes_of("a")), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64(bytes_of("foobar")), 0x85944171f73967e8ULL);
  const std::string s = "seismic velocity model";
  EXPECT_EQ(fnv1a64(bytes_of(s)), fnv_reference(s));
}

TEST(Render, ConstantFieldIsMidGray) {
  const auto px = to_gray8(Field2D(6, 5, -3.25));
  for (auto v : px) EXPECT_EQ(v, 128);
}

TEST(Render, TwoValuedFieldHitsEndpoints) {
  Field2D f(4, 4, 1.0);
  f(1, 2) = 9.0;
  f(3, 0) = 9.0;
  const auto px = to_gray8(f);
  for (std::size_t k = 0; k < px.size(); ++k) EXPECT_EQ(px[k], f.values()[k] == 9.0 ? 255 : 0);
}

TEST(Render, RampRowsMatchRecomputation) {
  Field2D f(64, 64);
  for (std::size_t j = 0; j < 64; ++j)
    for (std::size_t i = 0; i < 64; ++i) f(j, i) = 0.1 * i;
  const auto px = to_gray8(f);
  for (std::size_t j = 0; j < 64; ++j) {
    for (std::size_t i = 0; i < 64; ++i) {
      const auto expect = static_cast<std::uint8_t>(std::lround(255.0 * (0.1 * i) / 6.3));
      ASSERT_EQ(px[j * 64 + i], expect);
      if (i > 0) ASSERT_GE(px[j * 64 + i], px[j * 64 + i - 1]);
    }
  }
}

TEST(Render, PgmHeaderAndErrors) {
  const auto pgm = encode_pgm(Field2D(3, 4, 1.0));
  const std::string head(pgm.begin(), pgm.begin() + 11);
  EXPECT_EQ(head, "P5\n4 3\n255\n");
  EXPECT_EQ(pgm.size(), 11u + 12u);
  Field2D bad(2, 2);
  bad(0, 0) = NAN;
  EXPECT_THROW(to_gray8(bad), FormatError);
  EXPECT_THROW(to_gray8(Field2D{}), FormatError);
}

TEST(KeyValue, ParsesCommentsAndWhitespace) {
  const auto kv = KeyValueFile::parse("# header\n nx = 64 \n\ndt=0.0005 # inline\nname = a b\n");
  EXPECT_EQ(kv.get_int("nx", 0), 64);
  EXPECT_DOUBLE_EQ(kv.get_double("dt", 0), 0.0005);
  EXPECT_EQ(kv.get_string("name", ""), "a b");
  EXPECT_EQ(kv.get_int("missing", 7), 7);
}

TEST(KeyValue, Errors) {
  EXPECT_THROW(KeyValueFile::parse("nx 64\n"), FormatError);
  EXPECT_THROW(KeyValueFile::parse("nx = 1\nnx = 2\n"), FormatError);
  EXPECT_THROW(KeyValueFile::parse(" = 3\n"), FormatError);
  const auto kv = KeyValueFile::parse("a = 12x\nb = maybe\nc = -3\n");
  EXPECT_THROW(kv.get_int("a", 0), ConfigError);
  EXPECT_THROW(kv.get_double("a", 0), ConfigError);
  EXPECT_THROW(kv.get_bool("b", false), ConfigError);
  EXPECT_THROW(kv.get_uint("c", 0), ConfigError);
}

TEST(PipelineConfigFile, DefaultsAndTextRoundTrip) {
  const auto def = PipelineConfig::from_keys(KeyValueFile::parse(""));
  EXPECT_EQ(def.grid.nx, 201u);
  EXPECT_EQ(def.nt, 1200u);
  EXPECT_TRUE(def.remove_direct);

  PipelineConfig c = def;
  c.grid = {80, 70, 12.5, 10};
  c.salt.placement_box = {100, 200, 700, 600};
  c.master_seed = 123456789012345ULL;
  c.dt = 0.0009;
  c.n_models = 3;
  c.laplacian = false;
  c.surface_mute = false;
  c.output_dir = "some/where";
  const auto back = PipelineConfig::from_keys(KeyValueFile::parse(c.to_text()));
  EXPECT_EQ(back.to_text(), c.to_text());
  EXPECT_EQ(back.master_seed, c.master_seed);
  EXPECT_EQ(back.grid, c.grid);
  EXPECT_FALSE(back.laplacian);
  EXPECT_FALSE(back.surface_mute);
}

TEST(PipelineConfigFile, RejectsBadConfigs) {
  EXPECT_THROW(PipelineConfig::from_keys(KeyValueFile::parse("nxx = 3\n")), ConfigError);
  EXPECT_THROW(PipelineConfig::from_keys(KeyValueFile::parse("n_models = 0\n")), ConfigError);
  EXPECT_THROW(PipelineConfig::from_keys(KeyValueFile::parse("dt = 0.01\n")), ConfigError);
  EXPECT_THROW(PipelineConfig::from_keys(KeyValueFile::parse("spatial_order = 3\n")), ConfigError);
  EXPECT_THROW(PipelineConfig::from_keys(KeyValueFile::parse("salt.v.min = 3000\n")), ConfigError);
  EXPECT_THROW(PipelineConfig::from_keys(KeyValueFile::parse("source_z = 5\n")), ConfigError);
}

TEST(PipelineConfigFile, ShotGeometry) {
  PipelineConfig c;
  c.shots_per_model = 3;
  const auto a0 = shot_acquisition(c, 0);
  const auto a1 = shot_acquisition(c, 1);
  EXPECT_DOUBLE_EQ(a0.source.x, 505.0);
  EXPECT_DOUBLE_EQ(a1.source.x, 1005.0);
  EXPECT_DOUBLE_EQ(a0.receiver_xs.front(), 25.0);
  EXPECT_DOUBLE_EQ(a0.receiver_xs.back(), 1985.0);
  EXPECT_EQ(a0.receiver_xs.size(), 99u);
  EXPECT_NO_THROW(a0.validate(c.grid));
}
