#include "seisflow/render.hpp"

#include <cmath>
#include <string>

#include "seisflow/errors.hpp"
#include "seisflow/f32r.hpp"

namespace seisflow {

std::vector<std::uint8_t> to_gray8(const Field2D& f) {
  if (f.empty()) throw FormatError("cannot render an empty field");
  if (!f.all_finite()) throw FormatError("cannot render a field with non-finite values");
  const double lo = f.min();
  const double hi = f.max();
  std::vector<std::uint8_t> out(f.size(), 128);
  if (hi == lo) return out;
  const double scale = 255.0 / (hi - lo);
  for (std::size_t k = 0; k < f.size(); ++k) {
    out[k] = static_cast<std::uint8_t>(std::lround((f.values()[k] - lo) * scale));
  }
  return out;
}

std::vector<std::uint8_t> encode_pgm(const Field2D& f) {
  const auto pixels = to_gray8(f);
  const std::string header = "P5\n" + std::to_string(f.cols()) + " " + std::to_string(f.rows()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), pixels.begin(), pixels.end());
  return out;
}

void write_pgm(const std::filesystem::path& path, const Field2D& f) { write_file(path, encode_pgm(f)); }

}  // namespace seisflow
