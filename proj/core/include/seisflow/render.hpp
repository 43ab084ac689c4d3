#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "seisflow/field.hpp"

namespace seisflow {

/// Min-max normalisation to 8 bits: round(255 (v - min) / (max - min)).
/// A constant field maps to 128 everywhere. Throws FormatError on non-finite values.
std::vector<std::uint8_t> to_gray8(const Field2D& f);

/// Binary PGM (P5, maxval 255).
std::vector<std::uint8_t> encode_pgm(const Field2D& f);
void write_pgm(const std::filesystem::path& path, const Field2D& f);

}  // namespace seisflow
