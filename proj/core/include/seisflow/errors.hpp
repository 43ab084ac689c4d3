#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace seisflow {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or violated precondition on user-supplied parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Geometric input that cannot produce a valid result (e.g. collinear hull points).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Time step exceeds the explicit-scheme stability bound.
class StabilityError : public Error {
 public:
  using Error::Error;
};

/// Wavefield blew up (NaN or above the guard threshold) during propagation.
class DivergenceError : public Error {
 public:
  DivergenceError(std::size_t step, double max_abs);

  std::size_t step() const noexcept { return step_; }
  double max_abs() const noexcept { return max_abs_; }

 private:
  std::size_t step_;
  double max_abs_;
};

/// Malformed serialized data (binary raster, genotype text, CSV, config).
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace seisflow
