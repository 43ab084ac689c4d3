#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace seisflow {

/// Dense row-major 2D array of doubles. Row index is depth (z), column is x.
class Field2D {
 public:
  Field2D() = default;
  Field2D(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Field2D(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  bool same_shape(const Field2D& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  double min() const;
  double max() const;
  double max_abs() const noexcept;
  bool all_finite() const noexcept;

  friend bool operator==(const Field2D&, const Field2D&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Throws DimensionMismatch naming `what` when shapes differ.
void require_same_shape(const Field2D& a, const Field2D& b, const char* what);

}  // namespace seisflow
