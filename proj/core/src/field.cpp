#include "seisflow/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "seisflow/errors.hpp"

namespace seisflow {

DivergenceError::DivergenceError(std::size_t step, double max_abs)
    : Error("wavefield diverged at step " + std::to_string(step) +
            " (max |u| = " + std::to_string(max_abs) + ")"),
      step_(step),
      max_abs_(max_abs) {}

Field2D::Field2D(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw DimensionMismatch("Field2D: data length " + std::to_string(data_.size()) +
                            " does not match " + std::to_string(rows_) + "x" +
                            std::to_string(cols_));
  }
}

double Field2D::min() const {
  if (data_.empty()) throw DimensionMismatch("Field2D::min on empty field");
  return *std::min_element(data_.begin(), data_.end());
}

double Field2D::max() const {
  if (data_.empty()) throw DimensionMismatch("Field2D::max on empty field");
  return *std::max_element(data_.begin(), data_.end());
}

double Field2D::max_abs() const noexcept {
  double m = 0.0;
  for (double v : data_) {
    const double a = std::abs(v);
    if (std::isnan(a)) return a;  // divergence checks must see NaN
    if (a > m) m = a;
  }
  return m;
}

bool Field2D::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

void require_same_shape(const Field2D& a, const Field2D& b, const char* what) {
  if (!a.same_shape(b)) {
    throw DimensionMismatch(std::string(what) + ": shape " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                            std::to_string(b.cols()));
  }
}

}  // namespace seisflow
