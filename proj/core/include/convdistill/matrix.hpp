#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "convdistill/errors.hpp"

namespace convdistill {

using Complex = std::complex<double>;

inline bool is_finite(double v) noexcept { return std::isfinite(v); }
inline bool is_finite(const Complex& v) noexcept {
  return std::isfinite(v.real()) && std::isfinite(v.imag());
}

/// Dense row-major matrix with at least one row and one column.
///
/// Constructors that take external data reject non-finite entries. Mutable
/// element access is unchecked; code writing through it is expected to keep
/// entries finite (I/O boundaries call validate_finite()).
template <typename T>
class Matrix {
 public:
  using value_type = T;

  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
    check_shape(rows, cols);
    data_.assign(rows * cols, T{});
  }

  Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    check_shape(rows, cols);
    if (data_.size() != rows * cols) {
      throw Error(ErrorCode::DimensionMismatch,
                  "data length " + std::to_string(data_.size()) + " does not match " +
                      std::to_string(rows) + "x" + std::to_string(cols));
    }
    validate_finite();
  }

  static Matrix from_rows(std::initializer_list<std::initializer_list<T>> rows) {
    if (rows.size() == 0) throw Error(ErrorCode::InvalidArgument, "matrix needs at least one row");
    const std::size_t cols = rows.begin()->size();
    std::vector<T> data;
    data.reserve(rows.size() * cols);
    for (const auto& r : rows) {
      if (r.size() != cols) throw Error(ErrorCode::DimensionMismatch, "ragged initializer rows");
      data.insert(data.end(), r.begin(), r.end());
    }
    return Matrix(rows.size(), cols, std::move(data));
  }

  static Matrix filled(std::size_t rows, std::size_t cols, T value) {
    return Matrix(rows, cols, std::vector<T>(rows * cols, value));
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool same_shape(const Matrix& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  T& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<T> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }
  T* data() noexcept { return data_.data(); }
  const T* data() const noexcept { return data_.data(); }

  void validate_finite() const {
    for (std::size_t i = 0; i < data_.size(); ++i) {
      if (!is_finite(data_[i])) {
        throw Error(ErrorCode::NonFinite, "non-finite entry at (" + std::to_string(i / cols_) +
                                              ", " + std::to_string(i % cols_) + ")");
      }
    }
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  static void check_shape(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) {
      throw Error(ErrorCode::InvalidArgument, "matrix dimensions must be positive");
    }
  }

  std::size_t rows_;
  std::size_t cols_;
  std::vector<T> data_;
};

using ComplexMatrix = Matrix<Complex>;
using RealMatrix = Matrix<double>;

inline std::string shape_string(std::size_t rows, std::size_t cols) {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

template <typename T>
std::string shape_string(const Matrix<T>& m) {
  return shape_string(m.rows(), m.cols());
}

}  // namespace convdistill
