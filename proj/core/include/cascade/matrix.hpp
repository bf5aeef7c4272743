#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace cascade {

using Vector = std::vector<double>;

/// Dense row-major matrix of finite doubles. Shape is fixed at construction.
class Matrix {
 public:
  /// rows x cols filled with `fill`. Throws IndexOutOfRange for an empty shape.
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  /// Throws IndexOutOfRange on an empty shape, LengthMismatch on a size
  /// mismatch, ValidationFailure on a non-finite entry.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);
  /// Nested literal; all rows must have equal length.
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const double> data() const noexcept { return data_; }

  Vector column_sums() const;
  bool nonnegative() const noexcept;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

/// Throws LengthMismatch when shapes disagree.
Vector multiply(const Matrix& a, std::span<const double> x);
Matrix multiply(const Matrix& a, const Matrix& b);
Matrix subtract(const Matrix& a, const Matrix& b);

Vector add(std::span<const double> a, std::span<const double> b);
Vector subtract(std::span<const double> a, std::span<const double> b);

double norm_inf(std::span<const double> x);
double norm_inf(const Matrix& a);  // max row sum of |a_ij|
double norm_1(std::span<const double> x);
double norm_1(const Matrix& a);  // max column sum of |a_ij|

/// Maps |v| < eps to exactly 0; used before every strict sign test.
inline double clamp_zero(double v, double eps = 1e-12) noexcept {
  return (v < eps && v > -eps) ? 0.0 : v;
}

}  // namespace cascade
