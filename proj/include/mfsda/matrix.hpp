#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace mfsda {

// Dense real matrix. Storage is column-major so that a column is a contiguous
// span; every hot loop in this library walks columns.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  // Row-major literal, e.g. Matrix::from_rows({{1, 2}, {3, 4}}).
  // Throws DegenerateInput on ragged rows, empty input or non-finite entries.
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static Matrix from_row_major(std::size_t rows, std::size_t cols, std::span<const double> values);
  static Matrix identity(std::size_t k);
  static Matrix column(std::span<const double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }

  std::span<double> col(std::size_t c) { return {data_.data() + c * rows_, rows_}; }
  std::span<const double> col(std::size_t c) const { return {data_.data() + c * rows_, rows_}; }

  std::vector<double> row(std::size_t r) const;

  std::span<const double> values() const noexcept { return data_; }

  bool all_finite() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix transpose(const Matrix& a);
Matrix multiply(const Matrix& a, const Matrix& b);
// Largest absolute row sum.
double norm_inf(const Matrix& a);
double max_abs_diff(const Matrix& a, const Matrix& b);

// Copy of the listed rows, in the given order.
Matrix select_rows(const Matrix& a, std::span<const std::size_t> rows);
// Copy of the listed columns, in the given order.
Matrix select_cols(const Matrix& a, std::span<const std::size_t> cols);

}  // namespace mfsda
