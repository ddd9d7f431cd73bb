#include "mfsda/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "mfsda/error.hpp"
#include "mfsda/kernels.hpp"

namespace mfsda {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  if (rows.size() == 0 || rows.begin()->size() == 0) {
    throw Error(ErrorCode::DegenerateInput, "matrix literal must have at least one row and column");
  }
  const std::size_t r = rows.size();
  const std::size_t c = rows.begin()->size();
  std::vector<double> flat;
  flat.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw Error(ErrorCode::DegenerateInput, "ragged matrix literal");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return from_row_major(r, c, flat);
}

Matrix Matrix::from_row_major(std::size_t rows, std::size_t cols, std::span<const double> values) {
  if (rows == 0 || cols == 0) throw Error(ErrorCode::DegenerateInput, "matrix dimensions must be positive");
  if (values.size() != rows * cols) {
    throw Error(ErrorCode::DegenerateInput, "entry count does not match rows*cols");
  }
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double v = values[i * cols + j];
      if (!std::isfinite(v)) throw Error(ErrorCode::DegenerateInput, "non-finite matrix entry");
      m(i, j) = v;
    }
  }
  return m;
}

Matrix Matrix::identity(std::size_t k) {
  Matrix m(k, k);
  for (std::size_t i = 0; i < k; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::column(std::span<const double> values) {
  return from_row_major(values.size(), 1, values);
}

std::vector<double> Matrix::row(std::size_t r) const {
  std::vector<double> out(cols_);
  for (std::size_t c = 0; c < cols_; ++c) out[c] = (*this)(r, c);
  return out;
}

bool Matrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) t(j, i) = a(i, j);
  return t;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::InternalContractViolation, "multiply: inner dimensions differ");
  }
  Matrix out(a.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    auto dst = out.col(j);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double bkj = b(k, j);
      if (bkj != 0.0) kernels::axpy(bkj, a.col(k), dst);
    }
  }
  return out;
}

double norm_inf(const Matrix& a) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += std::abs(a(i, j));
    best = std::max(best, s);
  }
  return best;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::InternalContractViolation, "max_abs_diff: shape mismatch");
  }
  double best = 0.0;
  auto va = a.values();
  auto vb = b.values();
  for (std::size_t i = 0; i < va.size(); ++i) best = std::max(best, std::abs(va[i] - vb[i]));
  return best;
}

Matrix select_rows(const Matrix& a, std::span<const std::size_t> rows) {
  Matrix out(rows.size(), a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    auto src = a.col(j);
    auto dst = out.col(j);
    for (std::size_t i = 0; i < rows.size(); ++i) dst[i] = src[rows[i]];
  }
  return out;
}

Matrix select_cols(const Matrix& a, std::span<const std::size_t> cols) {
  Matrix out(a.rows(), cols.size());
  for (std::size_t k = 0; k < cols.size(); ++k) {
    auto src = a.col(cols[k]);
    std::copy(src.begin(), src.end(), out.col(k).begin());
  }
  return out;
}

}  // namespace mfsda
