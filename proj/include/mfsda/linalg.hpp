#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mfsda/matrix.hpp"

namespace mfsda::linalg {

struct Centered {
  Matrix matrix;
  std::vector<double> means;
};

// Subtracts each column's sample mean. Throws DegenerateInput for < 2 rows.
Centered center_columns(const Matrix& m);
// In-place variant; returns the subtracted means.
std::vector<double> center_columns_inplace(Matrix& m);

// XᵀX (unnormalized).
Matrix gram(const Matrix& x);
// XᵀF.
Matrix cross_product(const Matrix& x, const Matrix& f);

// Cholesky factor A = LLᵀ of a symmetric positive-definite matrix. A pivot at
// or below 1e-12·‖A‖∞ is reported as SingularGram.
class SpdFactor {
 public:
  static SpdFactor factor(const Matrix& a);

  std::size_t dimension() const noexcept { return lower_.rows(); }
  const Matrix& lower() const noexcept { return lower_; }

  Matrix solve(const Matrix& b) const;
  std::vector<double> solve(std::span<const double> b) const;
  // diag(A⁻¹), computed as the squared row norms of L⁻¹ columns.
  std::vector<double> inverse_diagonal() const;

 private:
  explicit SpdFactor(Matrix lower) : lower_(std::move(lower)) {}
  void forward(std::span<double> x) const;
  void backward(std::span<double> x) const;

  Matrix lower_;
};

inline constexpr double kPivotTolerance = 1e-12;

Matrix spd_solve(const Matrix& a, const Matrix& b);
std::vector<double> spd_inverse_diagonal(const Matrix& a);

struct OlsFit {
  Matrix coefficients;            // q×H
  std::vector<double> inv_gram_diag;  // s²_j = e_jᵀ(XᵀX)⁻¹e_j
};

// Least squares of every column of F on X; both are expected centered.
// Throws InsufficientSamples when n ≤ q and SingularGram on rank deficiency.
OlsFit multi_response_ols(const Matrix& x, const Matrix& f);

}  // namespace mfsda::linalg
