#include "mfsda/linalg.hpp"

#include <cmath>
#include <string>

#include "mfsda/error.hpp"
#include "mfsda/kernels.hpp"

namespace mfsda::linalg {

std::vector<double> center_columns_inplace(Matrix& m) {
  if (m.rows() < 2) {
    throw Error(ErrorCode::DegenerateInput, "centering needs at least 2 rows, got " + std::to_string(m.rows()));
  }
  const double inv_n = 1.0 / static_cast<double>(m.rows());
  std::vector<double> means(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    auto c = m.col(j);
    double mean = kernels::sum(c) * inv_n;
    kernels::add_scalar(-mean, c);
    // second pass removes the rounding left by the first
    const double resid = kernels::sum(c) * inv_n;
    if (resid != 0.0) {
      kernels::add_scalar(-resid, c);
      mean += resid;
    }
    means[j] = mean;
  }
  return means;
}

Centered center_columns(const Matrix& m) {
  Centered out{m, {}};
  out.means = center_columns_inplace(out.matrix);
  return out;
}

Matrix gram(const Matrix& x) {
  const std::size_t q = x.cols();
  Matrix g(q, q);
  for (std::size_t j = 0; j < q; ++j) {
    for (std::size_t k = 0; k <= j; ++k) {
      const double v = kernels::dot(x.col(j), x.col(k));
      g(j, k) = v;
      g(k, j) = v;
    }
  }
  return g;
}

Matrix cross_product(const Matrix& x, const Matrix& f) {
  if (x.rows() != f.rows()) {
    throw Error(ErrorCode::InternalContractViolation, "cross_product: row counts differ");
  }
  Matrix out(x.cols(), f.cols());
  for (std::size_t h = 0; h < f.cols(); ++h)
    for (std::size_t j = 0; j < x.cols(); ++j) out(j, h) = kernels::dot(x.col(j), f.col(h));
  return out;
}

SpdFactor SpdFactor::factor(const Matrix& a) {
  const std::size_t k = a.rows();
  if (k == 0 || a.cols() != k) {
    throw Error(ErrorCode::InternalContractViolation, "SPD factorization needs a non-empty square matrix");
  }
  const double tol = kPivotTolerance * norm_inf(a);
  Matrix l(k, k);
  // Left-looking column Cholesky; column j of L is contiguous.
  for (std::size_t j = 0; j < k; ++j) {
    double d = a(j, j);
    for (std::size_t m = 0; m < j; ++m) d -= l(j, m) * l(j, m);
    if (!(d > tol)) {
      throw Error(ErrorCode::SingularGram,
                  "matrix is not positive definite (pivot " + std::to_string(d) + " at index " +
                      std::to_string(j) + ")");
    }
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    auto cj = l.col(j);
    for (std::size_t i = j + 1; i < k; ++i) cj[i] = a(i, j);
    for (std::size_t m = 0; m < j; ++m) {
      const double ljm = l(j, m);
      if (ljm == 0.0) continue;
      auto cm = l.col(m);
      for (std::size_t i = j + 1; i < k; ++i) cj[i] -= ljm * cm[i];
    }
    const double inv = 1.0 / ljj;
    for (std::size_t i = j + 1; i < k; ++i) cj[i] *= inv;
  }
  return SpdFactor(std::move(l));
}

void SpdFactor::forward(std::span<double> x) const {
  const std::size_t k = dimension();
  for (std::size_t j = 0; j < k; ++j) {
    x[j] /= lower_(j, j);
    const double xj = x[j];
    if (xj == 0.0) continue;
    auto cj = lower_.col(j);
    for (std::size_t i = j + 1; i < k; ++i) x[i] -= cj[i] * xj;
  }
}

void SpdFactor::backward(std::span<double> x) const {
  const std::size_t k = dimension();
  for (std::size_t jj = k; jj-- > 0;) {
    auto cj = lower_.col(jj);
    double s = x[jj];
    for (std::size_t i = jj + 1; i < k; ++i) s -= cj[i] * x[i];
    x[jj] = s / cj[jj];
  }
}

std::vector<double> SpdFactor::solve(std::span<const double> b) const {
  if (b.size() != dimension()) {
    throw Error(ErrorCode::InternalContractViolation, "solve: right-hand side has wrong length");
  }
  std::vector<double> x(b.begin(), b.end());
  forward(x);
  backward(x);
  return x;
}

Matrix SpdFactor::solve(const Matrix& b) const {
  if (b.rows() != dimension()) {
    throw Error(ErrorCode::InternalContractViolation, "solve: right-hand side has wrong row count");
  }
  Matrix x = b;
  for (std::size_t c = 0; c < x.cols(); ++c) {
    forward(x.col(c));
    backward(x.col(c));
  }
  return x;
}

std::vector<double> SpdFactor::inverse_diagonal() const {
  const std::size_t k = dimension();
  std::vector<double> diag(k, 0.0);
  std::vector<double> e(k);
  // (A⁻¹)_jj = ‖L⁻¹e_j‖²; L⁻¹e_j is zero above index j.
  for (std::size_t j = 0; j < k; ++j) {
    std::fill(e.begin(), e.end(), 0.0);
    e[j] = 1.0;
    for (std::size_t c = j; c < k; ++c) {
      e[c] /= lower_(c, c);
      const double v = e[c];
      if (v == 0.0) continue;
      auto col = lower_.col(c);
      for (std::size_t i = c + 1; i < k; ++i) e[i] -= col[i] * v;
    }
    double s = 0.0;
    for (std::size_t i = j; i < k; ++i) s += e[i] * e[i];
    diag[j] = s;
  }
  return diag;
}

Matrix spd_solve(const Matrix& a, const Matrix& b) { return SpdFactor::factor(a).solve(b); }

std::vector<double> spd_inverse_diagonal(const Matrix& a) { return SpdFactor::factor(a).inverse_diagonal(); }

OlsFit multi_response_ols(const Matrix& x, const Matrix& f) {
  if (x.rows() != f.rows()) {
    throw Error(ErrorCode::InternalContractViolation, "multi_response_ols: X and F row counts differ");
  }
  if (x.rows() <= x.cols()) {
    throw Error(ErrorCode::InsufficientSamples,
                "least squares needs n > q (n=" + std::to_string(x.rows()) + ", q=" + std::to_string(x.cols()) + ")");
  }
  const SpdFactor chol = SpdFactor::factor(gram(x));
  return OlsFit{chol.solve(cross_product(x, f)), chol.inverse_diagonal()};
}

}  // namespace mfsda::linalg
