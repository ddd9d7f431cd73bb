#pragma once
// Generators and brute-force oracles shared by the unit and acceptance tests.
// Nothing here calls into the library's numerical code, so these can serve as
// independent references.

#include <algorithm>
#include <bit>
#include <limits>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "mfsda/matrix.hpp"

namespace testsupport {

using Rng = std::mt19937_64;

inline mfsda::Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, double sd = 1.0) {
  std::normal_distribution<double> nd(0.0, sd);
  mfsda::Matrix m(rows, cols);
  for (std::size_t c = 0; c < cols; ++c)
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = nd(rng);
  return m;
}

inline std::vector<double> random_vector(Rng& rng, std::size_t n, double sd = 1.0) {
  std::normal_distribution<double> nd(0.0, sd);
  std::vector<double> v(n);
  for (double& x : v) x = nd(rng);
  return v;
}

inline std::size_t uniform_size(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline void center(mfsda::Matrix& m) {
  for (std::size_t c = 0; c < m.cols(); ++c) {
    long double s = 0;
    for (std::size_t r = 0; r < m.rows(); ++r) s += m(r, c);
    const double mean = static_cast<double>(s / m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) m(r, c) -= mean;
  }
}

// Naive triple loop in long double.
inline mfsda::Matrix naive_multiply(const mfsda::Matrix& a, const mfsda::Matrix& b) {
  mfsda::Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      long double s = 0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += static_cast<long double>(a(i, k)) * b(k, j);
      out(i, j) = static_cast<double>(s);
    }
  return out;
}

inline mfsda::Matrix naive_transpose(const mfsda::Matrix& a) {
  mfsda::Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

// Gauss-Jordan inverse with partial pivoting in long double.
inline mfsda::Matrix explicit_inverse(const mfsda::Matrix& a) {
  const std::size_t k = a.rows();
  std::vector<std::vector<long double>> m(k, std::vector<long double>(2 * k, 0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) m[i][j] = a(i, j);
    m[i][k + i] = 1;
  }
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < k; ++r)
      if (std::fabs(m[r][c]) > std::fabs(m[piv][c])) piv = r;
    if (m[piv][c] == 0) throw std::runtime_error("singular");
    std::swap(m[piv], m[c]);
    const long double d = m[c][c];
    for (auto& v : m[c]) v /= d;
    for (std::size_t r = 0; r < k; ++r) {
      if (r == c || m[r][c] == 0) continue;
      const long double f = m[r][c];
      for (std::size_t j = 0; j < 2 * k; ++j) m[r][j] -= f * m[c][j];
    }
  }
  mfsda::Matrix inv(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) inv(i, j) = static_cast<double>(m[i][k + j]);
  return inv;
}

// L·Lᵀ for a random lower-triangular L with diagonal in [0.5, 1.5].
inline mfsda::Matrix random_spd(Rng& rng, std::size_t k) {
  std::normal_distribution<double> nd(0.0, 1.0);
  std::uniform_real_distribution<double> ud(0.5, 1.5);
  mfsda::Matrix l(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < i; ++j) l(i, j) = nd(rng) / std::sqrt(static_cast<double>(k));
    l(i, i) = ud(rng);
  }
  return naive_multiply(l, naive_transpose(l));
}

// Threshold by scanning every candidate t = |W_j| (W_j ≠ 0) with O(p) counts.
inline double brute_threshold(std::span<const double> w, double alpha, int offset) {
  double best = std::numeric_limits<double>::infinity();
  for (double c : w) {
    if (c == 0.0) continue;
    const double t = std::fabs(c);
    if (t >= best) continue;
    std::size_t neg = 0, pos = 0;
    for (double v : w) {
      if (v <= -t) ++neg;
      if (v >= t) ++pos;
    }
    if (static_cast<double>(offset + neg) / static_cast<double>(std::max<std::size_t>(pos, 1)) <= alpha) best = t;
  }
  return best;
}

inline double fdp_hat(std::span<const double> w, double t, int offset) {
  std::size_t neg = 0, pos = 0;
  for (double v : w) {
    if (v <= -t) ++neg;
    if (v >= t) ++pos;
  }
  return static_cast<double>(offset + neg) / static_cast<double>(std::max<std::size_t>(pos, 1));
}

// Sylvester-Hadamard matrix of order 2^k with ±1 entries.
inline mfsda::Matrix hadamard(std::size_t order) {
  mfsda::Matrix h(order, order);
  for (std::size_t i = 0; i < order; ++i)
    for (std::size_t j = 0; j < order; ++j) h(i, j) = (std::popcount(i & j) % 2 == 0) ? 1.0 : -1.0;
  return h;
}

inline double soft_threshold(double z, double g) {
  if (z > g) return z - g;
  if (z < -g) return z + g;
  return 0.0;
}

}  // namespace testsupport
