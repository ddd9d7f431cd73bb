#include <doctest.h>

#include <cmath>
#include <vector>

#include "mfsda/error.hpp"
#include "mfsda/linalg.hpp"
#include "support.hpp"

using namespace mfsda;
using testsupport::Rng;

namespace {

double max_abs(const Matrix& m) {
  double v = 0.0;
  for (double x : m.values()) v = std::max(v, std::fabs(x));
  return v;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an mfsda::Error");
  return ErrorCode::InternalContractViolation;
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("matrix construction rejects non-finite and ragged input") {
  CHECK_THROWS_AS(Matrix::from_rows({{1, 2}, {3}}), Error);
  CHECK_THROWS_AS(Matrix::from_rows({{1, std::nan("")}}), Error);
  const Matrix m = Matrix::from_rows({{1, 2, 3}, {4, 5, 6}});
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 3);
  CHECK(m(1, 2) == 6);
  CHECK(transpose(m)(2, 1) == 6);
}

TEST_CASE("center_columns examples") {
  const Matrix m = Matrix::from_rows({{1, 0, 1}, {2, 0, 1}, {3, 0, 4}});
  const auto c = linalg::center_columns(m);
  CHECK(c.means == std::vector<double>{2, 0, 2});
  CHECK(c.matrix.col(0)[0] == -1);
  CHECK(c.matrix.col(0)[1] == 0);
  CHECK(c.matrix.col(0)[2] == 1);
  for (double v : c.matrix.col(1)) CHECK(v == 0);
  CHECK(c.matrix(0, 2) == -1);
  CHECK(c.matrix(1, 2) == -1);
  CHECK(c.matrix(2, 2) == 2);
  CHECK(code_of([] { linalg::center_columns(Matrix::from_rows({{1, 2}})); }) == ErrorCode::DegenerateInput);
}

TEST_CASE("center_columns leaves zero means on fuzzed columns") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = testsupport::uniform_size(rng, 2, 200);
    Matrix m = testsupport::random_matrix(rng, n, 4, 1000.0);
    for (std::size_t r = 0; r < n; ++r) m(r, 3) += 1e6;
    const auto c = linalg::center_columns(m);
    for (std::size_t j = 0; j < 4; ++j) {
      double s = 0.0, scale = 0.0;
      for (double v : c.matrix.col(j)) s += v;
      for (double v : m.col(j)) scale = std::max(scale, std::fabs(v));
      CHECK(std::fabs(s / static_cast<double>(n)) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("spd_solve examples") {
  const Matrix b = Matrix::from_rows({{3, -1}, {7, 2}});
  CHECK(linalg::spd_solve(Matrix::identity(2), b) == b);
  const Matrix x1 = linalg::spd_solve(Matrix::from_rows({{2, 0}, {0, 4}}), Matrix::from_rows({{2}, {4}}));
  CHECK(x1(0, 0) == doctest::Approx(1.0));
  CHECK(x1(1, 0) == doctest::Approx(1.0));
  const Matrix x2 = linalg::spd_solve(Matrix::from_rows({{2, 1}, {1, 2}}), Matrix::from_rows({{3}, {3}}));
  CHECK(x2(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(x2(1, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(code_of([] { linalg::spd_solve(Matrix::from_rows({{1, 1}, {1, 1}}), Matrix(2, 1, 1.0)); }) ==
        ErrorCode::SingularGram);
  CHECK(code_of([] { linalg::spd_solve(Matrix::from_rows({{1, 2}, {2, 1}}), Matrix(2, 1, 1.0)); }) ==
        ErrorCode::SingularGram);
}

TEST_CASE("spd_inverse_diagonal examples") {
  CHECK(linalg::spd_inverse_diagonal(Matrix::identity(3)) == std::vector<double>{1, 1, 1});
  const auto d = linalg::spd_inverse_diagonal(Matrix::from_rows({{2, 0}, {0, 4}}));
  CHECK(d[0] == doctest::Approx(0.5));
  CHECK(d[1] == doctest::Approx(0.25));
  const auto e = linalg::spd_inverse_diagonal(Matrix::from_rows({{2, 1}, {1, 2}}));
  CHECK(e[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(e[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("SpdFactor reconstructs its input with a positive diagonal") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = testsupport::uniform_size(rng, 1, 30);
    const Matrix a = testsupport::random_spd(rng, k);
    const auto f = linalg::SpdFactor::factor(a);
    const Matrix& l = f.lower();
    for (std::size_t i = 0; i < k; ++i) {
      CHECK(l(i, i) > 0.0);
      for (std::size_t j = i + 1; j < k; ++j) CHECK(l(i, j) == 0.0);
    }
    const Matrix back = testsupport::naive_multiply(l, testsupport::naive_transpose(l));
    CHECK(max_abs_diff(back, a) <= 1e-10 * max_abs(a));
  }
}

TEST_CASE("spd_solve residual on 1000 fuzzed systems up to dimension 50") {
  Rng rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t k = testsupport::uniform_size(rng, 1, 50);
    const std::size_t m = testsupport::uniform_size(rng, 1, 4);
    const Matrix a = testsupport::random_spd(rng, k);
    const Matrix b = testsupport::random_matrix(rng, k, m, 10.0);
    const Matrix x = linalg::spd_solve(a, b);
    const Matrix r = testsupport::naive_multiply(a, x);
    REQUIRE(max_abs_diff(r, b) <= 1e-8 * (1.0 + norm_inf(b)));
  }
}

TEST_CASE("spd_inverse_diagonal matches an explicit inverse and stays positive") {
  Rng rng(9);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t k = testsupport::uniform_size(rng, 1, 25);
    const Matrix a = testsupport::random_spd(rng, k);
    const auto d = linalg::spd_inverse_diagonal(a);
    const Matrix inv = testsupport::explicit_inverse(a);
    for (std::size_t j = 0; j < k; ++j) {
      CHECK(d[j] > 0.0);
      CHECK(std::fabs(d[j] - inv(j, j)) <= 1e-9 * std::fabs(inv(j, j)));
    }
  }
}

TEST_CASE("multi_response_ols examples") {
  SUBCASE("orthonormal design") {
    // two orthonormal columns padded with a zero row so that n > q
    const Matrix x = Matrix::from_rows({{1, 0}, {0, 1}, {0, 0}});
    const Matrix f = Matrix::from_rows({{1}, {2}, {0}});
    const auto fit = linalg::multi_response_ols(x, f);
    CHECK(fit.coefficients(0, 0) == doctest::Approx(1.0));
    CHECK(fit.coefficients(1, 0) == doctest::Approx(2.0));
    CHECK(fit.inv_gram_diag[0] == doctest::Approx(1.0));
    CHECK(fit.inv_gram_diag[1] == doctest::Approx(1.0));
    CHECK(code_of([] { linalg::multi_response_ols(Matrix::identity(2), Matrix(2, 1, 1.0)); }) ==
          ErrorCode::InsufficientSamples);
  }
  SUBCASE("hand-solved normal equations") {
    const auto fit = linalg::multi_response_ols(Matrix::from_rows({{-1}, {0}, {1}}), Matrix::from_rows({{-2}, {0}, {2}}));
    CHECK(fit.coefficients(0, 0) == doctest::Approx(2.0));
    CHECK(fit.inv_gram_diag[0] == doctest::Approx(0.5));
  }
  SUBCASE("noiseless recovery") {
    Rng rng(13);
    const Matrix x = testsupport::random_matrix(rng, 30, 5);
    const Matrix b = testsupport::random_matrix(rng, 5, 3);
    const auto fit = linalg::multi_response_ols(x, testsupport::naive_multiply(x, b));
    CHECK(max_abs_diff(fit.coefficients, b) <= 1e-8);
  }
  SUBCASE("rank deficiency") {
    const Matrix x = Matrix::from_rows({{1, 2}, {2, 4}, {3, 6}, {4, 8}});
    CHECK(code_of([&] { linalg::multi_response_ols(x, Matrix(4, 1, 1.0)); }) == ErrorCode::SingularGram);
  }
}

TEST_CASE("multi_response_ols matches an explicit-inverse oracle on fuzzed inputs") {
  Rng rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = testsupport::uniform_size(rng, 2, 20);
    const std::size_t q = testsupport::uniform_size(rng, 1, n - 1);
    const std::size_t h = testsupport::uniform_size(rng, 1, 5);
    Matrix x = testsupport::random_matrix(rng, n, q);
    Matrix f = testsupport::random_matrix(rng, n, h);
    testsupport::center(x);
    testsupport::center(f);
    if (n - 1 <= q) continue;  // centering removes one rank
    const Matrix xt = testsupport::naive_transpose(x);
    Matrix inv;
    try {
      inv = testsupport::explicit_inverse(testsupport::naive_multiply(xt, x));
    } catch (const std::runtime_error&) {
      continue;
    }
    const Matrix expect = testsupport::naive_multiply(inv, testsupport::naive_multiply(xt, f));
    const auto fit = linalg::multi_response_ols(x, f);
    const double scale = std::max(1.0, max_abs(expect));
    CHECK(max_abs_diff(fit.coefficients, expect) <= 1e-8 * scale);
    for (std::size_t j = 0; j < q; ++j) CHECK(std::fabs(fit.inv_gram_diag[j] - inv(j, j)) <= 1e-8 * std::max(1.0, inv(j, j)));
    // residual orthogonality
    Matrix resid = f;
    const Matrix fitted = testsupport::naive_multiply(x, fit.coefficients);
    for (std::size_t c = 0; c < h; ++c)
      for (std::size_t r = 0; r < n; ++r) resid(r, c) -= fitted(r, c);
    CHECK(max_abs(testsupport::naive_multiply(xt, resid)) <= 1e-6 * std::max(1.0, max_abs(f) * max_abs(x) * n));
  }
}

}
