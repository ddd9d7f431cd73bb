#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "mfsda/error.hpp"
#include "mfsda/lasso.hpp"
#include "mfsda/linalg.hpp"
#include "support.hpp"

using namespace mfsda;
using namespace mfsda::lasso;
using testsupport::Rng;

namespace {

// Columns 1..p of a Hadamard matrix of order n: centered, XᵀX = n·I.
Matrix orthonormal_design(std::size_t n, std::size_t p) {
  const Matrix h = testsupport::hadamard(n);
  std::vector<std::size_t> cols(p);
  std::iota(cols.begin(), cols.end(), std::size_t{1});
  return select_cols(h, cols);
}

std::vector<double> multiply_vec(const Matrix& x, std::span<const double> b) {
  std::vector<double> out(x.rows(), 0.0);
  for (std::size_t j = 0; j < x.cols(); ++j)
    for (std::size_t i = 0; i < x.rows(); ++i) out[i] += x(i, j) * b[j];
  return out;
}

// KKT residual recomputed here from the definition.
double oracle_kkt(const Matrix& x, std::span<const double> f, const LassoFit& fit) {
  const std::size_t n = x.rows();
  std::vector<double> r(f.begin(), f.end());
  const auto xb = multiply_vec(x, fit.coefficients);
  for (std::size_t i = 0; i < n; ++i) r[i] -= xb[i];
  double worst = 0.0;
  for (std::size_t j = 0; j < x.cols(); ++j) {
    long double g = 0;
    for (std::size_t i = 0; i < n; ++i) g += static_cast<long double>(x(i, j)) * r[i];
    const double grad = 2.0 * static_cast<double>(g) / static_cast<double>(n);
    const double b = fit.coefficients[j];
    const double v = b != 0.0 ? std::fabs(grad - fit.lambda * (b > 0 ? 1.0 : -1.0))
                              : std::max(0.0, std::fabs(grad) - fit.lambda);
    worst = std::max(worst, v);
  }
  return worst;
}

double oracle_lambda_max(const Matrix& x, std::span<const double> f) {
  double m = 0.0;
  for (std::size_t j = 0; j < x.cols(); ++j) {
    long double g = 0;
    for (std::size_t i = 0; i < x.rows(); ++i) g += static_cast<long double>(x(i, j)) * f[i];
    m = std::max(m, std::fabs(static_cast<double>(g)));
  }
  return 2.0 * m / static_cast<double>(x.rows());
}

std::vector<double> centered(std::vector<double> v) {
  const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  for (double& x : v) x -= m;
  return v;
}

}  // namespace

TEST_SUITE("lasso") {

TEST_CASE("config validation") {
  ScreenConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.effective_cap(300) == 100);
  CHECK(c.effective_cap(2) == 1);
  c.folds = 1;
  CHECK_THROWS_AS(c.validate(), Error);
  c = ScreenConfig{};
  c.path_length = 1;
  CHECK_THROWS_AS(c.validate(), Error);
  c = ScreenConfig{};
  c.cap = 7;
  CHECK(c.effective_cap(300) == 7);
}

TEST_CASE("lambda grid is log-spaced from lambda_max down by 1e-3") {
  const auto g = lambda_grid(2.0, 50);
  REQUIRE(g.size() == 50);
  CHECK(g.front() == doctest::Approx(2.0));
  CHECK(g.back() == doctest::Approx(2e-3));
  for (std::size_t k = 1; k < g.size(); ++k) CHECK(g[k] / g[k - 1] == doctest::Approx(std::pow(1e-3, 1.0 / 49)));
}

TEST_CASE("lambda at or above lambda_max gives exactly zero") {
  Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    Matrix x = testsupport::random_matrix(rng, 40, 15);
    testsupport::center(x);
    const auto f = centered(testsupport::random_vector(rng, 40));
    const double lmax = lambda_max(x, f);
    CHECK(lmax == doctest::Approx(oracle_lambda_max(x, f)).epsilon(1e-12));
    for (double mult : {1.0, 1.5, 10.0}) {
      const auto fit = lasso_fit(x, f, lmax * mult);
      CHECK(std::all_of(fit.coefficients.begin(), fit.coefficients.end(), [](double b) { return b == 0.0; }));
    }
  }
}

TEST_CASE("orthonormal design matches the soft-threshold closed form") {
  const std::size_t n = 16, p = 8;
  const Matrix x = orthonormal_design(n, p);
  Rng rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = centered(testsupport::random_vector(rng, n, 2.0));
    const double lmax = oracle_lambda_max(x, f);
    for (double frac : {0.9, 0.5, 0.2, 0.01}) {
      const double lambda = frac * lmax;
      const auto fit = lasso_fit(x, f, lambda);
      for (std::size_t j = 0; j < p; ++j) {
        double z = 0.0;
        for (std::size_t i = 0; i < n; ++i) z += x(i, j) * f[i];
        z /= static_cast<double>(n);
        CHECK(fit.coefficients[j] == doctest::Approx(testsupport::soft_threshold(z, lambda / 2)).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("rescaling a column moves its coefficient as the closed form predicts") {
  // with column j scaled by c: beta_j = soft(c·z_j, λ/2) / c²
  const std::size_t n = 16, p = 6;
  Rng rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix x = orthonormal_design(n, p);
    const double c = 0.3 + 0.4 * trial;
    for (double& v : x.col(2)) v *= c;
    const auto f = centered(testsupport::random_vector(rng, n, 2.0));
    const double lambda = 0.3 * oracle_lambda_max(x, f);
    const auto fit = lasso_fit(x, f, lambda);
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i) z += x(i, 2) / c * f[i];
    z /= static_cast<double>(n);
    CHECK(fit.coefficients[2] == doctest::Approx(testsupport::soft_threshold(c * z, lambda / 2) / (c * c)).epsilon(1e-8));
  }
}

TEST_CASE("lambda = 0 reproduces least squares") {
  Rng rng(53);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = testsupport::uniform_size(rng, 30, 80);
    const std::size_t p = testsupport::uniform_size(rng, 1, 10);
    Matrix x = testsupport::random_matrix(rng, n, p);
    testsupport::center(x);
    const auto f = centered(testsupport::random_vector(rng, n));
    const auto fit = lasso_fit(x, f, 0.0);
    const auto ols = linalg::multi_response_ols(x, Matrix::column(f));
    for (std::size_t j = 0; j < p; ++j) CHECK(std::fabs(fit.coefficients[j] - ols.coefficients(j, 0)) <= 1e-6);
  }
}

TEST_CASE("KKT conditions hold on fuzzed problems") {
  Rng rng(59);
  std::size_t checked = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = testsupport::uniform_size(rng, 5, 100);
    const std::size_t p = testsupport::uniform_size(rng, 1, 200);
    Matrix x = testsupport::random_matrix(rng, n, p);
    testsupport::center(x);
    auto f = testsupport::random_vector(rng, n);
    for (std::size_t j = 0; j < std::min<std::size_t>(p, 3); ++j)
      for (std::size_t i = 0; i < n; ++i) f[i] += x(i, j);
    f = centered(f);
    const double lmax = oracle_lambda_max(x, f);
    const double lambda = lmax * std::pow(10.0, -3.0 * std::uniform_real_distribution<double>(0, 1)(rng));
    const auto fit = lasso_fit(x, f, lambda);
    if (!fit.converged) continue;
    ++checked;
    CHECK(oracle_kkt(x, f, fit) <= 1e-4 * lmax);
    CHECK(kkt_violation(x, f, fit) <= 1e-4 * lmax);
  }
  CHECK(checked >= 450);
}

TEST_CASE("support size is non-increasing in lambda along the grid") {
  Rng rng(61);
  std::size_t violations = 0, steps = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = testsupport::uniform_size(rng, 40, 100);
    const std::size_t p = testsupport::uniform_size(rng, 2, 15);
    Matrix x = testsupport::random_matrix(rng, n, p);
    testsupport::center(x);
    auto f = testsupport::random_vector(rng, n);
    for (std::size_t i = 0; i < n; ++i) f[i] += 2 * x(i, 0) - x(i, p - 1);
    f = centered(f);
    PathSolver solver(x, f);
    std::size_t prev = 0;
    for (double lambda : lambda_grid(solver.lambda_max(), 30)) {
      const auto fit = solver.solve(lambda);
      const auto nz = static_cast<std::size_t>(std::count_if(fit.coefficients.begin(), fit.coefficients.end(),
                                                             [](double b) { return std::fabs(b) > 1e-8; }));
      if (nz < prev) ++violations;
      prev = nz;
      ++steps;
    }
  }
  CHECK(violations == 0);
  CHECK(steps == 3000);
}

TEST_CASE("warm-started path agrees with cold fits") {
  Rng rng(67);
  Matrix x = testsupport::random_matrix(rng, 60, 120);
  testsupport::center(x);
  auto f = testsupport::random_vector(rng, 60);
  for (std::size_t i = 0; i < 60; ++i) f[i] += 3 * x(i, 5) - 2 * x(i, 9);
  f = centered(f);
  auto objective = [&](const LassoFit& fit) {
    const auto xb = multiply_vec(x, fit.coefficients);
    double rss = 0.0, l1 = 0.0;
    for (std::size_t i = 0; i < 60; ++i) rss += (f[i] - xb[i]) * (f[i] - xb[i]);
    for (double b : fit.coefficients) l1 += std::fabs(b);
    return rss / 60.0 + fit.lambda * l1;
  };
  // p > n: coefficients are ill-conditioned near interpolation, the objective is not
  PathSolver solver(x, f);
  for (double lambda : lambda_grid(solver.lambda_max(), 20)) {
    const auto warm = solver.solve(lambda);
    const auto cold = lasso_fit(x, f, lambda);
    CHECK(objective(warm) == doctest::Approx(objective(cold)).epsilon(1e-8));
  }
}

TEST_CASE("cross-validation picks a large lambda on pure noise") {
  std::size_t top_quartile = 0;
  ScreenConfig cfg;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(1000 + seed);
    Matrix x = testsupport::random_matrix(rng, 100, 30);
    testsupport::center(x);
    const auto f = centered(testsupport::random_vector(rng, 100));
    const auto cv = cross_validate(x, f, cfg, seed);
    if (cv.index < cfg.path_length / 4) ++top_quartile;
    CHECK(cv.lambda == cv.grid[cv.index]);
    CHECK(cv_lambda(x, f, cfg, seed) == cv.lambda);
  }
  CHECK(top_quartile >= 80);
}

TEST_CASE("cross-validation beats the null model on a strong signal") {
  Rng rng(71);
  Matrix x = testsupport::random_matrix(rng, 80, 20);
  testsupport::center(x);
  std::vector<double> b(20, 0.0);
  b[0] = 3;
  b[4] = -2;
  b[7] = 1.5;
  const auto f = centered(multiply_vec(x, b));
  const auto cv = cross_validate(x, f, ScreenConfig{}, 5);
  CHECK(cv.index > 0);
  CHECK(cv.cv_error[cv.index] < cv.cv_error[0]);
}

TEST_CASE("cross-validation with as many folds as rows is leave-one-out") {
  Rng rng(73);
  Matrix x = testsupport::random_matrix(rng, 5, 3);
  testsupport::center(x);
  const auto f = centered(testsupport::random_vector(rng, 5));
  ScreenConfig cfg;
  const auto cv = cross_validate(x, f, cfg, 1);
  CHECK(cv.lambda > 0.0);
  CHECK(!cv.cv_error.empty());
  cfg.folds = 6;
  CHECK_THROWS_AS(cross_validate(x, f, cfg, 1), Error);
}

TEST_CASE("cross-validation is deterministic given the seed") {
  Rng rng(79);
  Matrix x = testsupport::random_matrix(rng, 60, 40);
  testsupport::center(x);
  auto f = testsupport::random_vector(rng, 60);
  for (std::size_t i = 0; i < 60; ++i) f[i] += x(i, 0);
  f = centered(f);
  const auto a = cross_validate(x, f, ScreenConfig{}, 99);
  const auto b = cross_validate(x, f, ScreenConfig{}, 99);
  CHECK(a.cv_error == b.cv_error);
  CHECK(a.index == b.index);
}

TEST_CASE("screen_support examples") {
  const std::size_t n = 32;
  const Matrix x = orthonormal_design(n, 10);
  SUBCASE("all-zero responses give an empty set") {
    const auto s = screen_support(x, Matrix(n, 3, 0.0), ScreenConfig{}, 1);
    CHECK(s.support.empty());
  }
  SUBCASE("supports {1,2} and {2,3} union to {1,2,3}") {
    Matrix f(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
      f(i, 0) = x(i, 0) + x(i, 1);
      f(i, 1) = x(i, 1) - x(i, 2);
    }
    const auto s = screen_support(x, f, ScreenConfig{}, 1);
    CHECK(s.support == std::vector<std::size_t>{0, 1, 2});
    CHECK(s.lambdas.size() == 2);
    CHECK(s.coefficients.rows() == 10);
    CHECK(s.coefficients.cols() == 2);
  }
  SUBCASE("cap keeps the largest coefficients") {
    const std::size_t m = 64;
    const Matrix big = orthonormal_design(m, 40);
    Matrix f(m, 1);
    // coefficient of column j is (j + 1), so the top ten are columns 30..39
    for (std::size_t j = 0; j < 40; ++j)
      for (std::size_t i = 0; i < m; ++i) f(i, 0) += static_cast<double>(j + 1) * big(i, j);
    ScreenConfig cfg;
    cfg.cap = 10;
    const auto s = screen_support(big, f, cfg, 3);
    std::vector<std::size_t> expect(10);
    std::iota(expect.begin(), expect.end(), std::size_t{30});
    CHECK(s.support == expect);
  }
}

TEST_CASE("cap_support orders by max_h |beta| with ties to the lower index") {
  Matrix coef(6, 2, 0.0);
  coef(0, 0) = 1.0;
  coef(1, 1) = -3.0;
  coef(2, 0) = 2.0;
  coef(3, 1) = 2.0;
  coef(4, 0) = 0.5;
  coef(5, 0) = -2.0;
  CHECK(cap_support({0, 1, 2, 3, 4, 5}, coef, 3) == std::vector<std::size_t>{1, 2, 3});
  CHECK(cap_support({0, 1, 2, 3, 4, 5}, coef, 10) == std::vector<std::size_t>{0, 1, 2, 3, 4, 5});
  CHECK(cap_support({0, 4}, coef, 1) == std::vector<std::size_t>{0});
}

}
