#include "mfsda/lasso.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <random>
#include <string>

#include "mfsda/error.hpp"
#include "mfsda/kernels.hpp"
#include "mfsda/linalg.hpp"

namespace mfsda::lasso {
namespace {

double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

std::vector<double> centered_copy(std::span<const double> f) {
  std::vector<double> out(f.begin(), f.end());
  const double mean = kernels::sum(out) / static_cast<double>(out.size());
  kernels::add_scalar(-mean, out);
  return out;
}

}  // namespace

void ScreenConfig::validate() const {
  if (folds < 2) throw Error(ErrorCode::InvalidConfig, "cross-validation needs at least 2 folds");
  if (path_length < 2) throw Error(ErrorCode::InvalidConfig, "lambda grid needs at least 2 points");
}

std::size_t ScreenConfig::effective_cap(std::size_t n) const {
  if (cap > 0) return cap;
  return std::max<std::size_t>(1, n / 3);
}

double lambda_max(const Matrix& x, std::span<const double> f) {
  const double n = static_cast<double>(x.rows());
  double best = 0.0;
  for (std::size_t j = 0; j < x.cols(); ++j) best = std::max(best, std::abs(kernels::dot(x.col(j), f)));
  return 2.0 * best / n;
}

std::vector<double> lambda_grid(double lmax, std::size_t path_length) {
  if (path_length < 2) throw Error(ErrorCode::InvalidConfig, "lambda grid needs at least 2 points");
  std::vector<double> grid(path_length);
  const double log_ratio = std::log(kGridRatio);
  for (std::size_t k = 0; k < path_length; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(path_length - 1);
    grid[k] = lmax * std::exp(t * log_ratio);
  }
  grid.front() = lmax;
  grid.back() = lmax * kGridRatio;
  return grid;
}

double kkt_violation(const Matrix& x, std::span<const double> f, const LassoFit& fit) {
  const std::size_t n = x.rows();
  std::vector<double> r(f.begin(), f.end());
  for (std::size_t j = 0; j < x.cols(); ++j) {
    if (fit.coefficients[j] != 0.0) kernels::axpy(-fit.coefficients[j], x.col(j), r);
  }
  double worst = 0.0;
  for (std::size_t j = 0; j < x.cols(); ++j) {
    const double g = 2.0 * kernels::dot(x.col(j), r) / static_cast<double>(n);
    const double b = fit.coefficients[j];
    const double v = b != 0.0 ? std::abs(g - fit.lambda * (b > 0 ? 1.0 : -1.0))
                              : std::max(0.0, std::abs(g) - fit.lambda);
    worst = std::max(worst, v);
  }
  return worst;
}

PathSolver::PathSolver(const Matrix& x, std::span<const double> f)
    : x_(x),
      n_(x.rows()),
      col_sq_(x.cols()),
      beta_(x.cols(), 0.0),
      resid_(f.begin(), f.end()),
      lambda_max_(0.0),
      last_lambda_(0.0) {
  if (f.size() != n_) throw Error(ErrorCode::InternalContractViolation, "lasso: response length differs from rows");
  if (n_ < 2) throw Error(ErrorCode::InsufficientSamples, "lasso needs at least 2 observations");
  const double inv_n = 1.0 / static_cast<double>(n_);
  for (std::size_t j = 0; j < x.cols(); ++j) {
    auto c = x.col(j);
    col_sq_[j] = kernels::dot(c, c) * inv_n;
  }
  lambda_max_ = mfsda::lasso::lambda_max(x, f);
  last_lambda_ = lambda_max_;
}

double PathSolver::residual_sum_squares() const { return kernels::dot(resid_, resid_); }

double PathSolver::gradient(std::size_t j) const {
  return kernels::dot(x_.col(j), resid_) / static_cast<double>(n_);
}

double PathSolver::update(std::size_t j, double half_lambda) {
  const double c = col_sq_[j];
  if (c == 0.0) return 0.0;
  const double old = beta_[j];
  const double z = gradient(j) + c * old;
  const double next = soft_threshold(z, half_lambda) / c;
  const double delta = next - old;
  if (delta != 0.0) {
    kernels::axpy(-delta, x_.col(j), resid_);
    beta_[j] = next;
  }
  return std::abs(delta);
}

LassoFit PathSolver::solve(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::InvalidConfig, "lasso penalty must be finite and non-negative");
  }
  const std::size_t p = beta_.size();
  const double half = 0.5 * lambda;

  // Sequential strong rule: keep j when 2|gⱼ| ≥ 2λ − λ_prev. Discarded
  // coordinates are re-checked against the KKT conditions before returning.
  std::vector<char> in_strong(p, 0);
  std::vector<std::size_t> strong;
  const double cutoff = 2.0 * lambda - last_lambda_;
  for (std::size_t j = 0; j < p; ++j) {
    if (col_sq_[j] == 0.0) continue;
    if (beta_[j] != 0.0 || cutoff <= 0.0 || 2.0 * std::abs(gradient(j)) >= cutoff) {
      in_strong[j] = 1;
      strong.push_back(j);
    }
  }

  std::size_t iterations = 0;
  bool converged = false;
  std::vector<std::size_t> active;
  while (iterations < kMaxIterations) {
    double dmax = 0.0;
    for (std::size_t j : strong) dmax = std::max(dmax, update(j, half));
    ++iterations;
    if (dmax <= kCoefficientTolerance) {
      bool added = false;
      for (std::size_t j = 0; j < p; ++j) {
        if (in_strong[j] || col_sq_[j] == 0.0) continue;
        if (2.0 * std::abs(gradient(j)) > lambda) {
          in_strong[j] = 1;
          added = true;
        }
      }
      if (!added) {
        converged = true;
        break;
      }
      strong.clear();
      for (std::size_t j = 0; j < p; ++j)
        if (in_strong[j]) strong.push_back(j);
      continue;
    }
    active.clear();
    for (std::size_t j : strong)
      if (beta_[j] != 0.0) active.push_back(j);
    while (iterations < kMaxIterations) {
      double amax = 0.0;
      for (std::size_t j : active) amax = std::max(amax, update(j, half));
      ++iterations;
      if (amax <= kCoefficientTolerance) break;
    }
  }
  last_lambda_ = lambda;
  return LassoFit{beta_, lambda, iterations, converged};
}

LassoFit lasso_fit(const Matrix& x, std::span<const double> f, double lambda) {
  PathSolver solver(x, f);
  return solver.solve(lambda);
}

CvResult cross_validate(const Matrix& x, std::span<const double> f, const ScreenConfig& cfg,
                        std::uint64_t seed) {
  cfg.validate();
  const std::size_t n = x.rows();
  if (n < cfg.folds) {
    throw Error(ErrorCode::InsufficientSamples,
                "cross-validation needs n >= folds (n=" + std::to_string(n) + ", folds=" + std::to_string(cfg.folds) + ")");
  }
  CvResult out;
  out.grid = lambda_grid(lambda_max(x, f), cfg.path_length);
  if (out.grid.front() == 0.0) {
    // Xᵀf = 0: every penalty gives the empty model.
    out.cv_error.assign(1, 0.0);
    return out;
  }

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::size_t> fold_of(n);
  for (std::size_t i = 0; i < n; ++i) fold_of[perm[i]] = i % cfg.folds;

  struct Fold {
    Matrix xtr, xte;
    std::vector<double> ftr, fte, pred;
    double tss = 0.0;
    std::unique_ptr<PathSolver> solver;
  };
  std::vector<Fold> folds(cfg.folds);
  std::vector<std::size_t> train, test;
  for (std::size_t k = 0; k < cfg.folds; ++k) {
    train.clear();
    test.clear();
    for (std::size_t i = 0; i < n; ++i) (fold_of[i] == k ? test : train).push_back(i);
    Fold& fd = folds[k];
    fd.xtr = select_rows(x, train);
    const std::vector<double> means = linalg::center_columns_inplace(fd.xtr);
    fd.ftr.resize(train.size());
    for (std::size_t i = 0; i < train.size(); ++i) fd.ftr[i] = f[train[i]];
    const double fmean = kernels::sum(fd.ftr) / static_cast<double>(fd.ftr.size());
    kernels::add_scalar(-fmean, fd.ftr);
    fd.tss = kernels::dot(fd.ftr, fd.ftr);
    fd.xte = select_rows(x, test);
    for (std::size_t j = 0; j < fd.xte.cols(); ++j) kernels::add_scalar(-means[j], fd.xte.col(j));
    fd.fte.resize(test.size());
    for (std::size_t i = 0; i < test.size(); ++i) fd.fte[i] = f[test[i]] - fmean;
    fd.pred.resize(test.size());
    fd.solver = std::make_unique<PathSolver>(fd.xtr, fd.ftr);
  }

  // All folds descend the grid together so the walk can stop early: once
  // every fold's training fit saturates, or once kCvPatience consecutive grid
  // points fail to improve on the best mean held-out error.
  std::size_t best = 0;
  for (std::size_t k = 0; k < out.grid.size(); ++k) {
    double err = 0.0;
    bool saturated = false;
    for (Fold& fd : folds) {
      const LassoFit fit = fd.solver->solve(out.grid[k]);
      std::copy(fd.fte.begin(), fd.fte.end(), fd.pred.begin());
      for (std::size_t j = 0; j < fit.coefficients.size(); ++j) {
        if (fit.coefficients[j] != 0.0) kernels::axpy(-fit.coefficients[j], fd.xte.col(j), fd.pred);
      }
      err += kernels::dot(fd.pred, fd.pred) / static_cast<double>(fd.pred.size());
      if (fd.tss > 0.0 && 1.0 - fd.solver->residual_sum_squares() / fd.tss >= kSaturationR2) saturated = true;
    }
    out.cv_error.push_back(err / static_cast<double>(cfg.folds));
    if (out.cv_error[k] < out.cv_error[best]) best = k;
    if (saturated || k - best >= kCvPatience) break;
  }
  // strict < above keeps the first minimum, i.e. the largest λ among ties
  out.index = best;
  out.lambda = out.grid[out.index];
  return out;
}

double cv_lambda(const Matrix& x, std::span<const double> f, const ScreenConfig& cfg, std::uint64_t seed) {
  return cross_validate(x, f, cfg, seed).lambda;
}

std::vector<std::size_t> cap_support(std::vector<std::size_t> support, const Matrix& coefficients,
                                     std::size_t cap) {
  if (support.size() <= cap) return support;
  auto strength = [&](std::size_t j) {
    double m = 0.0;
    for (std::size_t h = 0; h < coefficients.cols(); ++h) m = std::max(m, std::abs(coefficients(j, h)));
    return m;
  };
  std::vector<std::pair<double, std::size_t>> ranked;
  ranked.reserve(support.size());
  for (std::size_t j : support) ranked.emplace_back(strength(j), j);
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<std::size_t> kept;
  kept.reserve(cap);
  for (std::size_t k = 0; k < cap; ++k) kept.push_back(ranked[k].second);
  std::sort(kept.begin(), kept.end());
  return kept;
}

Screening screen_support(const Matrix& x, const Matrix& f, const ScreenConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  if (x.rows() != f.rows()) {
    throw Error(ErrorCode::InternalContractViolation, "screen_support: X and F row counts differ");
  }
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();

  // Fit on unit-variance columns, report on the original scale.
  Matrix xs = x;
  linalg::center_columns_inplace(xs);
  std::vector<double> sd(p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    auto c = xs.col(j);
    sd[j] = std::sqrt(kernels::dot(c, c) / static_cast<double>(n - 1));
    kernels::scale(sd[j] > 0.0 ? 1.0 / sd[j] : 0.0, c);
  }

  Screening out;
  out.coefficients = Matrix(p, f.cols());
  out.lambdas.assign(f.cols(), 0.0);
  for (std::size_t h = 0; h < f.cols(); ++h) {
    const std::vector<double> fh = centered_copy(f.col(h));
    const CvResult cv = cross_validate(xs, fh, cfg, seed);
    out.lambdas[h] = cv.lambda;
    if (cv.grid.front() == 0.0) continue;
    PathSolver solver(xs, fh);
    for (std::size_t k = 0; k <= cv.index; ++k) solver.solve(cv.grid[k]);
    const auto& beta = solver.coefficients();
    for (std::size_t j = 0; j < p; ++j) {
      if (beta[j] != 0.0) out.coefficients(j, h) = beta[j] / sd[j];
    }
  }

  std::vector<std::size_t> support;
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t h = 0; h < f.cols(); ++h) {
      if (out.coefficients(j, h) != 0.0) {
        support.push_back(j);
        break;
      }
    }
  }
  out.support = cap_support(std::move(support), out.coefficients, cfg.effective_cap(n));
  return out;
}

}  // namespace mfsda::lasso
