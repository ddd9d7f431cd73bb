#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mfsda/matrix.hpp"

namespace mfsda::lasso {

// Solves  min_β n⁻¹‖f − Xβ‖² + λ‖β‖₁  by cyclic coordinate descent.
struct LassoFit {
  std::vector<double> coefficients;
  double lambda = 0.0;
  std::size_t iterations = 0;  // coordinate passes
  bool converged = false;
};

struct ScreenConfig {
  std::size_t folds = 5;
  std::size_t path_length = 50;
  std::size_t cap = 0;  // 0: ⌊n/3⌋ of the screening split

  void validate() const;
  std::size_t effective_cap(std::size_t n) const;
};

inline constexpr double kCoefficientTolerance = 1e-7;
inline constexpr std::size_t kMaxIterations = 100000;
inline constexpr double kGridRatio = 1e-3;
// Cross-validation stops descending the grid once a fold's training fit
// explains this share of the response variance (smaller λ only interpolates
// noise), or after kCvPatience grid points without a new CV minimum.
inline constexpr double kSaturationR2 = 0.999;
inline constexpr std::size_t kCvPatience = 10;

// 2·n⁻¹·‖Xᵀf‖∞, the smallest λ with an all-zero solution.
double lambda_max(const Matrix& x, std::span<const double> f);

// path_length log-spaced values from lmax down to kGridRatio·lmax.
std::vector<double> lambda_grid(double lmax, std::size_t path_length);

// Largest KKT residual of `fit`:
//   active j:   |2n⁻¹xⱼᵀr − λ·sign(βⱼ)|
//   inactive j: max(0, 2n⁻¹|xⱼᵀr| − λ)
double kkt_violation(const Matrix& x, std::span<const double> f, const LassoFit& fit);

// Warm-started solver over a fixed design. Holds a reference to `x`; the
// matrix must outlive the solver.
class PathSolver {
 public:
  PathSolver(const Matrix& x, std::span<const double> f);

  // Continues from the current coefficients (zero on construction).
  LassoFit solve(double lambda);

  const std::vector<double>& coefficients() const noexcept { return beta_; }
  const std::vector<double>& residual() const noexcept { return resid_; }
  double residual_sum_squares() const;
  double lambda_max() const noexcept { return lambda_max_; }

 private:
  double update(std::size_t j, double half_lambda);
  double gradient(std::size_t j) const;

  const Matrix& x_;
  std::size_t n_;
  std::vector<double> col_sq_;  // ‖xⱼ‖²/n
  std::vector<double> beta_;
  std::vector<double> resid_;
  double lambda_max_;
  double last_lambda_;
};

LassoFit lasso_fit(const Matrix& x, std::span<const double> f, double lambda);

struct CvResult {
  double lambda = 0.0;
  std::size_t index = 0;        // into grid
  std::vector<double> grid;
  std::vector<double> cv_error;  // mean held-out MSE per visited grid point
};

// Seeded K-fold CV over lambda_grid(lambda_max(x, f)). Needs n ≥ folds.
CvResult cross_validate(const Matrix& x, std::span<const double> f, const ScreenConfig& cfg,
                        std::uint64_t seed);
double cv_lambda(const Matrix& x, std::span<const double> f, const ScreenConfig& cfg, std::uint64_t seed);

struct Screening {
  std::vector<std::size_t> support;  // ascending, 0-based
  Matrix coefficients;               // p×H, original covariate scale
  std::vector<double> lambdas;       // chosen λ_h on the standardized scale
};

// Union over the H columns of F of the CV-tuned LASSO supports, trimmed to
// the cap by max_h |β̂_hj| (ties to the lower index).
Screening screen_support(const Matrix& x, const Matrix& f, const ScreenConfig& cfg, std::uint64_t seed);

// Trims `support` to the `cap` features with largest max_h |coef(j,h)|.
std::vector<std::size_t> cap_support(std::vector<std::size_t> support, const Matrix& coefficients,
                                     std::size_t cap);

}  // namespace mfsda::lasso
