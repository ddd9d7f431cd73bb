#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mfsda/dataset.hpp"
#include "mfsda/lasso.hpp"
#include "mfsda/matrix.hpp"
#include "mfsda/transforms.hpp"

namespace mfsda::selector {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Mode { Auto, LowDim, HighDim };
enum class Rule { Auto, L, LPlus };

std::string_view to_string(Mode m);
std::string_view to_string(Rule r);
Mode parse_mode(std::string_view s);  // auto|lowdim|highdim
Rule parse_rule(std::string_view s);  // auto|l|lplus

struct SplitPair {
  Dataset first;
  Dataset second;
  std::vector<std::size_t> first_rows;   // ascending indices into the input
  std::vector<std::size_t> second_rows;
  std::uint64_t seed = 0;
};

// Seeded random halving; with an odd row count the extra row goes to `first`.
SplitPair split_data(const Dataset& d, std::uint64_t seed);

// Coefficient estimates and scale factors s_kj for one split.
struct SplitFit {
  Matrix coefficients;                // |features|×H
  std::vector<double> scales;         // s_kj > 0
  std::vector<std::size_t> features;  // 0-based columns of the full design
};

// Least squares of the centered transformed responses on all columns.
SplitFit fit_split(const Dataset& d, const transforms::TransformSpec& spec);
// Same, restricted to `features`.
SplitFit fit_split(const Dataset& d, const transforms::TransformSpec& spec,
                   std::span<const std::size_t> features);
// Scales s_kj for `features` from the centered restricted Gram of `x`.
std::vector<double> restricted_scales(const Matrix& x, std::span<const std::size_t> features);

struct RankingStats {
  std::vector<double> w;               // length p, zero off `screened`
  std::vector<std::size_t> screened;   // 0-based
};

// W_j = B̂₁ⱼᵀB̂₂ⱼ / (s₁ⱼ s₂ⱼ) on the shared feature set, zero elsewhere.
RankingStats ranking_statistics(const SplitFit& fit1, const SplitFit& fit2, std::size_t p);

// Smallest t among the nonzero |W_j| with
//   (offset + #{W_j ≤ −t}) / max(#{W_j ≥ t}, 1) ≤ alpha,
// offset 0 for L and 1 for L₊; +∞ when none qualifies.
double threshold_L(std::span<const double> w, double alpha);
double threshold_Lplus(std::span<const double> w, double alpha);
double threshold(std::span<const double> w, double alpha, Rule rule);

// {j : W_j ≥ t}, 0-based.
std::vector<std::size_t> select_at(std::span<const double> w, double t);

void validate_alpha(double alpha);

struct Seeds {
  std::uint64_t split = 0;
  std::uint64_t screen = 0;
};

struct RunOptions {
  transforms::TransformSpec transform;
  double alpha = 0.2;
  Mode mode = Mode::Auto;
  Rule rule = Rule::Auto;
  Seeds seeds;
  lasso::ScreenConfig screen;
};

struct Diagnostics {
  std::size_t n_total = 0;
  std::size_t n_first = 0;
  std::size_t n_second = 0;
  std::size_t p = 0;
  std::size_t screened = 0;
  std::vector<double> lambdas;  // high-dim only
  double split_ms = 0.0;
  double fit_ms = 0.0;
  double threshold_ms = 0.0;
  double total_ms = 0.0;
  std::string kernels;
};

struct SelectionResult {
  double threshold = kInfinity;
  std::vector<std::size_t> selected;  // 0-based, ascending
  RankingStats stats;
  double alpha = 0.2;
  Mode mode = Mode::LowDim;  // resolved
  Rule rule = Rule::L;       // resolved
  Diagnostics diagnostics;
};

Mode resolve_mode(Mode requested, std::size_t p, std::size_t n_second);
Rule resolve_rule(Rule requested, Mode resolved);

// Split, fit both halves, form W, threshold, select. Errors are rethrown
// tagged with the pipeline stage that raised them.
SelectionResult run_mfsda(const Dataset& d, const RunOptions& opt);

}  // namespace mfsda::selector
