#include "mfsda/selector.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "mfsda/error.hpp"
#include "mfsda/kernels.hpp"
#include "mfsda/linalg.hpp"

namespace mfsda::selector {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

template <class F>
auto staged(const char* stage, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw e.with_stage(stage);
  }
}

}  // namespace

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::Auto: return "auto";
    case Mode::LowDim: return "lowdim";
    case Mode::HighDim: return "highdim";
  }
  return "unknown";
}

std::string_view to_string(Rule r) {
  switch (r) {
    case Rule::Auto: return "auto";
    case Rule::L: return "L";
    case Rule::LPlus: return "Lplus";
  }
  return "unknown";
}

Mode parse_mode(std::string_view s) {
  if (s == "auto") return Mode::Auto;
  if (s == "lowdim") return Mode::LowDim;
  if (s == "highdim") return Mode::HighDim;
  throw Error(ErrorCode::InvalidConfig, "unknown mode '" + std::string(s) + "'");
}

Rule parse_rule(std::string_view s) {
  if (s == "auto") return Rule::Auto;
  if (s == "l" || s == "L") return Rule::L;
  if (s == "lplus" || s == "Lplus") return Rule::LPlus;
  throw Error(ErrorCode::InvalidConfig, "unknown threshold rule '" + std::string(s) + "'");
}

SplitPair split_data(const Dataset& d, std::uint64_t seed) {
  d.validate();
  const std::size_t n = d.n();
  if (n < 4) throw Error(ErrorCode::InsufficientSamples, "data splitting needs at least 4 rows");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  const std::size_t n1 = (n + 1) / 2;
  SplitPair out;
  out.seed = seed;
  out.first_rows.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n1));
  out.second_rows.assign(perm.begin() + static_cast<std::ptrdiff_t>(n1), perm.end());
  std::sort(out.first_rows.begin(), out.first_rows.end());
  std::sort(out.second_rows.begin(), out.second_rows.end());
  out.first = d.subset(out.first_rows);
  out.second = d.subset(out.second_rows);
  return out;
}

std::vector<double> restricted_scales(const Matrix& x, std::span<const std::size_t> features) {
  Matrix xs = select_cols(x, features);
  linalg::center_columns_inplace(xs);
  std::vector<double> s = linalg::spd_inverse_diagonal(linalg::gram(xs));
  for (double& v : s) v = std::sqrt(v);
  return s;
}

SplitFit fit_split(const Dataset& d, const transforms::TransformSpec& spec,
                   std::span<const std::size_t> features) {
  d.validate();
  if (d.n() <= features.size()) {
    throw Error(ErrorCode::InsufficientSamples,
                "split has " + std::to_string(d.n()) + " rows for " + std::to_string(features.size()) +
                    " features; use the high-dimensional mode");
  }
  Matrix x = select_cols(d.x, features);
  linalg::center_columns_inplace(x);
  const Matrix f = transforms::transform_response(spec, d.y);
  linalg::OlsFit ols = linalg::multi_response_ols(x, f);
  SplitFit out;
  out.coefficients = std::move(ols.coefficients);
  out.scales.resize(ols.inv_gram_diag.size());
  for (std::size_t j = 0; j < out.scales.size(); ++j) out.scales[j] = std::sqrt(ols.inv_gram_diag[j]);
  out.features.assign(features.begin(), features.end());
  return out;
}

SplitFit fit_split(const Dataset& d, const transforms::TransformSpec& spec) {
  std::vector<std::size_t> all(d.p());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return fit_split(d, spec, all);
}

RankingStats ranking_statistics(const SplitFit& fit1, const SplitFit& fit2, std::size_t p) {
  if (fit1.features != fit2.features || fit1.coefficients.rows() != fit1.features.size() ||
      fit2.coefficients.rows() != fit2.features.size() || fit1.coefficients.cols() != fit2.coefficients.cols() ||
      fit1.scales.size() != fit1.features.size() || fit2.scales.size() != fit2.features.size()) {
    throw Error(ErrorCode::InternalContractViolation, "split fits do not share a feature set");
  }
  RankingStats out;
  out.w.assign(p, 0.0);
  out.screened = fit1.features;
  const std::size_t hcount = fit1.coefficients.cols();
  for (std::size_t k = 0; k < fit1.features.size(); ++k) {
    const std::size_t j = fit1.features[k];
    if (j >= p) throw Error(ErrorCode::InternalContractViolation, "feature index out of range");
    double ip = 0.0;
    for (std::size_t h = 0; h < hcount; ++h) ip += fit1.coefficients(k, h) * fit2.coefficients(k, h);
    out.w[j] = ip / (fit1.scales[k] * fit2.scales[k]);
  }
  return out;
}

void validate_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidLevel, "target FDR level must lie in (0,1), got " + std::to_string(alpha));
  }
}

double threshold(std::span<const double> w, double alpha, Rule rule) {
  validate_alpha(alpha);
  std::vector<double> pos, neg;
  for (double v : w) {
    if (!std::isfinite(v)) throw Error(ErrorCode::DegenerateInput, "ranking statistics must be finite");
    if (v > 0.0) pos.push_back(v);
    else if (v < 0.0) neg.push_back(-v);
  }
  if (pos.empty()) return kInfinity;
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());
  std::vector<double> candidates;
  candidates.reserve(pos.size() + neg.size());
  std::merge(pos.begin(), pos.end(), neg.begin(), neg.end(), std::back_inserter(candidates));
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  const double offset = rule == Rule::LPlus ? 1.0 : 0.0;
  for (double t : candidates) {
    const auto n_neg = static_cast<double>(neg.end() - std::lower_bound(neg.begin(), neg.end(), t));
    const auto n_pos = static_cast<double>(pos.end() - std::lower_bound(pos.begin(), pos.end(), t));
    if ((offset + n_neg) / std::max(n_pos, 1.0) <= alpha) return n_pos > 0.0 ? t : kInfinity;
  }
  return kInfinity;
}

double threshold_L(std::span<const double> w, double alpha) { return threshold(w, alpha, Rule::L); }
double threshold_Lplus(std::span<const double> w, double alpha) { return threshold(w, alpha, Rule::LPlus); }

std::vector<std::size_t> select_at(std::span<const double> w, double t) {
  std::vector<std::size_t> out;
  if (!std::isfinite(t)) return out;
  for (std::size_t j = 0; j < w.size(); ++j)
    if (w[j] >= t) out.push_back(j);
  return out;
}

Mode resolve_mode(Mode requested, std::size_t p, std::size_t n_second) {
  if (requested != Mode::Auto) return requested;
  return p >= n_second ? Mode::HighDim : Mode::LowDim;
}

Rule resolve_rule(Rule requested, Mode resolved) {
  if (requested != Rule::Auto) return requested;
  return resolved == Mode::HighDim ? Rule::LPlus : Rule::L;
}

SelectionResult run_mfsda(const Dataset& d, const RunOptions& opt) {
  const auto t_start = Clock::now();
  staged("config", [&] {
    validate_alpha(opt.alpha);
    opt.transform.validate();
    opt.screen.validate();
    d.validate();
  });

  SelectionResult res;
  res.alpha = opt.alpha;
  res.diagnostics.n_total = d.n();
  res.diagnostics.p = d.p();
  res.diagnostics.kernels = std::string(kernels::to_string(kernels::active()));

  auto t0 = Clock::now();
  const SplitPair split = staged("split", [&] { return split_data(d, opt.seeds.split); });
  res.diagnostics.split_ms = ms_since(t0);
  res.diagnostics.n_first = split.first.n();
  res.diagnostics.n_second = split.second.n();

  res.mode = resolve_mode(opt.mode, d.p(), split.second.n());
  res.rule = resolve_rule(opt.rule, res.mode);

  t0 = Clock::now();
  if (res.mode == Mode::LowDim) {
    const SplitFit fit1 = staged("fit split 1", [&] { return fit_split(split.first, opt.transform); });
    const SplitFit fit2 = staged("fit split 2", [&] { return fit_split(split.second, opt.transform); });
    res.stats = staged("ranking", [&] { return ranking_statistics(fit1, fit2, d.p()); });
  } else {
    const lasso::Screening screen = staged("screen split 1", [&] {
      const Matrix f1 = transforms::transform_response(opt.transform, split.first.y);
      return lasso::screen_support(split.first.x, f1, opt.screen, opt.seeds.screen);
    });
    res.diagnostics.lambdas = screen.lambdas;
    res.diagnostics.screened = screen.support.size();
    if (screen.support.empty()) {
      res.stats.w.assign(d.p(), 0.0);
      res.diagnostics.fit_ms = ms_since(t0);
      res.diagnostics.total_ms = ms_since(t_start);
      return res;
    }
    SplitFit fit1;
    fit1.features = screen.support;
    fit1.coefficients = select_rows(screen.coefficients, screen.support);
    fit1.scales = staged("scale split 1", [&] { return restricted_scales(split.first.x, screen.support); });
    const SplitFit fit2 =
        staged("refit split 2", [&] { return fit_split(split.second, opt.transform, screen.support); });
    res.stats = staged("ranking", [&] { return ranking_statistics(fit1, fit2, d.p()); });
  }
  if (res.mode == Mode::LowDim) res.diagnostics.screened = d.p();
  res.diagnostics.fit_ms = ms_since(t0);

  t0 = Clock::now();
  res.threshold = staged("threshold", [&] { return threshold(res.stats.w, opt.alpha, res.rule); });
  res.selected = select_at(res.stats.w, res.threshold);
  res.diagnostics.threshold_ms = ms_since(t0);
  res.diagnostics.total_ms = ms_since(t_start);
  return res;
}

}  // namespace mfsda::selector
