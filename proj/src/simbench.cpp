#include "mfsda/simbench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <random>
#include <thread>

#include "mfsda/error.hpp"
#include "mfsda/transforms.hpp"

namespace mfsda::simbench {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

// X_i = ρX_{i-1} + √(1-ρ²)Z_i, i.e. row = L·z with L = ar1_cholesky.
void fill_ar1(std::span<double> row, double rho, std::mt19937_64& rng, std::normal_distribution<double>& normal) {
  const double innov = std::sqrt(1.0 - rho * rho);
  double prev = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    const double z = normal(rng);
    prev = j == 0 ? z : rho * prev + innov * z;
    row[j] = prev;
  }
}

}  // namespace

std::uint64_t stream_seed(std::uint64_t base_seed, std::uint64_t rep, Stage stage) {
  return splitmix64(splitmix64(base_seed + rep) ^ splitmix64(static_cast<std::uint64_t>(stage) << 32));
}

std::string_view to_string(CovariateKind k) {
  switch (k) {
    case CovariateKind::NormalAR1: return "normal";
    case CovariateKind::TMultivariate5: return "t5";
    case CovariateKind::Mixed: return "mixed";
  }
  return "unknown";
}

CovariateKind parse_covariate_kind(std::string_view s) {
  if (s == "normal") return CovariateKind::NormalAR1;
  if (s == "t5") return CovariateKind::TMultivariate5;
  if (s == "mixed") return CovariateKind::Mixed;
  throw Error(ErrorCode::InvalidConfig, "unknown covariate distribution '" + std::string(s) + "'");
}

void CovariateSpec::validate() const {
  if (p < 1) throw Error(ErrorCode::InvalidConfig, "covariate dimension must be positive");
  if (!(rho >= 0.0 && rho < 1.0)) throw Error(ErrorCode::InvalidConfig, "rho must lie in [0,1)");
}

Matrix ar1_cholesky(std::size_t p, double rho) {
  Matrix l(p, p);
  const double innov = std::sqrt(1.0 - rho * rho);
  for (std::size_t i = 0; i < p; ++i) {
    l(i, 0) = std::pow(rho, static_cast<double>(i));
    for (std::size_t j = 1; j <= i; ++j) l(i, j) = std::pow(rho, static_cast<double>(i - j)) * innov;
  }
  return l;
}

Matrix gen_covariates(const CovariateSpec& spec, std::size_t n, std::uint64_t seed) {
  spec.validate();
  const std::size_t p = spec.p;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::chi_squared_distribution<double> chi5(5.0);
  const double t_scale = spec.unit_t_covariance ? std::sqrt(3.0 / 5.0) : 1.0;

  Matrix x(n, p);
  std::vector<double> row(p);
  const std::size_t third = p / 3;
  for (std::size_t i = 0; i < n; ++i) {
    switch (spec.kind) {
      case CovariateKind::NormalAR1:
        fill_ar1(row, spec.rho, rng, normal);
        break;
      case CovariateKind::TMultivariate5: {
        fill_ar1(row, spec.rho, rng, normal);
        const double w = t_scale / std::sqrt(chi5(rng) / 5.0);
        for (double& v : row) v *= w;
        break;
      }
      case CovariateKind::Mixed: {
        fill_ar1(std::span<double>(row).first(third), spec.rho, rng, normal);
        for (std::size_t j = third; j < 2 * third; ++j) row[j] = normal(rng);
        for (std::size_t j = 2 * third; j < p; ++j) {
          const double z = normal(rng);
          row[j] = t_scale * z / std::sqrt(chi5(rng) / 5.0);
        }
        break;
      }
    }
    for (std::size_t j = 0; j < p; ++j) x(i, j) = row[j];
  }
  return x;
}

std::string_view to_string(ScenarioId id) {
  switch (id) {
    case ScenarioId::S1a: return "1a";
    case ScenarioId::S1b: return "1b";
    case ScenarioId::S1c: return "1c";
    case ScenarioId::S2a: return "2a";
    case ScenarioId::S2b: return "2b";
    case ScenarioId::S2c: return "2c";
  }
  return "unknown";
}

ScenarioId parse_scenario(std::string_view s) {
  if (!s.empty() && (s.front() == 'S' || s.front() == 's')) s.remove_prefix(1);
  if (s == "1a") return ScenarioId::S1a;
  if (s == "1b") return ScenarioId::S1b;
  if (s == "1c") return ScenarioId::S1c;
  if (s == "2a") return ScenarioId::S2a;
  if (s == "2b") return ScenarioId::S2b;
  if (s == "2c") return ScenarioId::S2c;
  throw Error(ErrorCode::InvalidConfig, "unknown scenario '" + std::string(s) + "'");
}

std::vector<std::size_t> ScenarioSpec::block_sizes() const {
  switch (id) {
    case ScenarioId::S1a:
    case ScenarioId::S2a:
      return {p1};
    case ScenarioId::S1b:
    case ScenarioId::S2b:
      return {p1 / 2, p1 - p1 / 2};
    case ScenarioId::S1c:
    case ScenarioId::S2c: {
      const std::size_t a = 3 * p1 / 10;
      return {a, a, p1 - 2 * a};
    }
  }
  return {};
}

void ScenarioSpec::validate() const {
  if (p1 < 1 || p1 > p) throw Error(ErrorCode::InvalidScenario, "need 1 <= p1 <= p");
  for (std::size_t b : block_sizes()) {
    if (b == 0) {
      throw Error(ErrorCode::InvalidScenario,
                  "p1=" + std::to_string(p1) + " leaves an empty coefficient block in scenario " +
                      std::string(to_string(id)));
    }
  }
}

std::vector<std::size_t> ScenarioSpec::active() const {
  std::vector<std::size_t> a(p1);
  std::iota(a.begin(), a.end(), std::size_t{0});
  return a;
}

std::vector<double> gen_response(const ScenarioSpec& spec, const Matrix& x, std::uint64_t seed) {
  spec.validate();
  if (x.cols() != spec.p) throw Error(ErrorCode::InvalidScenario, "covariate columns differ from scenario p");
  const std::vector<std::size_t> blocks = spec.block_sizes();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<double> y(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    // u[b] = β_bᵀx for each consecutive block of ones
    std::size_t col = 0;
    double u[3] = {0.0, 0.0, 0.0};
    for (std::size_t b = 0; b < blocks.size(); ++b)
      for (std::size_t k = 0; k < blocks[b]; ++k) u[b] += x(i, col++);
    const double eta = normal(rng);
    double v = 0.0;
    switch (spec.id) {
      case ScenarioId::S1a: v = u[0] + 3.0 * eta; break;
      case ScenarioId::S1b: v = std::abs(u[0]) + std::exp(3.0 + u[1]) + eta; break;
      case ScenarioId::S1c: v = u[0] + (u[1] + 3.0) * (u[1] + 3.0) + std::exp(u[2]) + eta; break;
      case ScenarioId::S2a: v = std::exp(5.0 + u[0]) + eta; break;
      case ScenarioId::S2b: v = 2.0 * u[0] + 3.0 * std::exp(u[1]) + eta; break;
      case ScenarioId::S2c: v = u[0] + std::abs(u[1] + 5.0) + std::exp(u[2]) + eta; break;
    }
    y[i] = v;
  }
  return y;
}

RepMetrics evaluate(std::span<const std::size_t> selected, std::span<const std::size_t> true_active) {
  if (true_active.empty()) throw Error(ErrorCode::InvalidScenario, "true active set is empty");
  std::vector<std::size_t> a(true_active.begin(), true_active.end());
  std::sort(a.begin(), a.end());
  std::size_t hits = 0;
  for (std::size_t j : selected)
    if (std::binary_search(a.begin(), a.end(), j)) ++hits;
  RepMetrics m;
  m.n_selected = selected.size();
  m.fdp = static_cast<double>(selected.size() - hits) / static_cast<double>(std::max<std::size_t>(selected.size(), 1));
  m.tpr = static_cast<double>(hits) / static_cast<double>(a.size());
  m.covered = hits == a.size();
  return m;
}

std::vector<std::size_t> baseline_topk(std::span<const double> stats, std::size_t k) {
  k = std::min(k, stats.size());
  std::vector<std::size_t> order(stats.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return stats[a] > stats[b]; });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

std::vector<double> marginal_sir_utility(const Matrix& x, std::span<const double> y, std::size_t slices) {
  const transforms::SliceBoundaries b = transforms::make_slice_boundaries(y, slices);
  const std::size_t n = x.rows();
  std::vector<std::size_t> slice(n);
  std::vector<double> count(slices, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    slice[i] = b.slice_of(y[i]);
    count[slice[i]] += 1.0;
  }
  std::vector<double> out(x.cols(), 0.0);
  std::vector<double> sums(slices);
  for (std::size_t j = 0; j < x.cols(); ++j) {
    auto c = x.col(j);
    double mean = 0.0;
    for (double v : c) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : c) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n));
    if (sd == 0.0) continue;
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) sums[slice[i]] += (c[i] - mean) / sd;
    double u = 0.0;
    for (std::size_t h = 0; h < slices; ++h) {
      const double m = sums[h] / count[h];
      u += count[h] / static_cast<double>(n) * m * m;
    }
    out[j] = u;
  }
  return out;
}

std::size_t hard_threshold_size(double c, std::size_t n) {
  const double k = std::floor(c * static_cast<double>(n) / std::log(static_cast<double>(n)));
  return std::max<std::size_t>(1, static_cast<std::size_t>(k));
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Mfsda: return "mfsda";
    case Method::ImSir1: return "imsir1";
    case Method::ImSir2: return "imsir2";
  }
  return "unknown";
}

Method parse_method(std::string_view s) {
  if (s == "mfsda") return Method::Mfsda;
  if (s == "imsir1") return Method::ImSir1;
  if (s == "imsir2") return Method::ImSir2;
  throw Error(ErrorCode::InvalidConfig, "unknown method '" + std::string(s) + "'");
}

void Cell::validate() const {
  scenario.validate();
  covariates.validate();
  if (covariates.p != scenario.p) throw Error(ErrorCode::InvalidConfig, "covariate p differs from scenario p");
  if (n < 2) throw Error(ErrorCode::InvalidConfig, "sample size must be at least 2");
  selector::validate_alpha(options.alpha);
  options.transform.validate();
  options.screen.validate();
}

std::string Cell::method_label() const {
  switch (method) {
    case Method::ImSir1: return "IM-SIR1";
    case Method::ImSir2: return "IM-SIR2";
    case Method::Mfsda: break;
  }
  const auto& t = options.transform;
  if (t.family == transforms::Family::Indicator && t.slices == 4) return "MFSDA";
  std::string label = "MFSDA-" + std::string(transforms::to_string(t.family)) + "-H" + std::to_string(t.slices);
  if (t.family == transforms::Family::Poly && t.poly_degree != 2) label += "-m" + std::to_string(t.poly_degree);
  return label;
}

std::string Cell::rule_label() const {
  if (method != Method::Mfsda) return "topk";
  const std::size_t total = rows();
  const selector::Mode mode = selector::resolve_mode(options.mode, scenario.p, total / 2);
  return std::string(selector::to_string(selector::resolve_rule(options.rule, mode)));
}

RepOutcome run_replication(const Cell& cell, std::uint64_t base_seed, std::size_t rep, bool timing) {
  RepOutcome out;
  out.rep = rep;
  out.seed = base_seed + rep;
  try {
    cell.validate();
    Dataset d;
    d.x = gen_covariates(cell.covariates, cell.rows(), stream_seed(base_seed, rep, Stage::Covariates));
    d.y = gen_response(cell.scenario, d.x, stream_seed(base_seed, rep, Stage::Noise));

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::size_t> selected;
    if (cell.method == Method::Mfsda) {
      selector::RunOptions opt = cell.options;
      opt.seeds.split = stream_seed(base_seed, rep, Stage::Split);
      opt.seeds.screen = stream_seed(base_seed, rep, Stage::Screen);
      selected = selector::run_mfsda(d, opt).selected;
    } else {
      const double c = cell.method == Method::ImSir1 ? 0.05 : 0.5;
      const auto stats = marginal_sir_utility(d.x, d.y, cell.options.transform.slices);
      selected = baseline_topk(stats, hard_threshold_size(c, cell.n));
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    RepMetrics m = evaluate(selected, cell.scenario.active());
    m.runtime_ms = timing ? ms : 0.0;
    out.metrics = m;
  } catch (const Error& e) {
    out.error = e.what();
  }
  return out;
}

Aggregate run_replications(const Cell& cell, std::size_t reps, std::uint64_t base_seed, std::size_t jobs,
                           bool timing) {
  if (reps < 1) throw Error(ErrorCode::InvalidConfig, "need at least one replication");
  cell.validate();
  Aggregate agg;
  agg.cell = cell;
  agg.reps = reps;
  agg.outcomes.resize(reps);

  jobs = std::clamp<std::size_t>(jobs, 1, reps);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r = next.fetch_add(1); r < reps; r = next.fetch_add(1)) {
      agg.outcomes[r] = run_replication(cell, base_seed, r, timing);
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(jobs);
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }

  std::size_t ok = 0;
  double fdr = 0.0, tpr = 0.0, pa = 0.0, rt = 0.0;
  for (const RepOutcome& o : agg.outcomes) {
    if (!o.metrics) {
      ++agg.failures;
      continue;
    }
    ++ok;
    fdr += o.metrics->fdp;
    tpr += o.metrics->tpr;
    pa += o.metrics->covered ? 1.0 : 0.0;
    rt += o.metrics->runtime_ms;
  }
  if (ok > 0) {
    const double k = static_cast<double>(ok);
    agg.fdr = fdr / k;
    agg.tpr = tpr / k;
    agg.pa = pa / k;
    agg.mean_runtime_ms = rt / k;
  }
  return agg;
}

void write_aggregate_header(std::ostream& os) {
  os << "scenario,dist,n,p,p1,rho,method,rule,alpha,reps,fdr,tpr,pa,mean_runtime_ms,failures\n";
}

void write_aggregate_row(std::ostream& os, const Aggregate& a) {
  const Cell& c = a.cell;
  os << to_string(c.scenario.id) << ',' << to_string(c.covariates.kind) << ',' << c.n << ',' << c.scenario.p << ','
     << c.scenario.p1 << ',' << fmt("%g", c.covariates.rho) << ',' << c.method_label() << ',' << c.rule_label()
     << ',' << fmt("%g", c.options.alpha) << ',' << a.reps << ',' << fmt("%.6f", a.fdr) << ','
     << fmt("%.6f", a.tpr) << ',' << fmt("%.6f", a.pa) << ',' << fmt("%.3f", a.mean_runtime_ms) << ','
     << a.failures << '\n';
}

void write_detail_header(std::ostream& os) {
  os << "scenario,dist,n,p,p1,rho,method,rep,seed,fdp,tpr,covered,n_selected,runtime_ms,error\n";
}

void write_detail_rows(std::ostream& os, const Aggregate& a) {
  const Cell& c = a.cell;
  for (const RepOutcome& o : a.outcomes) {
    os << to_string(c.scenario.id) << ',' << to_string(c.covariates.kind) << ',' << c.n << ',' << c.scenario.p
       << ',' << c.scenario.p1 << ',' << fmt("%g", c.covariates.rho) << ',' << c.method_label() << ',' << o.rep
       << ',' << o.seed << ',';
    if (o.metrics) {
      os << fmt("%.6f", o.metrics->fdp) << ',' << fmt("%.6f", o.metrics->tpr) << ',' << (o.metrics->covered ? 1 : 0)
         << ',' << o.metrics->n_selected << ',' << fmt("%.3f", o.metrics->runtime_ms) << ",\n";
    } else {
      std::string msg = o.error;
      std::replace(msg.begin(), msg.end(), ',', ';');
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      os << ",,,,," << msg << '\n';
    }
  }
}

std::string_view to_string(FigureAxis a) {
  switch (a) {
    case FigureAxis::None: return "none";
    case FigureAxis::N: return "n";
    case FigureAxis::P: return "p";
    case FigureAxis::P1: return "p1";
    case FigureAxis::Rho: return "rho";
    case FigureAxis::Slices: return "h";
  }
  return "unknown";
}

FigureAxis parse_figure_axis(std::string_view s) {
  if (s == "none") return FigureAxis::None;
  if (s == "n") return FigureAxis::N;
  if (s == "p") return FigureAxis::P;
  if (s == "p1") return FigureAxis::P1;
  if (s == "rho") return FigureAxis::Rho;
  if (s == "h" || s == "H" || s == "slices") return FigureAxis::Slices;
  throw Error(ErrorCode::InvalidConfig, "unknown figure axis '" + std::string(s) + "'");
}

double axis_value(const Cell& cell, FigureAxis axis) {
  switch (axis) {
    case FigureAxis::None: return 0.0;
    case FigureAxis::N: return static_cast<double>(cell.n);
    case FigureAxis::P: return static_cast<double>(cell.scenario.p);
    case FigureAxis::P1: return static_cast<double>(cell.scenario.p1);
    case FigureAxis::Rho: return cell.covariates.rho;
    case FigureAxis::Slices: return static_cast<double>(cell.options.transform.slices);
  }
  return 0.0;
}

std::string series_label(const Cell& cell, FigureAxis axis) {
  std::string s = std::string(to_string(cell.scenario.id)) + "/" + std::string(to_string(cell.covariates.kind));
  if (cell.method == Method::Mfsda) {
    s += "/MFSDA-" + std::string(transforms::to_string(cell.options.transform.family));
  } else {
    s += "/" + cell.method_label();
  }
  if (axis != FigureAxis::N) s += "/n=" + std::to_string(cell.n);
  if (axis != FigureAxis::P) s += "/p=" + std::to_string(cell.scenario.p);
  if (axis != FigureAxis::P1) s += "/p1=" + std::to_string(cell.scenario.p1);
  if (axis != FigureAxis::Rho) s += "/rho=" + fmt("%g", cell.covariates.rho);
  if (axis != FigureAxis::Slices && cell.method == Method::Mfsda) {
    s += "/H=" + std::to_string(cell.options.transform.slices);
  }
  return s;
}

void write_figure_header(std::ostream& os) { os << "series,x,fdr,tpr\n"; }

void write_figure_row(std::ostream& os, const Aggregate& a, FigureAxis axis) {
  os << series_label(a.cell, axis) << ',' << fmt("%g", axis_value(a.cell, axis)) << ',' << fmt("%.6f", a.fdr)
     << ',' << fmt("%.6f", a.tpr) << '\n';
}

namespace {

Cell base_cell(ScenarioId id, CovariateKind kind, std::size_t n, std::size_t p, std::size_t p1, double rho) {
  Cell c;
  c.scenario = ScenarioSpec{id, p, p1};
  c.covariates.kind = kind;
  c.covariates.p = p;
  c.covariates.rho = rho;
  c.n = n;
  return c;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"lowdim-table", "lowdim-rho", "highdim-table", "fig-h", "fig-p", "fig-rho", "fig-p1"};
}

Preset make_preset(std::string_view name) {
  using enum ScenarioId;
  using enum CovariateKind;
  Preset pr;
  pr.name = std::string(name);
  const ScenarioId low[] = {S1a, S1b, S1c};
  const ScenarioId high[] = {S2a, S2b, S2c};
  if (name == "lowdim-table") {
    pr.axis = FigureAxis::N;
    for (std::size_t n : {300, 400, 500})
      for (ScenarioId s : low)
        for (CovariateKind k : {NormalAR1, TMultivariate5, Mixed}) pr.cells.push_back(base_cell(s, k, n, 20, 10, 0.5));
  } else if (name == "lowdim-rho") {
    pr.axis = FigureAxis::Rho;
    for (ScenarioId s : low)
      for (double rho : {0.2, 0.5, 0.8}) pr.cells.push_back(base_cell(s, NormalAR1, 500, 20, 10, rho));
  } else if (name == "highdim-table") {
    pr.default_reps = 50;
    for (ScenarioId s : high)
      for (CovariateKind k : {NormalAR1, Mixed})
        for (Method m : {Method::Mfsda, Method::ImSir1, Method::ImSir2}) {
          Cell c = base_cell(s, k, 500, 1000, 10, 0.5);
          c.method = m;
          pr.cells.push_back(c);
        }
  } else if (name == "fig-h") {
    pr.axis = FigureAxis::Slices;
    for (ScenarioId s : low)
      for (transforms::Family f : {transforms::Family::Indicator, transforms::Family::Cire, transforms::Family::Poly})
        for (std::size_t h : {3, 4, 5, 6, 8, 10}) {
          Cell c = base_cell(s, NormalAR1, 500, 20, 10, 0.5);
          c.options.transform.family = f;
          c.options.transform.slices = h;
          pr.cells.push_back(c);
        }
  } else if (name == "fig-p") {
    pr.default_reps = 50;
    pr.axis = FigureAxis::P;
    for (std::size_t p : {600, 800, 1000, 1200, 1500}) pr.cells.push_back(base_cell(S2c, Mixed, 500, p, 10, 0.5));
  } else if (name == "fig-rho") {
    pr.default_reps = 50;
    pr.axis = FigureAxis::Rho;
    for (double rho : {0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8})
      pr.cells.push_back(base_cell(S2c, Mixed, 500, 1000, 10, rho));
  } else if (name == "fig-p1") {
    pr.default_reps = 50;
    pr.axis = FigureAxis::P1;
    for (std::size_t p1 : {5, 10, 15, 20, 25}) pr.cells.push_back(base_cell(S2c, Mixed, 500, 1000, p1, 0.5));
  } else {
    throw Error(ErrorCode::InvalidConfig, "unknown preset '" + std::string(name) + "'");
  }
  return pr;
}

}  // namespace mfsda::simbench
