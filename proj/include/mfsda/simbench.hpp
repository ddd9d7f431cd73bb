#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mfsda/matrix.hpp"
#include "mfsda/selector.hpp"

namespace mfsda::simbench {

// ---------------------------------------------------------------------------
// Seeds
// ---------------------------------------------------------------------------

enum class Stage : std::uint64_t { Covariates = 1, Noise = 2, Split = 3, Screen = 4 };

// Independent stream seed for (base_seed + rep, stage), via splitmix64.
std::uint64_t stream_seed(std::uint64_t base_seed, std::uint64_t rep, Stage stage);

// ---------------------------------------------------------------------------
// Covariates and responses
// ---------------------------------------------------------------------------

enum class CovariateKind { NormalAR1, TMultivariate5, Mixed };

std::string_view to_string(CovariateKind k);   // normal|t5|mixed
CovariateKind parse_covariate_kind(std::string_view s);

struct CovariateSpec {
  CovariateKind kind = CovariateKind::NormalAR1;
  std::size_t p = 20;
  double rho = 0.5;
  // t(5) draws are rescaled by √(3/5) so their covariance is Σ rather than (5/3)Σ.
  bool unit_t_covariance = false;

  void validate() const;
};

// Lower-triangular factor of the AR(1) matrix ρ^{|i-j|}.
Matrix ar1_cholesky(std::size_t p, double rho);

Matrix gen_covariates(const CovariateSpec& spec, std::size_t n, std::uint64_t seed);

enum class ScenarioId { S1a, S1b, S1c, S2a, S2b, S2c };

std::string_view to_string(ScenarioId id);  // 1a..2c
ScenarioId parse_scenario(std::string_view s);

struct ScenarioSpec {
  ScenarioId id = ScenarioId::S1a;
  std::size_t p = 20;
  std::size_t p1 = 10;

  void validate() const;
  // {0..p1-1}
  std::vector<std::size_t> active() const;
  // Sizes of the consecutive unit-coefficient blocks β₁, β₂, β₃ that make up
  // the active set (one, two or three blocks depending on the scenario).
  std::vector<std::size_t> block_sizes() const;
};

std::vector<double> gen_response(const ScenarioSpec& spec, const Matrix& x, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Metrics and baseline
// ---------------------------------------------------------------------------

struct RepMetrics {
  double fdp = 0.0;
  double tpr = 0.0;
  bool covered = false;
  std::size_t n_selected = 0;
  double runtime_ms = 0.0;
};

// Both index sets 0-based. Throws InvalidScenario when true_active is empty.
RepMetrics evaluate(std::span<const std::size_t> selected, std::span<const std::size_t> true_active);

// Indices of the k largest statistics, ties to the lower index; k clipped to p.
std::vector<std::size_t> baseline_topk(std::span<const double> stats, std::size_t k);

// Marginal sliced-inverse-regression utility per covariate:
//   ω_j = Σ_h p̂_h · (mean of standardized X_j within slice h)².
std::vector<double> marginal_sir_utility(const Matrix& x, std::span<const double> y, std::size_t slices);

// ⌊c·n / log n⌋, at least 1.
std::size_t hard_threshold_size(double c, std::size_t n);

// ---------------------------------------------------------------------------
// Replications
// ---------------------------------------------------------------------------

enum class Method { Mfsda, ImSir1, ImSir2 };

std::string_view to_string(Method m);  // mfsda|imsir1|imsir2
Method parse_method(std::string_view s);

struct Cell {
  ScenarioSpec scenario;
  CovariateSpec covariates;
  std::size_t n = 500;       // per-split size unless total_n
  bool total_n = false;      // read n as the total sample size
  Method method = Method::Mfsda;
  selector::RunOptions options;

  std::size_t rows() const noexcept { return total_n ? n : 2 * n; }
  void validate() const;
  // Method label written to the CSV (encodes non-default transforms).
  std::string method_label() const;
  // Threshold rule label: L, Lplus, or topk.
  std::string rule_label() const;
};

struct RepOutcome {
  std::size_t rep = 0;
  std::uint64_t seed = 0;
  std::optional<RepMetrics> metrics;  // empty on failure
  std::string error;
};

RepOutcome run_replication(const Cell& cell, std::uint64_t base_seed, std::size_t rep, bool timing = true);

struct Aggregate {
  Cell cell;
  std::size_t reps = 0;
  std::size_t failures = 0;
  double fdr = 0.0;
  double tpr = 0.0;
  double pa = 0.0;
  double mean_runtime_ms = 0.0;
  std::vector<RepOutcome> outcomes;  // in replication order
};

// Replication r uses seeds derived from base_seed + r only, so the aggregate
// does not depend on `jobs`. With timing off, runtimes are recorded as 0.
Aggregate run_replications(const Cell& cell, std::size_t reps, std::uint64_t base_seed, std::size_t jobs,
                           bool timing = true);

void write_aggregate_header(std::ostream& os);
void write_aggregate_row(std::ostream& os, const Aggregate& a);
void write_detail_header(std::ostream& os);
void write_detail_rows(std::ostream& os, const Aggregate& a);

// ---------------------------------------------------------------------------
// Presets and figure data
// ---------------------------------------------------------------------------

enum class FigureAxis { None, N, P, P1, Rho, Slices };

std::string_view to_string(FigureAxis a);
FigureAxis parse_figure_axis(std::string_view s);  // none|n|p|p1|rho|h
double axis_value(const Cell& cell, FigureAxis axis);
// Every identifying field except the axis one, e.g. "2c/mixed/MFSDA/p1=10".
std::string series_label(const Cell& cell, FigureAxis axis);

struct Preset {
  std::string name;
  std::vector<Cell> cells;
  std::size_t default_reps = 200;
  FigureAxis axis = FigureAxis::None;
};

std::vector<std::string> preset_names();
Preset make_preset(std::string_view name);

void write_figure_header(std::ostream& os);
void write_figure_row(std::ostream& os, const Aggregate& a, FigureAxis axis);

}  // namespace mfsda::simbench
