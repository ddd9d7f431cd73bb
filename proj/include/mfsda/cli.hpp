#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mfsda/error.hpp"
#include "mfsda/selector.hpp"
#include "mfsda/simbench.hpp"

namespace mfsda::cli {

// Stable process exit codes.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,           // unparsable command line
  kConfig = 2,          // InvalidLevel, InvalidConfig
  kIo = 3,              // FileNotFound, IoError
  kData = 4,            // MissingValue, NonNumeric, ColumnNotFound, DuplicateHeader
  kSamples = 5,         // InsufficientSamples
  kSingular = 6,        // SingularGram
  kDegenerate = 7,      // InsufficientDistinctResponses, DegenerateSlicing, DegenerateInput
  kScenario = 8,        // InvalidScenario
  kInternal = 9,        // InternalContractViolation and anything unexpected
};

int exit_code_for(ErrorCode code);

struct SelectConfig {
  std::string input;
  std::string response = "y";
  std::string out;  // JSON path; empty: no JSON file
  selector::RunOptions options;
  std::uint64_t seed = 1;
};

struct SimulateConfig {
  std::optional<std::string> preset;
  std::vector<std::string> scenarios{"1a"};
  std::vector<std::string> dists{"normal"};
  std::vector<std::size_t> ns{500};
  std::vector<std::size_t> ps{20};
  std::vector<std::size_t> p1s{10};
  std::vector<double> rhos{0.5};
  std::vector<std::string> methods{"mfsda"};
  std::vector<std::string> transforms_{"indicator"};
  std::vector<std::size_t> slices{4};
  int poly_degree = 2;
  double alpha = 0.2;
  std::string rule = "auto";
  std::string mode = "auto";
  lasso::ScreenConfig screen;
  bool total_n = false;
  bool unit_t_covariance = false;
  std::optional<std::size_t> reps;
  std::size_t jobs = 1;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string detail_out;
  std::string figure_out;
  std::optional<std::string> figure_axis;
  bool timing = true;
};

// Expands the configured grid (or preset) into cells, in output order:
// scenario, dist, n, p, p1, rho, transform, H, method.
std::vector<simbench::Cell> expand_cells(const SimulateConfig& cfg, simbench::FigureAxis* axis = nullptr,
                                         std::size_t* default_reps = nullptr);

// Both return an exit code; stdout gets the summary, stderr diagnostics.
int cmd_select(const SelectConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateConfig& cfg, std::ostream& out, std::ostream& err);

// Full command line entry point (`mfsda select ...`, `mfsda simulate ...`).
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace mfsda::cli
