#include "mfsda/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <ostream>
#include <sstream>

#include "mfsda/io.hpp"
#include "mfsda/kernels.hpp"

namespace mfsda::cli {
namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  return f;
}

void set_kernels(const std::string& name) {
  if (name == "auto") kernels::set_active(kernels::best_available());
  else if (name == "scalar") kernels::set_active(kernels::Isa::Scalar);
  else if (name == "avx2") kernels::set_active(kernels::Isa::Avx2);
  else throw Error(ErrorCode::InvalidConfig, "unknown kernel set '" + name + "'");
}

template <class F>
int guarded(std::ostream& err, F&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidLevel:
    case ErrorCode::InvalidConfig: return kConfig;
    case ErrorCode::FileNotFound:
    case ErrorCode::IoError: return kIo;
    case ErrorCode::MissingValue:
    case ErrorCode::NonNumeric:
    case ErrorCode::ColumnNotFound:
    case ErrorCode::DuplicateHeader: return kData;
    case ErrorCode::InsufficientSamples: return kSamples;
    case ErrorCode::SingularGram: return kSingular;
    case ErrorCode::InsufficientDistinctResponses:
    case ErrorCode::DegenerateSlicing:
    case ErrorCode::DegenerateInput: return kDegenerate;
    case ErrorCode::InvalidScenario: return kScenario;
    case ErrorCode::InternalContractViolation: return kInternal;
  }
  return kInternal;
}

int cmd_select(const SelectConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    selector::validate_alpha(cfg.options.alpha);
    const Dataset d = io::read_dataset(cfg.input, cfg.response);
    selector::RunOptions opt = cfg.options;
    opt.seeds.split = simbench::stream_seed(cfg.seed, 0, simbench::Stage::Split);
    opt.seeds.screen = simbench::stream_seed(cfg.seed, 0, simbench::Stage::Screen);
    const selector::SelectionResult r = selector::run_mfsda(d, opt);
    if (!cfg.out.empty()) {
      auto f = open_out(cfg.out);
      f << io::to_json(r, d, opt.transform).dump(2) << '\n';
      if (!f) throw Error(ErrorCode::IoError, "failed writing '" + cfg.out + "'");
    }
    io::write_summary(out, r, d);
    return static_cast<int>(kOk);
  });
}

std::vector<simbench::Cell> expand_cells(const SimulateConfig& cfg, simbench::FigureAxis* axis,
                                         std::size_t* default_reps) {
  using namespace simbench;
  selector::validate_alpha(cfg.alpha);
  const selector::Rule rule = selector::parse_rule(cfg.rule);
  const selector::Mode mode = selector::parse_mode(cfg.mode);

  auto finish = [&](Cell& c) {
    c.options.alpha = cfg.alpha;
    c.options.rule = rule;
    c.options.mode = mode;
    c.options.screen = cfg.screen;
    c.options.transform.poly_degree = cfg.poly_degree;
    c.total_n = cfg.total_n;
    c.covariates.unit_t_covariance = cfg.unit_t_covariance;
    c.validate();
  };

  std::vector<Cell> cells;
  if (cfg.preset) {
    Preset pr = make_preset(*cfg.preset);
    if (axis) *axis = pr.axis;
    if (default_reps) *default_reps = pr.default_reps;
    for (Cell& c : pr.cells) finish(c);
    return pr.cells;
  }
  if (axis) *axis = FigureAxis::None;
  if (default_reps) *default_reps = 200;
  for (const auto& s : cfg.scenarios)
    for (const auto& dist : cfg.dists)
      for (std::size_t n : cfg.ns)
        for (std::size_t p : cfg.ps)
          for (std::size_t p1 : cfg.p1s)
            for (double rho : cfg.rhos)
              for (const auto& t : cfg.transforms_)
                for (std::size_t h : cfg.slices)
                  for (const auto& m : cfg.methods) {
                    Cell c;
                    c.scenario = ScenarioSpec{parse_scenario(s), p, p1};
                    c.covariates.kind = parse_covariate_kind(dist);
                    c.covariates.p = p;
                    c.covariates.rho = rho;
                    c.n = n;
                    c.method = parse_method(m);
                    c.options.transform.family = transforms::parse_family(t);
                    c.options.transform.slices = h;
                    finish(c);
                    cells.push_back(c);
                  }
  return cells;
}

int cmd_simulate(const SimulateConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!cfg.seed) throw Error(ErrorCode::InvalidConfig, "simulate requires --seed");
    if (cfg.out.empty()) throw Error(ErrorCode::InvalidConfig, "simulate requires --out");
    simbench::FigureAxis axis = simbench::FigureAxis::None;
    std::size_t default_reps = 200;
    const auto cells = expand_cells(cfg, &axis, &default_reps);
    if (cfg.figure_axis) axis = simbench::parse_figure_axis(*cfg.figure_axis);
    const std::size_t reps = cfg.reps.value_or(default_reps);
    if (reps < 1) throw Error(ErrorCode::InvalidConfig, "--reps must be at least 1");

    auto agg_out = open_out(cfg.out);
    simbench::write_aggregate_header(agg_out);
    std::ofstream detail, figure;
    if (!cfg.detail_out.empty()) {
      detail = open_out(cfg.detail_out);
      simbench::write_detail_header(detail);
    }
    if (!cfg.figure_out.empty()) {
      figure = open_out(cfg.figure_out);
      simbench::write_figure_header(figure);
    }
    for (std::size_t k = 0; k < cells.size(); ++k) {
      err << "[" << (k + 1) << "/" << cells.size() << "] " << simbench::series_label(cells[k], simbench::FigureAxis::None)
          << " " << cells[k].method_label() << " x" << reps << '\n';
      const auto agg = simbench::run_replications(cells[k], reps, *cfg.seed, cfg.jobs, cfg.timing);
      simbench::write_aggregate_row(agg_out, agg);
      agg_out.flush();
      if (detail.is_open()) simbench::write_detail_rows(detail, agg);
      if (figure.is_open()) simbench::write_figure_row(figure, agg, axis);
      std::ostringstream line;
      simbench::write_aggregate_row(line, agg);
      out << line.str();
    }
    if (!agg_out) throw Error(ErrorCode::IoError, "failed writing '" + cfg.out + "'");
    return static_cast<int>(kOk);
  });
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Model-free controlled variable selection by symmetrized data aggregation"};
  app.require_subcommand(1);
  std::string kernel_set = "auto";
  app.add_option("--kernels", kernel_set, "SIMD kernels: auto|scalar|avx2")->capture_default_str();

  SelectConfig sel;
  std::string sel_transform = "indicator", sel_rule = "auto", sel_mode = "auto";
  auto* select = app.add_subcommand("select", "Run the selector on a CSV dataset");
  select->add_option("--input", sel.input, "CSV file with a header row")->required();
  select->add_option("--response", sel.response, "Response column name or 1-based index")->capture_default_str();
  select->add_option("--alpha", sel.options.alpha, "Target FDR level")->capture_default_str();
  select->add_option("--transform", sel_transform, "indicator|cire|poly")->capture_default_str();
  select->add_option("--slices", sel.options.transform.slices, "Working dimension H")->capture_default_str();
  select->add_option("--poly-degree", sel.options.transform.poly_degree, "Exponent for poly")->capture_default_str();
  select->add_option("--rule", sel_rule, "auto|l|lplus")->capture_default_str();
  select->add_option("--mode", sel_mode, "auto|lowdim|highdim")->capture_default_str();
  select->add_option("--seed", sel.seed, "Seed for splitting and cross-validation")->capture_default_str();
  select->add_option("--out", sel.out, "Write the JSON result here");
  select->add_option("--cv-folds", sel.options.screen.folds, "LASSO cross-validation folds")->capture_default_str();
  select->add_option("--lambda-grid", sel.options.screen.path_length, "LASSO penalty grid size")->capture_default_str();
  select->add_option("--screen-cap", sel.options.screen.cap, "Max screened features (0: n/3)")->capture_default_str();

  SimulateConfig sim;
  std::string preset;
  std::uint64_t seed = 0;
  std::size_t reps = 0;
  bool no_timing = false;
  auto* simulate = app.add_subcommand("simulate", "Run the simulation bench");
  simulate->add_option("--preset", preset, "lowdim-table|lowdim-rho|highdim-table|fig-h|fig-p|fig-rho|fig-p1");
  simulate->add_option("--scenario", sim.scenarios, "1a,1b,1c,2a,2b,2c")->delimiter(',');
  simulate->add_option("--dist", sim.dists, "normal,t5,mixed")->delimiter(',');
  simulate->add_option("--n", sim.ns, "Per-split sample size(s)")->delimiter(',');
  simulate->add_option("--p", sim.ps, "Covariate dimension(s)")->delimiter(',');
  simulate->add_option("--p1", sim.p1s, "Active-set size(s)")->delimiter(',');
  simulate->add_option("--rho", sim.rhos, "AR(1) correlation(s)")->delimiter(',');
  simulate->add_option("--method", sim.methods, "mfsda,imsir1,imsir2")->delimiter(',');
  simulate->add_option("--transform", sim.transforms_, "indicator,cire,poly")->delimiter(',');
  simulate->add_option("--slices", sim.slices, "Working dimension(s) H")->delimiter(',');
  simulate->add_option("--poly-degree", sim.poly_degree)->capture_default_str();
  simulate->add_option("--alpha", sim.alpha)->capture_default_str();
  simulate->add_option("--rule", sim.rule, "auto|l|lplus")->capture_default_str();
  simulate->add_option("--mode", sim.mode, "auto|lowdim|highdim")->capture_default_str();
  simulate->add_option("--cv-folds", sim.screen.folds)->capture_default_str();
  simulate->add_option("--lambda-grid", sim.screen.path_length)->capture_default_str();
  simulate->add_option("--screen-cap", sim.screen.cap)->capture_default_str();
  simulate->add_flag("--total-n", sim.total_n, "Read --n as the total sample size instead of per split");
  simulate->add_flag("--unit-t-cov", sim.unit_t_covariance, "Rescale t(5) draws to covariance Σ");
  simulate->add_option("--reps", reps, "Replications per cell (default: 200, or the preset's)");
  simulate->add_option("--jobs", sim.jobs, "Worker threads")->capture_default_str();
  simulate->add_option("--seed", seed, "Base seed (required)")->required();
  simulate->add_option("--out", sim.out, "Aggregate CSV path")->required();
  simulate->add_option("--detail-out", sim.detail_out, "Per-replication CSV path");
  simulate->add_option("--figure-out", sim.figure_out, "Figure data CSV (series,x,fdr,tpr)");
  simulate->add_option("--figure-axis", sim.figure_axis, "none|n|p|p1|rho|h (default from preset)");
  simulate->add_flag("--no-timing", no_timing, "Record runtimes as 0 for byte-reproducible output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kUsage;
  }

  return guarded(err, [&] {
    set_kernels(kernel_set);
    if (*select) {
      sel.options.transform.family = transforms::parse_family(sel_transform);
      sel.options.rule = selector::parse_rule(sel_rule);
      sel.options.mode = selector::parse_mode(sel_mode);
      return cmd_select(sel, out, err);
    }
    if (!preset.empty()) {
      const bool grid_given = simulate->count("--scenario") + simulate->count("--dist") + simulate->count("--n") +
                                  simulate->count("--p") + simulate->count("--p1") + simulate->count("--rho") +
                                  simulate->count("--method") + simulate->count("--transform") +
                                  simulate->count("--slices") >
                              0;
      if (grid_given) throw Error(ErrorCode::InvalidConfig, "--preset cannot be combined with grid flags");
      sim.preset = preset;
    }
    sim.seed = seed;
    if (simulate->count("--reps") > 0) sim.reps = reps;
    sim.timing = !no_timing;
    return cmd_simulate(sim, out, err);
  });
}

}  // namespace mfsda::cli
