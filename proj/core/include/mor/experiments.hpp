#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mor/bvp.hpp"
#include "mor/config.hpp"
#include "mor/reflections.hpp"

namespace mor {

struct ExperimentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind {
  solve,
  reflect,
  triangle_convergence,
  divergence_case,
  distance_sweep,
  projection_demo,
};

ExperimentKind experiment_kind_from(const std::string& name);
std::string to_string(ExperimentKind kind);

/// A parsed experiment description: the raw config plus the settings shared
/// by all experiment kinds. Remaining keys are read by the runners.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::solve;
  ConfigFile file;
  std::uint64_t hash = 0;

  std::filesystem::path out_dir = "out";
  int max_cycles = 100;
  double tol = 1e-10;
  std::uint64_t seed = 201;
  int threads = 1;
  std::string form = "all";  // seq | par | avg | all
  bool expect_divergence = false;

  static ExperimentConfig from_file(const std::filesystem::path& path);
  static ExperimentConfig from_text(const std::string& text);
};

struct RunOutcome {
  int exit_code = 0;
  std::vector<std::string> status_lines;
  std::vector<std::filesystem::path> outputs;
};

/// Execute the experiment and write its CSV outputs. Exit code 0 on
/// completion, 2 when an iteration failed to converge (inverted when the
/// config expects divergence), exceptions for configuration errors.
RunOutcome run_config(const ExperimentConfig& config);

struct PlotData {
  std::filesystem::path data_file;
  std::filesystem::path script_file;
  std::vector<double> slopes;  // log-log fit slopes for sweep data
};

/// Convert a CSV produced by run_config into whitespace-separated data plus
/// a small gnuplot script (log y for error series, log-log with fitted lines
/// for contraction sweeps).
PlotData emit_plotdata(const std::filesystem::path& csv_path);

/// Problem builders shared by the experiments and the acceptance suite.
ProblemSpec make_triangle_problem(double side, double radius,
                                  double container_radius, int n_nodes,
                                  double datum);
ProblemSpec make_divergence_problem(int n_nodes_disk = 128,
                                    int n_nodes_cshape = 256,
                                    int n_nodes_container = 128);
ProblemSpec make_sweep_problem(double gap, double radius, int n_objects,
                               int n_nodes);

/// Per-form outcome of a reflect-style run, used to assemble CSV columns.
struct FormResult {
  std::string form;
  ConvergenceReport report;
};

/// CSV writer with the reproducibility header (config hash, seed, node
/// counts, tolerances); numbers are serialized with 17 significant digits.
void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header_comments,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

std::string format_number(double v);

}  // namespace mor
