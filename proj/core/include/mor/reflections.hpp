#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mor/bvp.hpp"
#include "mor/field.hpp"
#include "mor/geometry.hpp"

namespace mor {

struct ReflectionsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Iteration form. The parallel form is the relaxed form with factor 1 and
/// shares its code path, so the two produce bitwise-identical iterates.
struct ReflectionForm {
  enum class Kind { sequential, parallel, relaxed_parallel };
  Kind kind = Kind::sequential;
  double relaxation = 1.0;  // nu, in (0, 1]

  static ReflectionForm sequential() { return {Kind::sequential, 1.0}; }
  static ReflectionForm parallel() { return {Kind::parallel, 1.0}; }
  static ReflectionForm relaxed(double nu);
  static ReflectionForm averaged(int n_objects);

  bool is_sequential() const { return kind == Kind::sequential; }
  double nu() const { return is_sequential() ? 1.0 : relaxation; }
  std::string name() const;
};

enum class RunStatus { converged, diverged, max_cycles };

std::string to_string(RunStatus status);

/// One cycle of the iteration: the unscaled reflections solved during the
/// cycle (object order), the accumulated approximation after the update, the
/// per-object correction-identity residuals and the error metric value.
struct CycleRecord {
  std::vector<HarmonicField> reflections;
  HarmonicField accumulated;
  Eigen::VectorXd correction_residuals;
  double error = 0.0;
};

struct ReflectionTrace {
  std::shared_ptr<const GeometryLayout> layout;
  std::vector<BoundaryCondition> conditions;
  bool sequential = false;
  double relaxation = 1.0;
  HarmonicField initial;
  double initial_error = 0.0;
  std::vector<CycleRecord> cycles;  // cycle k stored at index k-1
  int dropped_cycles = 0;           // cycles beyond the memory cap
};

struct ConvergenceReport {
  RunStatus status = RunStatus::max_cycles;
  int cycles = 0;
  double final_error = 0.0;
  /// Fitted per-cycle contraction factor and fit residual (NaN if the error
  /// series was too short to fit).
  double contraction = 0.0;
  double contraction_fit_residual = 0.0;
  std::vector<double> errors;  // errors[k] is the error after cycle k
};

struct ReflectionOptions {
  int max_cycles = 100;
  double tol = 1e-10;
  double divergence_threshold = 1e20;
  int thread_count = 1;
  /// Cycles whose reflections/snapshots are retained in the trace; later
  /// cycles are compacted into the running per-curve density sums only.
  int stored_cycles = 4096;
  int probe_count = 200;
  std::uint64_t probe_seed = 201;
  /// Error metric: against a solve_direct reference (default) or, when
  /// false and no reference is supplied, the per-cycle increment norm.
  bool use_reference = true;
};

/// Deterministic probe cloud in the fluid region, kept away from all curves.
std::vector<Vec2> make_probe_cloud(const GeometryLayout& layout, int count,
                                   std::uint64_t seed);

/// The method-of-reflections driver. Precomputes the one-object solvers, the
/// cross-curve trace operators and the probe evaluation matrices once, then
/// runs any number of iterations over them.
class ReflectionEngine {
 public:
  ReflectionEngine(const ProblemSpec& problem, ReflectionOptions options = {});
  ~ReflectionEngine();
  ReflectionEngine(ReflectionEngine&&) noexcept;

  /// Supply a reference field (otherwise solve_direct is used on demand).
  void set_reference(HarmonicField reference);
  const HarmonicField* reference() const;
  const std::vector<Vec2>& probe_points() const;

  std::pair<ReflectionTrace, ConvergenceReport> run(const ReflectionForm& form);

  Eigen::VectorXd evaluate_on_probes(const HarmonicField& field) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::pair<ReflectionTrace, ConvergenceReport> run_reflections(
    const ProblemSpec& problem, const ReflectionForm& form, int max_cycles,
    double tol, const HarmonicField* reference = nullptr,
    ReflectionOptions options = {});

/// Recompute the correction-identity residual for cycle k of a stored trace
/// from its snapshots (relative to the magnitude of the traces involved).
Eigen::VectorXd correction_residual(const ReflectionTrace& trace, int cycle);

struct ContractionEstimate {
  double factor = 0.0;
  double fit_residual = 0.0;
  int cycles_used = 0;
};

/// Least-squares fit of log(error) against the cycle index. Requires at
/// least `min_cycles` usable points after discarding the leading `discard`
/// cycles (errors at or below `floor` are unusable).
ContractionEstimate estimate_contraction(const ConvergenceReport& report,
                                         int discard, double floor = 1e-13,
                                         int min_cycles = 8);

struct KappaCertificate {
  Eigen::MatrixXd kappa;   // kappa_{i,j}, zero diagonal
  double kappa_max = 0.0;  // kappa(N)
  double product = 0.0;    // N(N-1) kappa(N)
  bool satisfied = false;
};

/// Pairwise bound entering the sufficient convergence condition.
double kappa_pair(double surface_i, double surface_j, double c_i, double d);

/// Evaluate the sufficient-condition certificate N(N-1) kappa(N) < 1 over a
/// layout. The constants must satisfy C_i >= 1.
KappaCertificate kappa_criterion(const GeometryLayout& layout,
                                 const std::vector<double>& constants);

}  // namespace mor
