#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "mor/field.hpp"
#include "mor/geometry.hpp"
#include "mor/potentials.hpp"

namespace mor {

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DirichletCondition {
  Eigen::VectorXd values;  // nodal trace data
};
struct NeumannCondition {
  Eigen::VectorXd values;  // nodal normal-derivative data
};
/// Equivalued-surface condition: the trace is an unknown constant and the
/// total flux through the boundary is prescribed.
struct FourthTypeCondition {
  double total_flux = 0.0;
};

using BoundaryCondition =
    std::variant<DirichletCondition, NeumannCondition, FourthTypeCondition>;

/// A boundary value problem for -Laplace on a perforated domain. With a
/// container the outer condition is the homogeneous Dirichlet trace; without
/// one the problem is exterior and the field is normalized to decay.
struct ProblemSpec {
  std::shared_ptr<const GeometryLayout> layout;
  std::vector<BoundaryCondition> conditions;
  std::optional<ParticularSolution> particular;

  void validate() const;
  bool exterior() const { return !layout->has_container(); }
};

struct DirectSolution {
  HarmonicField field;
  /// Surface constants c_j for fourth-type objects, empty otherwise.
  std::vector<std::optional<double>> constants;
  /// Max-norm residual of the boundary equations, per object.
  std::vector<double> residuals;
  double condition_estimate = 0.0;
};

/// Solve the fully coupled problem over all curves by dense LU. Throws
/// SolverError with a diagnosis when the discrete system is singular.
DirectSolution solve_direct(const ProblemSpec& problem);

/// Right-hand side of a single-object subproblem; `nodal` matches the
/// object's condition kind and `flux` is used for fourth-type objects.
struct OneObjectRhs {
  Eigen::VectorXd nodal;
  double flux = 0.0;
};

/// Factorized solver for the subproblem involving one object (and the
/// container when present); reusable across many right-hand sides.
class OneObjectSolver {
 public:
  OneObjectSolver(const ProblemSpec& problem, int object_index);
  ~OneObjectSolver();
  OneObjectSolver(OneObjectSolver&&) noexcept;
  OneObjectSolver& operator=(OneObjectSolver&&) noexcept;

  HarmonicField solve(const OneObjectRhs& rhs) const;
  int object_index() const;
  double condition_estimate() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

HarmonicField solve_one_object(const ProblemSpec& problem, int object_index,
                               const OneObjectRhs& rhs);

/// Initial approximation: satisfies the field equation and the container
/// condition, plus the prescribed total fluxes of fourth-type objects
/// (realized as a sum of one-object solves). Zero data yield the zero field.
HarmonicField solve_initial(const ProblemSpec& problem);

/// Trace of a field on a layout curve taken from the fluid side
/// (exterior of objects, interior of the container).
Eigen::VectorXd field_value_trace(const HarmonicField& field,
                                  const GeometryLayout& layout,
                                  int curve_index);
Eigen::VectorXd field_normal_trace(const HarmonicField& field,
                                   const GeometryLayout& layout,
                                   int curve_index);

/// Discrete flux of a field through an object boundary, by quadrature of the
/// fluid-side normal-derivative trace.
double boundary_flux(const HarmonicField& field, const GeometryLayout& layout,
                     int object_index);

/// Deterministic point strictly inside a closed curve.
Vec2 find_interior_anchor(const BoundaryCurve& curve);

}  // namespace mor
