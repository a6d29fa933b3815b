#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace mor {

struct ProjectionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A linear subspace of R^n given by spanning columns; orthonormalized and
/// rank-checked on construction (tolerance 1e-10 relative).
class SubspaceBasis {
 public:
  explicit SubspaceBasis(Eigen::MatrixXd columns);

  int ambient_dimension() const { return static_cast<int>(q_.rows()); }
  int dimension() const { return static_cast<int>(q_.cols()); }
  const Eigen::MatrixXd& orthonormal() const { return q_; }
  const Eigen::MatrixXd& columns() const { return raw_; }

 private:
  Eigen::MatrixXd raw_;
  Eigen::MatrixXd q_;
};

/// Orthogonal projector onto the span of the basis: Q Q^T.
Eigen::MatrixXd orth_projector(const SubspaceBasis& basis);

/// Validate projector invariants (idempotent, symmetric, 0/1 spectrum).
bool is_orthogonal_projector(const Eigen::MatrixXd& p, double tol = 1e-10);

/// Projector onto the intersection of the subspaces, computed directly from
/// the nullspace of the stacked complement constraints (the brute-force
/// oracle, independent of any iteration).
Eigen::MatrixXd intersection_projector(const std::vector<SubspaceBasis>& bases);

enum class IterationKind { alternating, averaged, relaxed };

struct ProjectionIterationResult {
  std::vector<Eigen::VectorXd> iterates;  // v_0 .. v_k
  std::vector<double> errors;             // ||v_j - P_cap v||
};

/// Run k cycles of composed/averaged/relaxed projections from v and report
/// the error against the intersection oracle after each cycle. `weights`
/// must form a convex combination for the averaged kind; `nu` is the
/// relaxation factor for the relaxed kind (operator (1-nu) I + nu (2A - I)
/// is not used here; relaxed means I - nu sum(I - P_j)).
ProjectionIterationResult iterate_projections(
    IterationKind kind, const std::vector<Eigen::MatrixXd>& projectors,
    const Eigen::VectorXd& v, int cycles,
    const std::vector<double>& weights = {}, double nu = 1.0);

/// Cosine of the angle between two subspaces with the intersection removed:
/// the largest singular value of Q1^T Q2 after projecting both bases to the
/// orthogonal complement of M1 cap M2. Returns 0 when either restricted
/// space is trivial.
double friedrichs_cosine(const SubspaceBasis& m1, const SubspaceBasis& m2);

struct CompositionGap {
  double lhs = 0.0;         // ||P_N ... P_1 - P_cap||^2
  double c0_implied = 0.0;  // lhs / (1 - lhs)
};

/// Operator-norm gap of the composed projectors against the intersection
/// projector, and the constant implied by the identity lhs = c0/(1+c0).
CompositionGap xu_zikatanov_gap(const std::vector<SubspaceBasis>& bases);

}  // namespace mor
