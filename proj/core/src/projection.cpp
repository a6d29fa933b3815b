#include "mor/projection.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace mor {

namespace {

constexpr double kRankTol = 1e-10;

Eigen::MatrixXd orthonormal_columns(const Eigen::MatrixXd& a, double tol) {
  if (a.cols() == 0) return Eigen::MatrixXd(a.rows(), 0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double cutoff = tol * std::max(1.0, sv.size() ? sv[0] : 0.0);
  int rank = 0;
  while (rank < sv.size() && sv[rank] > cutoff) ++rank;
  return svd.matrixU().leftCols(rank);
}

double operator_norm(const Eigen::MatrixXd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  return svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
}

// x lies in the intersection iff (I - P_j) x = 0 for every j; stack the
// complements and read the intersection off the nullspace.
Eigen::MatrixXd intersection_from_projectors(
    const std::vector<Eigen::MatrixXd>& projectors) {
  const int n = static_cast<int>(projectors.front().rows());
  Eigen::MatrixXd stacked(static_cast<int>(projectors.size()) * n, n);
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  for (std::size_t j = 0; j < projectors.size(); ++j) {
    stacked.middleRows(static_cast<int>(j) * n, n) = eye - projectors[j];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = kRankTol * std::max(1.0, sv.size() ? sv[0] : 0.0);
  int rank = 0;
  while (rank < sv.size() && sv[rank] > cutoff) ++rank;
  const int null_dim = n - rank;
  if (null_dim == 0) return Eigen::MatrixXd::Zero(n, n);
  const Eigen::MatrixXd basis = svd.matrixV().rightCols(null_dim);
  return basis * basis.transpose();
}

}  // namespace

SubspaceBasis::SubspaceBasis(Eigen::MatrixXd columns) : raw_(std::move(columns)) {
  if (raw_.rows() == 0 || raw_.cols() == 0) {
    throw ProjectionError("subspace basis must be nonempty");
  }
  q_ = orthonormal_columns(raw_, kRankTol);
  if (q_.cols() != raw_.cols()) {
    throw ProjectionError("basis is rank deficient: rank " +
                          std::to_string(q_.cols()) + " of " +
                          std::to_string(raw_.cols()) + " columns");
  }
}

Eigen::MatrixXd orth_projector(const SubspaceBasis& basis) {
  const Eigen::MatrixXd& q = basis.orthonormal();
  return q * q.transpose();
}

bool is_orthogonal_projector(const Eigen::MatrixXd& p, double tol) {
  if (p.rows() != p.cols()) return false;
  const double scale = std::max(1.0, p.norm());
  if ((p * p - p).norm() > tol * scale) return false;
  if ((p - p.transpose()).norm() > tol * scale) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p);
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double ev = es.eigenvalues()[i];
    if (std::abs(ev) > tol && std::abs(ev - 1.0) > tol) return false;
  }
  return true;
}

Eigen::MatrixXd intersection_projector(
    const std::vector<SubspaceBasis>& bases) {
  if (bases.empty()) throw ProjectionError("need at least one subspace");
  const int n = bases.front().ambient_dimension();
  std::vector<Eigen::MatrixXd> projectors;
  for (const auto& b : bases) {
    if (b.ambient_dimension() != n) {
      throw ProjectionError("ambient dimensions disagree");
    }
    projectors.push_back(orth_projector(b));
  }
  return intersection_from_projectors(projectors);
}

ProjectionIterationResult iterate_projections(
    IterationKind kind, const std::vector<Eigen::MatrixXd>& projectors,
    const Eigen::VectorXd& v, int cycles, const std::vector<double>& weights,
    double nu) {
  if (projectors.empty()) throw ProjectionError("need at least one projector");
  const int n = static_cast<int>(v.size());
  for (const auto& p : projectors) {
    if (p.rows() != n || p.cols() != n) {
      throw ProjectionError("projector dimensions disagree with the vector");
    }
  }
  std::vector<double> w = weights;
  if (kind == IterationKind::averaged) {
    if (w.empty()) {
      w.assign(projectors.size(), 1.0 / static_cast<double>(projectors.size()));
    }
    if (w.size() != projectors.size()) {
      throw ProjectionError("one weight per projector required");
    }
    double total = 0.0;
    for (double x : w) {
      if (!(x > 0.0)) throw ProjectionError("weights must be positive");
      total += x;
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw ProjectionError("weights must form a convex combination");
    }
  }

  // Oracle for the error column.
  const Eigen::MatrixXd p_cap = intersection_from_projectors(projectors);
  const Eigen::VectorXd target = p_cap * v;

  ProjectionIterationResult out;
  out.iterates.push_back(v);
  out.errors.push_back((v - target).norm());
  Eigen::VectorXd x = v;
  for (int k = 0; k < cycles; ++k) {
    if (kind == IterationKind::alternating) {
      for (const auto& p : projectors) x = p * x;
    } else if (kind == IterationKind::averaged) {
      Eigen::VectorXd next = Eigen::VectorXd::Zero(n);
      for (std::size_t j = 0; j < projectors.size(); ++j) {
        next += w[j] * (projectors[j] * x);
      }
      x = next;
    } else {
      // x <- x - nu sum_j (I - P_j) x
      Eigen::VectorXd corr = Eigen::VectorXd::Zero(n);
      for (const auto& p : projectors) corr += x - p * x;
      x -= nu * corr;
    }
    out.iterates.push_back(x);
    out.errors.push_back((x - target).norm());
  }
  return out;
}

double friedrichs_cosine(const SubspaceBasis& m1, const SubspaceBasis& m2) {
  const int n = m1.ambient_dimension();
  if (m2.ambient_dimension() != n) {
    throw ProjectionError("ambient dimensions disagree");
  }
  const Eigen::MatrixXd p_cap = intersection_projector({m1, m2});
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd q1 =
      orthonormal_columns((eye - p_cap) * m1.orthonormal(), kRankTol);
  const Eigen::MatrixXd q2 =
      orthonormal_columns((eye - p_cap) * m2.orthonormal(), kRankTol);
  if (q1.cols() == 0 || q2.cols() == 0) return 0.0;
  const double c = operator_norm(q1.transpose() * q2);
  return std::min(c, 1.0);
}

CompositionGap xu_zikatanov_gap(const std::vector<SubspaceBasis>& bases) {
  if (bases.empty()) throw ProjectionError("need at least one subspace");
  const int n = bases.front().ambient_dimension();
  Eigen::MatrixXd composed = Eigen::MatrixXd::Identity(n, n);
  for (const auto& b : bases) composed = orth_projector(b) * composed;
  const Eigen::MatrixXd p_cap = intersection_projector(bases);
  CompositionGap gap;
  const double norm = operator_norm(composed - p_cap);
  gap.lhs = norm * norm;
  gap.c0_implied = gap.lhs / (1.0 - gap.lhs);
  return gap;
}

}  // namespace mor
