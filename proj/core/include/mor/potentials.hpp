#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "mor/geometry.hpp"

namespace mor {

struct PotentialError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class LayerKind { single, double_layer };
enum class TraceKind { value, normal_derivative };

/// Which limit a trace on the source curve itself takes. `interior` is the
/// side the curve encloses, `exterior` the complement, `principal` the
/// jump-free principal value.
enum class Side { interior, exterior, principal };

/// Fundamental solution of -Laplace in 2D and its derivatives.
double fundamental_solution(Vec2 x, Vec2 y);
Vec2 fundamental_gradient_x(Vec2 x, Vec2 y);

/// Nystrom matrix mapping nodal densities on `source` to nodal traces on
/// `target`. When source and target are the same discretized curve the
/// weakly singular/jump behaviour is handled: single-layer values use the
/// spectral log-kernel quadrature, double-layer values and single-layer
/// normal derivatives use the curvature diagonal limit plus the selected
/// side's jump term. The double-layer normal derivative on its own curve is
/// hypersingular and rejected.
Eigen::MatrixXd layer_matrix(const BoundaryCurve& source,
                             const BoundaryCurve& target, LayerKind layer,
                             TraceKind trace, Side side = Side::principal);

/// Matrix mapping nodal densities on `source` to values at arbitrary points
/// (assumed off the curve).
Eigen::MatrixXd evaluation_matrix(const BoundaryCurve& source,
                                  const std::vector<Vec2>& points,
                                  LayerKind layer);

/// As above for the two gradient components.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> gradient_matrices(
    const BoundaryCurve& source, const std::vector<Vec2>& points,
    LayerKind layer);

/// Quadrature weights R_j(t_i) for the periodic log kernel
/// ln(4 sin^2((t-s)/2)); returns the circulant first column.
Eigen::VectorXd log_kernel_weights(int n);

}  // namespace mor
