#include "mor/potentials.hpp"

#include <cmath>
#include <numbers>

namespace mor {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInvTwoPi = 1.0 / kTwoPi;

bool same_discretization(const BoundaryCurve& a, const BoundaryCurve& b) {
  return a.id() == b.id() && a.size() == b.size();
}

}  // namespace

double fundamental_solution(Vec2 x, Vec2 y) {
  return -kInvTwoPi * std::log((x - y).norm());
}

Vec2 fundamental_gradient_x(Vec2 x, Vec2 y) {
  const Vec2 d = x - y;
  return d * (-kInvTwoPi / d.squared_norm());
}

Eigen::VectorXd log_kernel_weights(int n) {
  // Trigonometric quadrature for int_0^2pi f(s) ln(4 sin^2((t-s)/2)) ds on n
  // equispaced nodes, exact for trigonometric polynomials up to degree n/2.
  Eigen::VectorXd r(n);
  const int half = n / 2;
  for (int k = 0; k < n; ++k) {
    const double d = kTwoPi * k / n;
    double sum = 0.0;
    for (int m = 1; m < half; ++m) sum += std::cos(m * d) / m;
    r[k] = -(2.0 * kTwoPi / n) * sum -
           (kTwoPi / (n * static_cast<double>(half))) * std::cos(half * d);
  }
  return r;
}

namespace {

Eigen::MatrixXd single_layer_self_value(const BoundaryCurve& c) {
  const int n = c.size();
  const Eigen::VectorXd r = log_kernel_weights(n);
  const double h = c.param_step();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      // Split ln|x(t)-x(s)|^2 into the periodic log kernel and a smooth
      // remainder whose diagonal limit is ln|x'(t)|^2.
      double smooth;
      if (i == j) {
        smooth = 2.0 * std::log(c.jacobian(i));
      } else {
        const double d2 = (c.node(i) - c.node(j)).squared_norm();
        const double ss = 2.0 * std::sin(0.5 * h * (i - j));
        smooth = std::log(d2 / (ss * ss));
      }
      const double logpart = r[(i - j + n) % n];
      m(i, j) = -0.5 * kInvTwoPi * (logpart + h * smooth) * c.jacobian(j);
    }
  }
  return m;
}

// Principal-value double-layer value trace / single-layer normal-derivative
// trace on the source curve itself; both share the curvature diagonal.
Eigen::MatrixXd self_pv(const BoundaryCurve& c, TraceKind trace) {
  const int n = c.size();
  const double h = c.param_step();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double kernel;
      if (i == j) {
        // Shared continuous limit of both weakly singular kernels.
        kernel = 0.5 * c.curvature(i);
      } else {
        const Vec2 d = c.node(j) - c.node(i);
        const double r2 = d.squared_norm();
        kernel = (trace == TraceKind::value) ? c.normal(j).dot(d) / r2
                                             : -c.normal(i).dot(d) / r2;
      }
      m(i, j) = -kInvTwoPi * kernel * h * c.jacobian(j);
    }
  }
  return m;
}

}  // namespace

Eigen::MatrixXd layer_matrix(const BoundaryCurve& source,
                             const BoundaryCurve& target, LayerKind layer,
                             TraceKind trace, Side side) {
  const int ns = source.size();
  const int nt = target.size();

  if (same_discretization(source, target)) {
    if (layer == LayerKind::double_layer &&
        trace == TraceKind::normal_derivative) {
      throw PotentialError(
          "hypersingular trace (normal derivative of a double layer on its "
          "own curve) is not supported");
    }
    if (layer == LayerKind::single && trace == TraceKind::value) {
      return single_layer_self_value(source);
    }
    Eigen::MatrixXd m = self_pv(source, trace);
    if (side != Side::principal) {
      // Jump relations: value of a double layer and normal derivative of a
      // single layer jump by +-1/2 across the curve.
      double jump;
      if (layer == LayerKind::double_layer) {
        jump = (side == Side::interior) ? -0.5 : 0.5;
      } else {
        jump = (side == Side::interior) ? 0.5 : -0.5;
      }
      m.diagonal().array() += jump;
    }
    return m;
  }

  const double h = source.param_step();
  Eigen::MatrixXd m(nt, ns);
  for (int i = 0; i < nt; ++i) {
    const Vec2 x = target.node(i);
    for (int j = 0; j < ns; ++j) {
      const Vec2 y = source.node(j);
      double kernel;
      if (layer == LayerKind::single) {
        if (trace == TraceKind::value) {
          kernel = -std::log((x - y).norm());
        } else {
          const Vec2 d = x - y;
          kernel = -target.normal(i).dot(d) / d.squared_norm();
        }
      } else {
        const Vec2 d = y - x;
        const double r2 = d.squared_norm();
        if (trace == TraceKind::value) {
          kernel = -source.normal(j).dot(d) / r2;
        } else {
          // grad_x of the double-layer kernel, dotted with the target normal.
          const Vec2 ny = source.normal(j);
          const Vec2 g = (2.0 * ny.dot(d) / (r2 * r2)) * d - ny / r2;
          kernel = -target.normal(i).dot(g);
        }
      }
      m(i, j) = kInvTwoPi * kernel * h * source.jacobian(j);
    }
  }
  return m;
}

Eigen::MatrixXd evaluation_matrix(const BoundaryCurve& source,
                                  const std::vector<Vec2>& points,
                                  LayerKind layer) {
  const int ns = source.size();
  const int np = static_cast<int>(points.size());
  const double h = source.param_step();
  Eigen::MatrixXd m(np, ns);
  for (int i = 0; i < np; ++i) {
    for (int j = 0; j < ns; ++j) {
      const Vec2 y = source.node(j);
      double kernel;
      if (layer == LayerKind::single) {
        kernel = -std::log((points[i] - y).norm());
      } else {
        const Vec2 d = y - points[i];
        kernel = -source.normal(j).dot(d) / d.squared_norm();
      }
      m(i, j) = kInvTwoPi * kernel * h * source.jacobian(j);
    }
  }
  return m;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> gradient_matrices(
    const BoundaryCurve& source, const std::vector<Vec2>& points,
    LayerKind layer) {
  const int ns = source.size();
  const int np = static_cast<int>(points.size());
  const double h = source.param_step();
  Eigen::MatrixXd gx(np, ns), gy(np, ns);
  for (int i = 0; i < np; ++i) {
    for (int j = 0; j < ns; ++j) {
      const Vec2 y = source.node(j);
      Vec2 g;
      if (layer == LayerKind::single) {
        g = fundamental_gradient_x(points[i], y) * kTwoPi;
      } else {
        const Vec2 d = points[i] - y;
        const double r2 = d.squared_norm();
        const Vec2 ny = source.normal(j);
        g = ny / r2 - (2.0 * ny.dot(d) / (r2 * r2)) * d;
      }
      const double scale = kInvTwoPi * h * source.jacobian(j);
      gx(i, j) = g.x * scale;
      gy(i, j) = g.y * scale;
    }
  }
  return {gx, gy};
}

}  // namespace mor
