#include "mor/geometry.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>

namespace mor {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t next_curve_id() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1);
}

double wrap_param(double t) {
  t = std::fmod(t, kTwoPi);
  if (t < 0) t += kTwoPi;
  return t;
}

}  // namespace

double Vec2::norm() const { return std::hypot(x, y); }

BoundaryCurve::BoundaryCurve(Parametrization f, int n_nodes,
                             bool counterclockwise, std::string name)
    : param_(std::move(f)), ccw_(counterclockwise), id_(next_curve_id()),
      name_(std::move(name)) {
  if (n_nodes < 16 || n_nodes % 2 != 0) {
    throw GeometryError("node count must be even and >= 16, got " +
                        std::to_string(n_nodes));
  }
  step_ = kTwoPi / n_nodes;
  nodes_.resize(n_nodes);
  tangents_.resize(n_nodes);
  normals_.resize(n_nodes);
  jacobians_.resize(n_nodes);
  curvatures_.resize(n_nodes);
  for (int i = 0; i < n_nodes; ++i) {
    Vec2 pos, d1, d2;
    param_(step_ * i, pos, d1, d2);
    const double jac = d1.norm();
    if (!(jac > 0.0)) {
      throw GeometryError("degenerate parametrization: |x'(t)| = 0 at node " +
                          std::to_string(i));
    }
    nodes_[i] = pos;
    tangents_[i] = d1;
    jacobians_[i] = jac;
    // Outward normal of a counterclockwise curve: rotate the tangent by -pi/2.
    normals_[i] = Vec2{d1.y, -d1.x} / jac;
    curvatures_[i] = d1.cross(d2) / (jac * jac * jac);
  }
}

Vec2 BoundaryCurve::position(double t) const {
  Vec2 pos, d1, d2;
  param_(wrap_param(t), pos, d1, d2);
  return pos;
}

double BoundaryCurve::perimeter() const {
  double sum = 0.0;
  for (int i = 0; i < size(); ++i) sum += weight(i);
  return sum;
}

BoundaryCurve BoundaryCurve::reversed() const {
  BoundaryCurve r;
  const int n = size();
  r.nodes_.resize(n);
  r.tangents_.resize(n);
  r.normals_.resize(n);
  r.jacobians_.resize(n);
  r.curvatures_.resize(n);
  for (int i = 0; i < n; ++i) {
    const int j = (n - i) % n;
    r.nodes_[i] = nodes_[j];
    r.tangents_[i] = -tangents_[j];
    r.normals_[i] = -normals_[j];
    r.jacobians_[i] = jacobians_[j];
    r.curvatures_[i] = -curvatures_[j];
  }
  Parametrization f = param_;
  r.param_ = [f](double t, Vec2& pos, Vec2& d1, Vec2& d2) {
    f(wrap_param(kTwoPi - t), pos, d1, d2);
    d1 = -d1;
  };
  r.step_ = step_;
  r.ccw_ = !ccw_;
  r.id_ = next_curve_id();
  r.name_ = name_.empty() ? std::string{} : name_ + "_reversed";
  return r;
}

BoundaryCurve make_circle(Vec2 center, double radius, int n_nodes,
                          std::string name) {
  if (!(radius > 0.0)) {
    throw GeometryError("circle radius must be positive, got " +
                        std::to_string(radius));
  }
  auto f = [center, radius](double t, Vec2& pos, Vec2& d1, Vec2& d2) {
    const double c = std::cos(t), s = std::sin(t);
    pos = {center.x + radius * c, center.y + radius * s};
    d1 = {-radius * s, radius * c};
    d2 = {-radius * c, -radius * s};
  };
  return BoundaryCurve(f, n_nodes, /*counterclockwise=*/true, std::move(name));
}

namespace {

// One circular-arc piece of the composite C-shape, with the parameter range
// [t0, t1] mapped affinely to the angle range [phi0, phi1]. Evaluation is
// valid outside the nominal range, which the junction blending relies on.
struct ArcPiece {
  Vec2 center;
  double radius;
  double t0, t1;
  double phi0, phi1;

  void eval(double t, Vec2& pos, Vec2& d1, Vec2& d2) const {
    const double rate = (phi1 - phi0) / (t1 - t0);
    const double phi = phi0 + (t - t0) * rate;
    const double c = std::cos(phi), s = std::sin(phi);
    pos = {center.x + radius * c, center.y + radius * s};
    d1 = Vec2{-radius * s, radius * c} * rate;
    d2 = Vec2{-radius * c, -radius * s} * (rate * rate);
  }
};

// Quintic smoothstep: C2 at both window ends.
void smoothstep(double u, double inv_w, double& s, double& s1, double& s2) {
  s = u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
  s1 = 30.0 * u * u * (1.0 + u * (-2.0 + u)) * inv_w;
  s2 = 60.0 * u * (1.0 + u * (-3.0 + 2.0 * u)) * inv_w * inv_w;
}

}  // namespace

BoundaryCurve make_cshape(Vec2 center, double r_inner, double r_outer,
                          double opening_half_angle, int n_nodes,
                          double blend_width, std::string name) {
  if (!(r_inner > 0.0) || !(r_outer > r_inner)) {
    throw GeometryError("cshape requires 0 < r_inner < r_outer");
  }
  if (!(opening_half_angle > 0.0) ||
      !(opening_half_angle < std::numbers::pi / 2)) {
    throw GeometryError("cshape opening half-angle must lie in (0, pi/2)");
  }
  const double alpha = opening_half_angle;
  const double rho = 0.5 * (r_outer - r_inner);   // cap radius
  const double mid = 0.5 * (r_outer + r_inner);   // cap centre radius
  const double span = kTwoPi - 2.0 * alpha;

  const double len_outer = r_outer * span;
  const double len_inner = r_inner * span;
  const double len_cap = std::numbers::pi * rho;
  const double total = len_outer + len_inner + 2.0 * len_cap;

  // Parameter breaks proportional to arc length; |x'(t)| is then the constant
  // total/2pi on every piece, so the unblended curve is already C1.
  const double t1 = kTwoPi * len_outer / total;
  const double t2 = t1 + kTwoPi * len_cap / total;
  const double t3 = t2 + kTwoPi * len_inner / total;

  const double theta_end = kTwoPi - alpha;
  std::vector<ArcPiece> pieces = {
      // outer arc, alpha -> 2pi - alpha
      {center, r_outer, 0.0, t1, alpha, theta_end},
      // cap at the trailing lip
      {center + mid * Vec2{std::cos(theta_end), std::sin(theta_end)}, rho, t1,
       t2, theta_end, theta_end + std::numbers::pi},
      // inner arc traversed backwards
      {center, r_inner, t2, t3, theta_end, alpha},
      // cap at the leading lip, closing the loop
      {center + mid * Vec2{std::cos(alpha), std::sin(alpha)}, rho, t3, kTwoPi,
       alpha - std::numbers::pi, alpha}};

  const double w = blend_width * kTwoPi;
  const double shortest = std::min({t1, t2 - t1, t3 - t2, kTwoPi - t3});
  if (!(w > 0.0) || w >= shortest) {
    throw GeometryError("cshape blend window too wide for the cap pieces");
  }

  const double breaks[4] = {0.0, t1, t2, t3};
  auto f = [pieces, breaks = std::array<double, 4>{breaks[0], breaks[1],
                                                   breaks[2], breaks[3]},
            w](double t, Vec2& pos, Vec2& d1, Vec2& d2) {
    // Locate a junction window around any of the four breaks.
    for (int j = 0; j < 4; ++j) {
      double dt = t - breaks[j];
      if (dt > std::numbers::pi) dt -= kTwoPi;
      if (dt < -std::numbers::pi) dt += kTwoPi;
      if (std::abs(dt) <= 0.5 * w) {
        const ArcPiece& prev = pieces[(j + 3) % 4];
        const ArcPiece& next = pieces[j];
        // Evaluate both pieces on a branch of t contiguous with their range.
        const double tp = breaks[j] + dt;
        Vec2 pa, va, aa, pb, vb, ab;
        prev.eval(j == 0 ? tp + kTwoPi : tp, pa, va, aa);
        next.eval(tp, pb, vb, ab);
        double s, s1, s2;
        smoothstep((dt + 0.5 * w) / w, 1.0 / w, s, s1, s2);
        pos = pa + s * (pb - pa);
        d1 = va + s1 * (pb - pa) + s * (vb - va);
        d2 = aa + s2 * (pb - pa) + 2.0 * s1 * (vb - va) + s * (ab - aa);
        return;
      }
    }
    int j = 3;
    while (j > 0 && t < breaks[j]) --j;
    pieces[j].eval(t, pos, d1, d2);
  };
  return BoundaryCurve(f, n_nodes, /*counterclockwise=*/true, std::move(name));
}

double golden_section_min(const std::function<double(double)>& f, double a,
                          double b, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

int winding_number(const BoundaryCurve& curve, Vec2 p) {
  double angle = 0.0;
  const int n = curve.size();
  for (int i = 0; i < n; ++i) {
    const Vec2 a = curve.node(i) - p;
    const Vec2 b = curve.node((i + 1) % n) - p;
    angle += std::atan2(a.cross(b), a.dot(b));
  }
  return static_cast<int>(std::lround(angle / kTwoPi));
}

double point_curve_distance(const BoundaryCurve& curve, Vec2 p) {
  const int n = curve.size();
  int best = 0;
  double best_d2 = (curve.node(0) - p).squared_norm();
  for (int i = 1; i < n; ++i) {
    const double d2 = (curve.node(i) - p).squared_norm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  const double h = curve.param_step();
  const double t0 = h * best;
  auto dist = [&](double t) { return (curve.position(t) - p).norm(); };
  const double t = golden_section_min(dist, t0 - h, t0 + h);
  return dist(t);
}

double curve_curve_distance(const BoundaryCurve& a, const BoundaryCurve& b) {
  int bi = 0, bj = 0;
  double best = (a.node(0) - b.node(0)).squared_norm();
  for (int i = 0; i < a.size(); ++i) {
    for (int j = 0; j < b.size(); ++j) {
      const double d2 = (a.node(i) - b.node(j)).squared_norm();
      if (d2 < best) {
        best = d2;
        bi = i;
        bj = j;
      }
    }
  }
  double ta = a.param_step() * bi;
  double tb = b.param_step() * bj;
  // Alternate one-dimensional refinements around the node-pair minimum.
  for (int round = 0; round < 4; ++round) {
    const Vec2 q = b.position(tb);
    ta = golden_section_min(
        [&](double t) { return (a.position(t) - q).norm(); },
        ta - a.param_step(), ta + a.param_step());
    const Vec2 r = a.position(ta);
    tb = golden_section_min(
        [&](double t) { return (b.position(t) - r).norm(); },
        tb - b.param_step(), tb + b.param_step());
  }
  return (a.position(ta) - b.position(tb)).norm();
}

LayoutMetrics layout_metrics(const GeometryLayout& layout) {
  const int n = layout.object_count();
  LayoutMetrics m;
  m.pair_distance.assign(n, std::vector<double>(n, 0.0));
  m.perimeter.resize(n);
  for (int i = 0; i < n; ++i) m.perimeter[i] = layout.object(i).perimeter();

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d = curve_curve_distance(layout.object(i), layout.object(j));
      const bool separated =
          d > 0.0 &&
          winding_number(layout.object(j), layout.object(i).node(0)) == 0 &&
          winding_number(layout.object(i), layout.object(j).node(0)) == 0;
      if (!separated) {
        std::ostringstream msg;
        msg << "objects " << i << " and " << j
            << " overlap or touch (min distance " << d << ")";
        throw GeometryError(msg.str());
      }
      m.pair_distance[i][j] = d;
      m.pair_distance[j][i] = d;
    }
  }

  if (layout.has_container()) {
    m.container_distance.resize(n);
    for (int i = 0; i < n; ++i) {
      const BoundaryCurve& obj = layout.object(i);
      for (int k = 0; k < obj.size(); ++k) {
        if (winding_number(layout.container(), obj.node(k)) != 1) {
          throw GeometryError("object " + std::to_string(i) +
                              " is not strictly inside the container");
        }
      }
      const double d = curve_curve_distance(obj, layout.container());
      if (!(d > 0.0)) {
        throw GeometryError("object " + std::to_string(i) +
                            " touches the container boundary");
      }
      m.container_distance[i] = d;
    }
  }
  return m;
}

}  // namespace mor
