#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mor {

struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator-() const { return {-x, -y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double cross(Vec2 o) const { return x * o.y - y * o.x; }
  double norm() const;
  double squared_norm() const { return x * x + y * y; }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

/// Smooth closed curve sampled at n equispaced parameter values on [0, 2pi).
/// Nodes carry the first two parametric derivatives, outward unit normals
/// (for counterclockwise orientation the enclosed region is on the left) and
/// signed curvature. Immutable after construction.
class BoundaryCurve {
 public:
  // f(t, pos, d1, d2) evaluates position and first two derivatives.
  using Parametrization = std::function<void(double, Vec2&, Vec2&, Vec2&)>;

  BoundaryCurve(Parametrization f, int n_nodes, bool counterclockwise,
                std::string name = {});

  int size() const { return static_cast<int>(nodes_.size()); }
  double param_step() const { return step_; }
  std::uint64_t id() const { return id_; }
  const std::string& name() const { return name_; }

  Vec2 node(int i) const { return nodes_[i]; }
  Vec2 tangent(int i) const { return tangents_[i]; }      // x'(t_i)
  Vec2 normal(int i) const { return normals_[i]; }        // unit, outward
  double jacobian(int i) const { return jacobians_[i]; }  // |x'(t_i)|
  double curvature(int i) const { return curvatures_[i]; }
  /// Quadrature weight for arc-length integrals: (2pi/n) |x'(t_i)|.
  double weight(int i) const { return step_ * jacobians_[i]; }

  const std::vector<Vec2>& nodes() const { return nodes_; }
  bool counterclockwise() const { return ccw_; }

  Vec2 position(double t) const;
  double perimeter() const;

  /// Same node set traversed the other way; normals are exact negations.
  BoundaryCurve reversed() const;

 private:
  BoundaryCurve() = default;

  Parametrization param_;
  std::vector<Vec2> nodes_, tangents_, normals_;
  std::vector<double> jacobians_, curvatures_;
  double step_ = 0.0;
  bool ccw_ = true;
  std::uint64_t id_ = 0;
  std::string name_;
};

BoundaryCurve make_circle(Vec2 center, double radius, int n_nodes,
                          std::string name = {});

/// Annular arc of opening half-angle `opening_half_angle` around the positive
/// x-axis, capped by two semicircles; the four junctions are smoothed by a C2
/// blend over a parameter window of width `blend_width` (relative to 2pi).
BoundaryCurve make_cshape(Vec2 center, double r_inner, double r_outer,
                          double opening_half_angle, int n_nodes,
                          double blend_width = 0.05, std::string name = {});

/// Container (optional) plus ordered objects. Curves are stored by value and
/// never mutated, so references into a layout stay valid for its lifetime.
class GeometryLayout {
 public:
  GeometryLayout() = default;
  GeometryLayout(std::optional<BoundaryCurve> container,
                 std::vector<BoundaryCurve> objects)
      : container_(std::move(container)), objects_(std::move(objects)) {}

  bool has_container() const { return container_.has_value(); }
  const BoundaryCurve& container() const { return *container_; }
  const std::vector<BoundaryCurve>& objects() const { return objects_; }
  const BoundaryCurve& object(int i) const { return objects_[i]; }
  int object_count() const { return static_cast<int>(objects_.size()); }

 private:
  std::optional<BoundaryCurve> container_;
  std::vector<BoundaryCurve> objects_;
};

struct LayoutMetrics {
  std::vector<std::vector<double>> pair_distance;  // symmetric, 0 on diagonal
  std::vector<double> perimeter;
  std::vector<double> container_distance;  // empty when no container
};

/// Pairwise minimal distances (node minimum refined by golden-section search),
/// discrete perimeters, and disjointness checks. Throws GeometryError naming
/// the offending pair when objects overlap or an object escapes the container.
LayoutMetrics layout_metrics(const GeometryLayout& layout);

/// Winding number of the curve around p (p off the curve).
int winding_number(const BoundaryCurve& curve, Vec2 p);

/// Distance from p to the curve, refined past the node spacing.
double point_curve_distance(const BoundaryCurve& curve, Vec2 p);

/// Minimal distance between two disjoint curves.
double curve_curve_distance(const BoundaryCurve& a, const BoundaryCurve& b);

/// Minimizer of a unimodal function on [a, b] by golden-section search.
double golden_section_min(const std::function<double(double)>& f, double a,
                          double b, double tol = 1e-12);

}  // namespace mor
