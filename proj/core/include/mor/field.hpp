#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mor/geometry.hpp"
#include "mor/potentials.hpp"

namespace mor {

struct FieldError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Index of a carrier curve within a layout: kContainer or an object index.
constexpr int kContainer = -1;

struct LayerDensity {
  int curve = 0;  // kContainer or object index
  LayerKind kind = LayerKind::single;
  Eigen::VectorXd values;

  /// Far-field charge carried by this density: the flux of the induced field
  /// through any enclosing circle. Zero for double layers.
  double charge(const BoundaryCurve& carrier) const;
};

struct PointSource {
  Vec2 location;
  double strength = 0.0;  // field strength * fundamental solution
};

/// Optional particular solution added to the layer representation (used to
/// carry a nonzero volume source); both value and gradient are required.
struct ParticularSolution {
  std::function<double(Vec2)> value;
  std::function<Vec2(Vec2)> gradient;
};

struct FieldEvaluation {
  Eigen::VectorXd values;          // or one gradient component per column
  Eigen::MatrixXd gradients;       // n x 2, filled when gradients requested
  std::vector<bool> near_boundary; // per-point warning flags
};

/// A harmonic function represented by layer densities over the curves of one
/// layout, optional interior point sources and an optional particular part.
class HarmonicField {
 public:
  HarmonicField() = default;
  explicit HarmonicField(std::shared_ptr<const GeometryLayout> layout,
                         std::string label = {})
      : layout_(std::move(layout)), label_(std::move(label)) {}

  const std::shared_ptr<const GeometryLayout>& layout() const {
    return layout_;
  }
  const std::string& label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  void add_density(LayerDensity density);
  void add_point_source(PointSource source) {
    sources_.push_back(std::move(source));
  }
  void set_particular(ParticularSolution part) { particular_ = std::move(part); }

  const std::vector<LayerDensity>& densities() const { return densities_; }
  const std::vector<PointSource>& point_sources() const { return sources_; }
  const std::optional<ParticularSolution>& particular() const {
    return particular_;
  }

  bool empty() const { return densities_.empty() && sources_.empty(); }

  const BoundaryCurve& carrier(int curve_index) const;

  /// Sum of far-field charges over all components.
  double total_charge() const;

  double value(Vec2 p) const;
  Vec2 gradient(Vec2 p) const;

  /// Merge another field over the same layout, scaled.
  void accumulate(const HarmonicField& other, double scale = 1.0);

 private:
  std::shared_ptr<const GeometryLayout> layout_;
  std::vector<LayerDensity> densities_;
  std::vector<PointSource> sources_;
  std::optional<ParticularSolution> particular_;
  std::string label_;
};

/// Evaluate a field at a batch of points. Points on a carrier curve raise
/// FieldError; points closer than one local node spacing are flagged.
FieldEvaluation evaluate_field(const HarmonicField& field,
                               const std::vector<Vec2>& points,
                               bool want_gradient = false);

/// Discrete flux of a field through a probe circle (by trapezoidal quadrature
/// of the normal derivative).
double probe_flux(const HarmonicField& field, Vec2 center, double radius,
                  int n_quad = 256);

}  // namespace mor
