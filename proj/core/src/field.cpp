#include "mor/field.hpp"

#include <cmath>
#include <numbers>

namespace mor {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double LayerDensity::charge(const BoundaryCurve& carrier) const {
  if (kind == LayerKind::double_layer) return 0.0;
  double total = 0.0;
  for (int i = 0; i < carrier.size(); ++i) total += values[i] * carrier.weight(i);
  return -total;
}

void HarmonicField::add_density(LayerDensity density) {
  const BoundaryCurve& c = carrier(density.curve);
  if (density.values.size() != c.size()) {
    throw FieldError("density length does not match curve node count");
  }
  for (auto& existing : densities_) {
    if (existing.curve == density.curve && existing.kind == density.kind) {
      existing.values += density.values;
      return;
    }
  }
  densities_.push_back(std::move(density));
}

const BoundaryCurve& HarmonicField::carrier(int curve_index) const {
  if (curve_index == kContainer) return layout_->container();
  return layout_->object(curve_index);
}

double HarmonicField::total_charge() const {
  double q = 0.0;
  for (const auto& d : densities_) q += d.charge(carrier(d.curve));
  for (const auto& s : sources_) q -= s.strength;
  return q;
}

double HarmonicField::value(Vec2 p) const {
  double u = 0.0;
  for (const auto& d : densities_) {
    const BoundaryCurve& c = carrier(d.curve);
    for (int j = 0; j < c.size(); ++j) {
      const Vec2 y = c.node(j);
      double kernel;
      if (d.kind == LayerKind::single) {
        kernel = fundamental_solution(p, y);
      } else {
        const Vec2 r = y - p;
        kernel = -(1.0 / kTwoPi) * c.normal(j).dot(r) / r.squared_norm();
      }
      u += kernel * d.values[j] * c.weight(j);
    }
  }
  for (const auto& s : sources_) u += s.strength * fundamental_solution(p, s.location);
  if (particular_) u += particular_->value(p);
  return u;
}

Vec2 HarmonicField::gradient(Vec2 p) const {
  Vec2 g{0.0, 0.0};
  for (const auto& d : densities_) {
    const BoundaryCurve& c = carrier(d.curve);
    for (int j = 0; j < c.size(); ++j) {
      const Vec2 y = c.node(j);
      Vec2 k;
      if (d.kind == LayerKind::single) {
        k = fundamental_gradient_x(p, y);
      } else {
        const Vec2 r = p - y;
        const double r2 = r.squared_norm();
        const Vec2 ny = c.normal(j);
        k = (ny / r2 - (2.0 * ny.dot(r) / (r2 * r2)) * r) * (1.0 / kTwoPi);
      }
      g = g + k * (d.values[j] * c.weight(j));
    }
  }
  for (const auto& s : sources_) {
    g = g + fundamental_gradient_x(p, s.location) * s.strength;
  }
  if (particular_) g = g + particular_->gradient(p);
  return g;
}

void HarmonicField::accumulate(const HarmonicField& other, double scale) {
  if (!layout_) layout_ = other.layout_;
  for (const auto& d : other.densities_) {
    LayerDensity scaled = d;
    scaled.values *= scale;
    add_density(std::move(scaled));
  }
  for (const auto& s : other.sources_) {
    sources_.push_back({s.location, s.strength * scale});
  }
  if (other.particular_) {
    if (particular_) throw FieldError("cannot merge two particular solutions");
    if (scale != 1.0) {
      throw FieldError("cannot scale a particular solution during merge");
    }
    particular_ = other.particular_;
  }
}

FieldEvaluation evaluate_field(const HarmonicField& field,
                               const std::vector<Vec2>& points,
                               bool want_gradient) {
  FieldEvaluation out;
  const int np = static_cast<int>(points.size());
  out.values.resize(np);
  if (want_gradient) out.gradients.resize(np, 2);
  out.near_boundary.assign(np, false);

  // Collect carriers once for the distance checks.
  std::vector<const BoundaryCurve*> carriers;
  for (const auto& d : field.densities()) carriers.push_back(&field.carrier(d.curve));

  for (int i = 0; i < np; ++i) {
    for (const BoundaryCurve* c : carriers) {
      const double dist = point_curve_distance(*c, points[i]);
      double max_spacing = 0.0;
      for (int k = 0; k < c->size(); ++k) {
        max_spacing = std::max(max_spacing, c->param_step() * c->jacobian(k));
      }
      if (dist < 1e-12 * (1.0 + max_spacing)) {
        throw FieldError("evaluation point lies on a carrier curve");
      }
      if (dist < max_spacing) out.near_boundary[i] = true;
    }
    out.values[i] = field.value(points[i]);
    if (want_gradient) {
      const Vec2 g = field.gradient(points[i]);
      out.gradients(i, 0) = g.x;
      out.gradients(i, 1) = g.y;
    }
  }
  return out;
}

double probe_flux(const HarmonicField& field, Vec2 center, double radius,
                  int n_quad) {
  double flux = 0.0;
  for (int i = 0; i < n_quad; ++i) {
    const double t = kTwoPi * i / n_quad;
    const Vec2 n{std::cos(t), std::sin(t)};
    const Vec2 p = center + radius * n;
    flux += field.gradient(p).dot(n) * (kTwoPi * radius / n_quad);
  }
  return flux;
}

}  // namespace mor
