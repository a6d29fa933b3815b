#include "mor/bvp.hpp"

#include <Eigen/LU>
#include <cmath>
#include <iostream>
#include <numbers>
#include <sstream>

namespace mor {

namespace {

Side fluid_side(int curve_index) {
  return curve_index == kContainer ? Side::interior : Side::exterior;
}

const BoundaryCurve& layout_curve(const GeometryLayout& layout, int index) {
  return index == kContainer ? layout.container() : layout.object(index);
}

struct Block {
  int curve;             // kContainer or object index
  LayerKind layer;
  bool has_charge;       // extra point-source unknown (Dirichlet objects)
  bool has_constant;     // extra surface-constant unknown (fourth type)
  int offset;            // first density unknown
  int n;                 // node count
  int extra;             // index of the charge/constant unknown, or -1
  Vec2 anchor;           // point-source location when has_charge
  TraceKind trace;       // trace kind of this block's own rows
};

// The coupled Nystrom system over a subset of the layout curves: the
// container carries a double layer, Dirichlet objects a double layer plus an
// interior point charge constrained to zero density mean, Neumann objects a
// single layer, fourth-type objects a single layer bordered by the unknown
// surface constant and the flux equation.
class CoupledSystem {
 public:
  CoupledSystem(const ProblemSpec& problem, std::vector<int> curve_indices)
      : problem_(problem), layout_(*problem.layout) {
    int offset = 0;
    for (int index : curve_indices) {
      Block b;
      b.curve = index;
      b.n = layout_curve(layout_, index).size();
      b.offset = offset;
      b.extra = -1;
      b.has_charge = false;
      b.has_constant = false;
      if (index == kContainer) {
        b.layer = LayerKind::double_layer;
        b.trace = TraceKind::value;
      } else {
        const BoundaryCondition& bc = problem.conditions[index];
        if (std::holds_alternative<DirichletCondition>(bc)) {
          b.layer = LayerKind::double_layer;
          b.has_charge = true;
          b.trace = TraceKind::value;
          b.anchor = find_interior_anchor(layout_.object(index));
        } else if (std::holds_alternative<NeumannCondition>(bc)) {
          b.layer = LayerKind::single;
          b.trace = TraceKind::normal_derivative;
        } else {
          b.layer = LayerKind::single;
          b.has_constant = true;
          b.trace = TraceKind::value;
        }
      }
      offset += b.n;
      if (b.has_charge || b.has_constant) b.extra = offset++;
      blocks_.push_back(b);
    }
    size_ = offset;
    assemble();
    lu_.compute(matrix_);
    rcond_ = lu_.rcond();
    if (!(rcond_ > 1e-14)) {
      throw SolverError(
          "singular boundary system (ill-posed condition combination), "
          "reciprocal condition estimate " +
          std::to_string(rcond_));
    }
    if (rcond_ < 1e-12) {
      std::cerr << "[mor] warning: boundary system condition estimate "
                << 1.0 / rcond_ << " exceeds 1e12\n";
    }
  }

  const std::vector<Block>& blocks() const { return blocks_; }
  double condition_estimate() const { return 1.0 / rcond_; }

  // rhs_for holds nodal data per block, plus flux values for fourth blocks.
  HarmonicField solve(const Eigen::VectorXd& rhs, std::string label,
                      std::vector<std::optional<double>>* constants = nullptr,
                      std::vector<double>* residuals = nullptr) const {
    const Eigen::VectorXd x = lu_.solve(rhs);
    HarmonicField field(problem_.layout, std::move(label));
    for (const Block& b : blocks_) {
      LayerDensity d;
      d.curve = b.curve;
      d.kind = b.layer;
      d.values = x.segment(b.offset, b.n);
      field.add_density(std::move(d));
      if (b.has_charge) field.add_point_source({b.anchor, x[b.extra]});
      if (b.has_constant && constants) {
        (*constants)[b.curve] = x[b.extra];
      }
    }
    if (problem_.particular) field.set_particular(*problem_.particular);
    if (residuals) {
      const Eigen::VectorXd r = matrix_ * x - rhs;
      residuals->assign(layout_.object_count(), 0.0);
      for (const Block& b : blocks_) {
        if (b.curve == kContainer) continue;
        (*residuals)[b.curve] =
            r.segment(b.offset, b.n).cwiseAbs().maxCoeff();
      }
    }
    return field;
  }

  Eigen::VectorXd assemble_rhs(
      const std::function<Eigen::VectorXd(const Block&)>& nodal,
      const std::function<double(const Block&)>& flux) const {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(size_);
    for (const Block& b : blocks_) {
      rhs.segment(b.offset, b.n) = nodal(b);
      if (b.has_constant) rhs[b.extra] = flux(b);
    }
    return rhs;
  }

 private:
  void assemble() {
    matrix_ = Eigen::MatrixXd::Zero(size_, size_);
    for (const Block& row : blocks_) {
      const BoundaryCurve& target = layout_curve(layout_, row.curve);
      for (const Block& col : blocks_) {
        const BoundaryCurve& source = layout_curve(layout_, col.curve);
        matrix_.block(row.offset, col.offset, row.n, col.n) =
            layer_matrix(source, target, col.layer, row.trace,
                         fluid_side(row.curve));
        if (col.has_charge) {
          for (int i = 0; i < row.n; ++i) {
            matrix_(row.offset + i, col.extra) =
                row.trace == TraceKind::value
                    ? fundamental_solution(target.node(i), col.anchor)
                    : target.normal(i).dot(
                          fundamental_gradient_x(target.node(i), col.anchor));
          }
        }
      }
      if (row.has_constant) {
        for (int i = 0; i < row.n; ++i) matrix_(row.offset + i, row.extra) = -1.0;
      }
      // Closure rows: zero density mean for the charge-augmented double
      // layer, prescribed total flux for the fourth-type single layer.
      if (row.has_charge) {
        for (int j = 0; j < row.n; ++j) {
          matrix_(row.extra, row.offset + j) = target.weight(j);
        }
      }
      if (row.has_constant) {
        for (int j = 0; j < row.n; ++j) {
          matrix_(row.extra, row.offset + j) = -target.weight(j);
        }
      }
    }
  }

  const ProblemSpec& problem_;
  const GeometryLayout& layout_;
  std::vector<Block> blocks_;
  int size_ = 0;
  Eigen::MatrixXd matrix_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  double rcond_ = 0.0;
};

double particular_flux(const ProblemSpec& problem, int object_index) {
  if (!problem.particular) return 0.0;
  const BoundaryCurve& c = problem.layout->object(object_index);
  double flux = 0.0;
  for (int i = 0; i < c.size(); ++i) {
    flux += c.normal(i).dot(problem.particular->gradient(c.node(i))) *
            c.weight(i);
  }
  return flux;
}

Eigen::VectorXd particular_trace(const ProblemSpec& problem,
                                 const BoundaryCurve& curve, TraceKind trace) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(curve.size());
  if (!problem.particular) return v;
  for (int i = 0; i < curve.size(); ++i) {
    v[i] = trace == TraceKind::value
               ? problem.particular->value(curve.node(i))
               : curve.normal(i).dot(problem.particular->gradient(curve.node(i)));
  }
  return v;
}

void check_exterior_neumann_mean(const ProblemSpec& problem,
                                 const std::vector<int>& objects,
                                 const std::function<const Eigen::VectorXd*(int)>& data) {
  if (!problem.exterior()) return;
  double total = 0.0, scale = 0.0, perimeter = 0.0;
  for (int i : objects) {
    if (!std::holds_alternative<NeumannCondition>(problem.conditions[i])) {
      return;  // a Dirichlet-type object can absorb net flux
    }
    const BoundaryCurve& c = problem.layout->object(i);
    const Eigen::VectorXd* b = data(i);
    for (int k = 0; k < c.size(); ++k) total += (*b)[k] * c.weight(k);
    scale = std::max(scale, b->cwiseAbs().maxCoeff());
    perimeter += c.perimeter();
  }
  if (std::abs(total) > 1e-8 * std::max(1.0, scale * perimeter)) {
    throw SolverError(
        "exterior pure-Neumann data have nonzero total mean (" +
        std::to_string(total) + "); no decaying solution exists");
  }
}

}  // namespace

void ProblemSpec::validate() const {
  if (!layout) throw SolverError("problem has no layout");
  if (static_cast<int>(conditions.size()) != layout->object_count()) {
    throw SolverError("condition count does not match object count");
  }
  for (int i = 0; i < layout->object_count(); ++i) {
    const int n = layout->object(i).size();
    if (const auto* d = std::get_if<DirichletCondition>(&conditions[i])) {
      if (d->values.size() != n) {
        throw SolverError("Dirichlet data length mismatch on object " +
                          std::to_string(i));
      }
    } else if (const auto* nm = std::get_if<NeumannCondition>(&conditions[i])) {
      if (nm->values.size() != n) {
        throw SolverError("Neumann data length mismatch on object " +
                          std::to_string(i));
      }
    }
  }
}

Vec2 find_interior_anchor(const BoundaryCurve& curve) {
  const double scale = curve.perimeter() / (2.0 * std::numbers::pi);
  for (double f : {0.5, 0.25, 0.1, 0.04}) {
    for (int k = 0; k < 8; ++k) {
      const int i = k * curve.size() / 8;
      const Vec2 cand = curve.node(i) - curve.normal(i) * (f * scale);
      if (winding_number(curve, cand) == 1 &&
          point_curve_distance(curve, cand) > 0.3 * f * scale) {
        return cand;
      }
    }
  }
  throw SolverError("could not place an interior anchor inside curve '" +
                    curve.name() + "'");
}

DirectSolution solve_direct(const ProblemSpec& problem) {
  problem.validate();
  std::vector<int> indices;
  if (problem.layout->has_container()) indices.push_back(kContainer);
  std::vector<int> objects;
  for (int i = 0; i < problem.layout->object_count(); ++i) {
    indices.push_back(i);
    objects.push_back(i);
  }
  check_exterior_neumann_mean(problem, objects, [&](int i) {
    return &std::get<NeumannCondition>(problem.conditions[i]).values;
  });

  CoupledSystem system(problem, indices);
  const Eigen::VectorXd rhs = system.assemble_rhs(
      [&](const Block& b) -> Eigen::VectorXd {
        const BoundaryCurve& c = layout_curve(*problem.layout, b.curve);
        Eigen::VectorXd data = Eigen::VectorXd::Zero(b.n);
        if (b.curve != kContainer) {
          const BoundaryCondition& bc = problem.conditions[b.curve];
          if (const auto* d = std::get_if<DirichletCondition>(&bc)) {
            data = d->values;
          } else if (const auto* nm = std::get_if<NeumannCondition>(&bc)) {
            data = nm->values;
          }
        }
        return data - particular_trace(problem, c, b.trace);
      },
      [&](const Block& b) {
        return std::get<FourthTypeCondition>(problem.conditions[b.curve])
                   .total_flux -
               particular_flux(problem, b.curve);
      });

  DirectSolution out;
  out.constants.assign(problem.layout->object_count(), std::nullopt);
  out.field = system.solve(rhs, "direct", &out.constants, &out.residuals);
  out.condition_estimate = system.condition_estimate();
  return out;
}

struct OneObjectSolver::Impl {
  Impl(const ProblemSpec& problem, int object_index)
      : problem(problem), object(object_index),
        system(problem, make_indices(problem, object_index)) {}

  static std::vector<int> make_indices(const ProblemSpec& problem, int i) {
    problem.validate();
    if (i < 0 || i >= problem.layout->object_count()) {
      throw SolverError("object index out of range");
    }
    std::vector<int> indices;
    if (problem.layout->has_container()) indices.push_back(kContainer);
    indices.push_back(i);
    return indices;
  }

  const ProblemSpec& problem;
  int object;
  CoupledSystem system;
};

OneObjectSolver::OneObjectSolver(const ProblemSpec& problem, int object_index)
    : impl_(std::make_unique<Impl>(problem, object_index)) {}
OneObjectSolver::~OneObjectSolver() = default;
OneObjectSolver::OneObjectSolver(OneObjectSolver&&) noexcept = default;
OneObjectSolver& OneObjectSolver::operator=(OneObjectSolver&&) noexcept =
    default;

int OneObjectSolver::object_index() const { return impl_->object; }
double OneObjectSolver::condition_estimate() const {
  return impl_->system.condition_estimate();
}

HarmonicField OneObjectSolver::solve(const OneObjectRhs& rhs) const {
  const ProblemSpec& problem = impl_->problem;
  const int i = impl_->object;
  const BoundaryCurve& c = problem.layout->object(i);
  if (rhs.nodal.size() != c.size()) {
    throw SolverError("subproblem data length mismatch on object " +
                      std::to_string(i));
  }
  check_exterior_neumann_mean(problem, {i}, [&](int) { return &rhs.nodal; });
  const Eigen::VectorXd b = impl_->system.assemble_rhs(
      [&](const Block& blk) -> Eigen::VectorXd {
        if (blk.curve == kContainer) return Eigen::VectorXd::Zero(blk.n);
        return rhs.nodal;
      },
      [&](const Block&) { return rhs.flux; });
  return impl_->system.solve(b, "object_" + std::to_string(i));
}

HarmonicField solve_one_object(const ProblemSpec& problem, int object_index,
                               const OneObjectRhs& rhs) {
  return OneObjectSolver(problem, object_index).solve(rhs);
}

HarmonicField solve_initial(const ProblemSpec& problem) {
  problem.validate();
  std::vector<int> fourth;
  for (int i = 0; i < problem.layout->object_count(); ++i) {
    if (std::holds_alternative<FourthTypeCondition>(problem.conditions[i])) {
      fourth.push_back(i);
    }
  }
  if (problem.particular && !fourth.empty()) {
    throw SolverError(
        "particular solutions combined with fourth-type conditions are not "
        "supported");
  }

  HarmonicField init(problem.layout, "initial");
  if (problem.particular) {
    init.set_particular(*problem.particular);
    if (problem.layout->has_container()) {
      // One container-only solve restores the homogeneous outer condition.
      ProblemSpec shell = problem;
      CoupledSystem system(shell, {kContainer});
      const Eigen::VectorXd rhs = system.assemble_rhs(
          [&](const Block& b) -> Eigen::VectorXd {
            return -particular_trace(problem,
                                     layout_curve(*problem.layout, b.curve),
                                     b.trace);
          },
          [](const Block&) { return 0.0; });
      HarmonicField corr = system.solve(rhs, "initial_container");
      init.accumulate(corr);
    }
    return init;
  }

  for (int j : fourth) {
    OneObjectSolver solver(problem, j);
    OneObjectRhs rhs;
    rhs.nodal = Eigen::VectorXd::Zero(problem.layout->object(j).size());
    rhs.flux = std::get<FourthTypeCondition>(problem.conditions[j]).total_flux;
    init.accumulate(solver.solve(rhs));
  }
  return init;
}

Eigen::VectorXd field_value_trace(const HarmonicField& field,
                                  const GeometryLayout& layout,
                                  int curve_index) {
  const BoundaryCurve& target = layout_curve(layout, curve_index);
  Eigen::VectorXd trace = Eigen::VectorXd::Zero(target.size());
  for (const auto& d : field.densities()) {
    const BoundaryCurve& source = field.carrier(d.curve);
    trace += layer_matrix(source, target, d.kind, TraceKind::value,
                          fluid_side(curve_index)) *
             d.values;
  }
  for (const auto& s : field.point_sources()) {
    for (int i = 0; i < target.size(); ++i) {
      trace[i] += s.strength * fundamental_solution(target.node(i), s.location);
    }
  }
  if (field.particular()) {
    for (int i = 0; i < target.size(); ++i) {
      trace[i] += field.particular()->value(target.node(i));
    }
  }
  return trace;
}

Eigen::VectorXd field_normal_trace(const HarmonicField& field,
                                   const GeometryLayout& layout,
                                   int curve_index) {
  const BoundaryCurve& target = layout_curve(layout, curve_index);
  Eigen::VectorXd trace = Eigen::VectorXd::Zero(target.size());
  for (const auto& d : field.densities()) {
    const BoundaryCurve& source = field.carrier(d.curve);
    trace += layer_matrix(source, target, d.kind, TraceKind::normal_derivative,
                          fluid_side(curve_index)) *
             d.values;
  }
  for (const auto& s : field.point_sources()) {
    for (int i = 0; i < target.size(); ++i) {
      trace[i] += s.strength * target.normal(i).dot(fundamental_gradient_x(
                                   target.node(i), s.location));
    }
  }
  if (field.particular()) {
    for (int i = 0; i < target.size(); ++i) {
      trace[i] += target.normal(i).dot(
          field.particular()->gradient(target.node(i)));
    }
  }
  return trace;
}

double boundary_flux(const HarmonicField& field, const GeometryLayout& layout,
                     int object_index) {
  const BoundaryCurve& c = layout.object(object_index);
  const Eigen::VectorXd dn = field_normal_trace(field, layout, object_index);
  double flux = 0.0;
  for (int i = 0; i < c.size(); ++i) flux += dn[i] * c.weight(i);
  return flux;
}

}  // namespace mor
