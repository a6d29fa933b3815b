#include "mor/reflections.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>

#include "mor/rng.hpp"

namespace mor {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double max_node_spacing(const BoundaryCurve& c) {
  double s = 0.0;
  for (int i = 0; i < c.size(); ++i) {
    s = std::max(s, c.param_step() * c.jacobian(i));
  }
  return s;
}

}  // namespace

ReflectionForm ReflectionForm::relaxed(double nu) {
  if (!(nu > 0.0) || nu > 1.0) {
    throw ReflectionsError("relaxation factor must lie in (0, 1]");
  }
  return {Kind::relaxed_parallel, nu};
}

ReflectionForm ReflectionForm::averaged(int n_objects) {
  if (n_objects < 1) throw ReflectionsError("averaged form needs >= 1 object");
  return {Kind::relaxed_parallel, 1.0 / n_objects};
}

std::string ReflectionForm::name() const {
  switch (kind) {
    case Kind::sequential: return "sequential";
    case Kind::parallel: return "parallel";
    case Kind::relaxed_parallel: break;
  }
  return "relaxed(" + std::to_string(relaxation) + ")";
}

std::string to_string(RunStatus status) {
  switch (status) {
    case RunStatus::converged: return "converged";
    case RunStatus::diverged: return "diverged";
    case RunStatus::max_cycles: return "max_cycles";
  }
  return "unknown";
}

std::vector<Vec2> make_probe_cloud(const GeometryLayout& layout, int count,
                                   std::uint64_t seed) {
  // Sampling box: the container's bounding box, or the object cluster's box
  // inflated by twice its diagonal for exterior problems.
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  auto absorb = [&](const BoundaryCurve& c) {
    for (const Vec2& p : c.nodes()) {
      x0 = std::min(x0, p.x); x1 = std::max(x1, p.x);
      y0 = std::min(y0, p.y); y1 = std::max(y1, p.y);
    }
  };
  if (layout.has_container()) {
    absorb(layout.container());
  } else {
    for (const auto& obj : layout.objects()) absorb(obj);
    const double diag = std::hypot(x1 - x0, y1 - y0);
    x0 -= diag; x1 += diag; y0 -= diag; y1 += diag;
  }

  std::vector<double> margins;
  std::vector<const BoundaryCurve*> curves;
  if (layout.has_container()) curves.push_back(&layout.container());
  for (const auto& obj : layout.objects()) curves.push_back(&obj);
  for (const BoundaryCurve* c : curves) {
    margins.push_back(std::max(0.15, 2.5 * max_node_spacing(*c)));
  }

  SplitMix64 rng(seed);
  std::vector<Vec2> points;
  points.reserve(count);
  int guard = 0;
  while (static_cast<int>(points.size()) < count) {
    if (++guard > 200000) {
      throw ReflectionsError("probe cloud sampling failed: fluid region too "
                             "thin for the requested margins");
    }
    const Vec2 p{rng.uniform(x0, x1), rng.uniform(y0, y1)};
    bool ok = true;
    for (std::size_t k = 0; k < curves.size(); ++k) {
      const bool is_container = layout.has_container() && k == 0;
      const int wind = winding_number(*curves[k], p);
      if (is_container ? wind != 1 : wind != 0) {
        ok = false;
        break;
      }
      if (point_curve_distance(*curves[k], p) < margins[k]) {
        ok = false;
        break;
      }
    }
    if (ok) points.push_back(p);
  }
  return points;
}

namespace {

// Per-curve accumulated densities of the compacted approximation.
struct Accumulator {
  std::vector<Eigen::VectorXd> single;  // per curve slot
  std::vector<Eigen::VectorXd> double_;
  std::vector<double> charge;  // per object (Dirichlet anchors)
};

}  // namespace

struct ReflectionEngine::Impl {
  Impl(const ProblemSpec& problem_in, ReflectionOptions options_in)
      : problem(problem_in), options(options_in) {
    problem.validate();
    layout = problem.layout;
    n_objects = layout->object_count();
    if (n_objects < 1) throw ReflectionsError("no objects to iterate over");

    // Curve slots: objects 0..N-1, container (when present) at slot N.
    n_slots = n_objects + (layout->has_container() ? 1 : 0);
    container_slot = layout->has_container() ? n_objects : -1;

    for (int i = 0; i < n_objects; ++i) {
      solvers.emplace_back(problem, i);
    }

    probes = make_probe_cloud(*layout, options.probe_count, options.probe_seed);
    build_operators();
    build_data();
  }

  int slot_of(int curve_index) const {
    return curve_index == kContainer ? container_slot : curve_index;
  }
  const BoundaryCurve& curve_at_slot(int slot) const {
    return slot == container_slot ? layout->container() : layout->object(slot);
  }

  void build_operators() {
    value_ops.assign(n_objects, std::vector<TraceOp>(n_slots));
    normal_ops.assign(n_objects, std::vector<TraceOp>(n_slots));
    probe_single.resize(n_slots);
    probe_double.resize(n_slots);
    probe_charge.assign(n_objects, Eigen::VectorXd());

    for (int slot = 0; slot < n_slots; ++slot) {
      const BoundaryCurve& source = curve_at_slot(slot);
      probe_single[slot] = evaluation_matrix(source, probes, LayerKind::single);
      probe_double[slot] =
          evaluation_matrix(source, probes, LayerKind::double_layer);
    }

    for (int i = 0; i < n_objects; ++i) {
      const BoundaryCurve& target = layout->object(i);
      const bool need_normal =
          std::holds_alternative<NeumannCondition>(problem.conditions[i]);
      for (int slot = 0; slot < n_slots; ++slot) {
        const BoundaryCurve& source = curve_at_slot(slot);
        value_ops[i][slot].single = layer_matrix(
            source, target, LayerKind::single, TraceKind::value, Side::exterior);
        value_ops[i][slot].double_ =
            layer_matrix(source, target, LayerKind::double_layer,
                         TraceKind::value, Side::exterior);
        if (need_normal) {
          normal_ops[i][slot].single =
              layer_matrix(source, target, LayerKind::single,
                           TraceKind::normal_derivative, Side::exterior);
          // The double layer's normal derivative on its own curve is
          // hypersingular; it never arises because a Neumann object carries
          // only single layers. Cross terms are smooth.
          if (source.id() != target.id()) {
            normal_ops[i][slot].double_ =
                layer_matrix(source, target, LayerKind::double_layer,
                             TraceKind::normal_derivative, Side::exterior);
          }
        }
      }
    }

    // Point-source columns: one fixed anchor per Dirichlet object.
    anchors.assign(n_objects, Vec2{});
    for (int j = 0; j < n_objects; ++j) {
      if (!std::holds_alternative<DirichletCondition>(problem.conditions[j])) {
        continue;
      }
      anchors[j] = find_interior_anchor(layout->object(j));
      Eigen::VectorXd col(static_cast<int>(probes.size()));
      for (int p = 0; p < col.size(); ++p) {
        col[p] = fundamental_solution(probes[p], anchors[j]);
      }
      probe_charge[j] = col;
      for (int i = 0; i < n_objects; ++i) {
        const BoundaryCurve& target = layout->object(i);
        Eigen::VectorXd v(target.size());
        Eigen::VectorXd nv(target.size());
        for (int k = 0; k < target.size(); ++k) {
          v[k] = fundamental_solution(target.node(k), anchors[j]);
          nv[k] = target.normal(k).dot(
              fundamental_gradient_x(target.node(k), anchors[j]));
        }
        value_ops[i][j].charge = v;
        normal_ops[i][j].charge = nv;
      }
    }
  }

  void build_data() {
    data.resize(n_objects);
    for (int i = 0; i < n_objects; ++i) {
      const int n = layout->object(i).size();
      if (const auto* d =
              std::get_if<DirichletCondition>(&problem.conditions[i])) {
        data[i] = d->values;
      } else if (const auto* nm =
                     std::get_if<NeumannCondition>(&problem.conditions[i])) {
        data[i] = nm->values;
      } else {
        data[i] = Eigen::VectorXd::Zero(n);  // fourth type: homogeneous
      }
    }
  }

  struct TraceOp {
    Eigen::MatrixXd single, double_;
    Eigen::VectorXd charge;  // point-source column (Dirichlet sources only)
  };

  Accumulator make_accumulator() const {
    Accumulator acc;
    acc.single.resize(n_slots);
    acc.double_.resize(n_slots);
    for (int slot = 0; slot < n_slots; ++slot) {
      const int n = curve_at_slot(slot).size();
      acc.single[slot] = Eigen::VectorXd::Zero(n);
      acc.double_[slot] = Eigen::VectorXd::Zero(n);
    }
    acc.charge.assign(n_objects, 0.0);
    return acc;
  }

  void accumulate(Accumulator& acc, const HarmonicField& field,
                  double scale) const {
    for (const auto& d : field.densities()) {
      const int slot = slot_of(d.curve);
      auto& dst =
          d.kind == LayerKind::single ? acc.single[slot] : acc.double_[slot];
      dst += scale * d.values;
    }
    for (const auto& s : field.point_sources()) {
      // Each solve produces at most one source, anchored per object; match
      // by location against the engine's anchor table.
      bool matched = false;
      for (int j = 0; j < n_objects; ++j) {
        if (probe_charge[j].size() > 0 &&
            (anchors[j] - s.location).squared_norm() == 0.0) {
          acc.charge[j] += scale * s.strength;
          matched = true;
          break;
        }
      }
      if (!matched) {
        throw ReflectionsError("reflection field carries an unknown source");
      }
    }
  }

  // Trace of the accumulated approximation on object i, value or normal kind.
  Eigen::VectorXd trace(const Accumulator& acc, int i, bool normal) const {
    const auto& ops = normal ? normal_ops[i] : value_ops[i];
    Eigen::VectorXd t = Eigen::VectorXd::Zero(layout->object(i).size());
    for (int slot = 0; slot < n_slots; ++slot) {
      const TraceOp& op = ops[slot];
      if (op.single.size() > 0) t += op.single * acc.single[slot];
      if (op.double_.size() > 0) t += op.double_ * acc.double_[slot];
      if (slot < n_objects && op.charge.size() > 0 && acc.charge[slot] != 0.0) {
        t += acc.charge[slot] * op.charge;
      }
    }
    return t;
  }

  // Boundary action of the accumulated field per the object's condition.
  Eigen::VectorXd boundary_action(const Accumulator& acc, int i) const {
    if (std::holds_alternative<NeumannCondition>(problem.conditions[i])) {
      return trace(acc, i, /*normal=*/true);
    }
    Eigen::VectorXd t = trace(acc, i, /*normal=*/false);
    if (std::holds_alternative<FourthTypeCondition>(problem.conditions[i])) {
      const BoundaryCurve& c = layout->object(i);
      double mean = 0.0, total = 0.0;
      for (int k = 0; k < c.size(); ++k) {
        mean += t[k] * c.weight(k);
        total += c.weight(k);
      }
      t.array() -= mean / total;
    }
    return t;
  }

  Eigen::VectorXd probe_values(const Accumulator& acc) const {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<int>(probes.size()));
    for (int slot = 0; slot < n_slots; ++slot) {
      v += probe_single[slot] * acc.single[slot];
      v += probe_double[slot] * acc.double_[slot];
    }
    for (int j = 0; j < n_objects; ++j) {
      if (acc.charge[j] != 0.0) v += acc.charge[j] * probe_charge[j];
    }
    return v;
  }

  HarmonicField snapshot(const Accumulator& acc, std::string label) const {
    HarmonicField f(layout, std::move(label));
    for (int slot = 0; slot < n_slots; ++slot) {
      const int curve = slot == container_slot ? kContainer : slot;
      if (acc.single[slot].cwiseAbs().maxCoeff() != 0.0) {
        f.add_density({curve, LayerKind::single, acc.single[slot]});
      }
      if (acc.double_[slot].cwiseAbs().maxCoeff() != 0.0) {
        f.add_density({curve, LayerKind::double_layer, acc.double_[slot]});
      }
    }
    for (int j = 0; j < n_objects; ++j) {
      if (acc.charge[j] != 0.0) f.add_point_source({anchors[j], acc.charge[j]});
    }
    return f;
  }

  void ensure_reference() {
    if (reference_field) return;
    if (!options.use_reference) return;
    DirectSolution ds = solve_direct(problem);
    reference_field = std::move(ds.field);
  }

  ProblemSpec problem;
  ReflectionOptions options;
  std::shared_ptr<const GeometryLayout> layout;
  int n_objects = 0, n_slots = 0, container_slot = -1;
  std::vector<OneObjectSolver> solvers;
  std::vector<Vec2> probes;
  std::vector<std::vector<TraceOp>> value_ops, normal_ops;
  std::vector<Eigen::MatrixXd> probe_single, probe_double;
  std::vector<Eigen::VectorXd> probe_charge;
  std::vector<Vec2> anchors;
  std::vector<Eigen::VectorXd> data;
  std::optional<HarmonicField> reference_field;
  Eigen::VectorXd reference_probe_values;
  double reference_norm = 0.0;
};

ReflectionEngine::ReflectionEngine(const ProblemSpec& problem,
                                   ReflectionOptions options)
    : impl_(std::make_unique<Impl>(problem, options)) {}
ReflectionEngine::~ReflectionEngine() = default;
ReflectionEngine::ReflectionEngine(ReflectionEngine&&) noexcept = default;

void ReflectionEngine::set_reference(HarmonicField reference) {
  impl_->reference_field = std::move(reference);
}

const HarmonicField* ReflectionEngine::reference() const {
  return impl_->reference_field ? &*impl_->reference_field : nullptr;
}

const std::vector<Vec2>& ReflectionEngine::probe_points() const {
  return impl_->probes;
}

Eigen::VectorXd ReflectionEngine::evaluate_on_probes(
    const HarmonicField& field) const {
  Eigen::VectorXd v(static_cast<int>(impl_->probes.size()));
  for (int i = 0; i < v.size(); ++i) v[i] = field.value(impl_->probes[i]);
  return v;
}

std::pair<ReflectionTrace, ConvergenceReport> ReflectionEngine::run(
    const ReflectionForm& form) {
  Impl& e = *impl_;
  const int n = e.n_objects;
  const double nu = form.nu();
  if (!(nu > 0.0) || nu > 1.0) {
    throw ReflectionsError("relaxation factor must lie in (0, 1]");
  }

  e.ensure_reference();
  const bool vs_reference = e.reference_field.has_value();
  if (vs_reference) {
    e.reference_probe_values = evaluate_on_probes(*e.reference_field);
    e.reference_norm = e.reference_probe_values.norm();
  }

  ReflectionTrace trace;
  trace.layout = e.layout;
  trace.conditions = e.problem.conditions;
  trace.sequential = form.is_sequential();
  trace.relaxation = nu;

  ConvergenceReport report;

  HarmonicField initial = solve_initial(e.problem);
  Accumulator acc = e.make_accumulator();
  e.accumulate(acc, initial, 1.0);
  trace.initial = initial;

  auto error_of = [&](const Accumulator& a,
                      const Eigen::VectorXd* prev) -> double {
    const Eigen::VectorXd v = e.probe_values(a);
    if (vs_reference) {
      const double diff = (v - e.reference_probe_values).norm();
      return e.reference_norm > 0.0 ? diff / e.reference_norm : diff;
    }
    if (!prev) return std::numeric_limits<double>::infinity();
    return (v - *prev).norm() / std::max(1.0, v.norm());
  };

  Eigen::VectorXd prev_probe = e.probe_values(acc);
  trace.initial_error = error_of(acc, nullptr);
  report.errors.push_back(trace.initial_error);

  RunStatus status = RunStatus::max_cycles;
  int cycle = 0;
  const double scale_floor = 1.0;

  while (cycle < e.options.max_cycles) {
    ++cycle;
    std::vector<HarmonicField> reflections(n);
    Eigen::VectorXd residuals(n);

    if (form.is_sequential()) {
      for (int i = 0; i < n; ++i) {
        const Eigen::VectorXd action = e.boundary_action(acc, i);
        const double scale = std::max(
            {scale_floor, action.cwiseAbs().maxCoeff(),
             e.data[i].size() ? e.data[i].cwiseAbs().maxCoeff() : 0.0});
        OneObjectRhs rhs;
        rhs.nodal = e.data[i] - action;
        reflections[i] = e.solvers[i].solve(rhs);
        e.accumulate(acc, reflections[i], 1.0);
        // Correction identity: the boundary action of the updated partial
        // sum must restore the data on object i.
        residuals[i] =
            (e.boundary_action(acc, i) - e.data[i]).cwiseAbs().maxCoeff() /
            scale;
      }
    } else {
      std::vector<OneObjectRhs> rhs(n);
      std::vector<double> scales(n);
      for (int i = 0; i < n; ++i) {
        const Eigen::VectorXd action = e.boundary_action(acc, i);
        scales[i] = std::max(
            {scale_floor, action.cwiseAbs().maxCoeff(),
             e.data[i].size() ? e.data[i].cwiseAbs().maxCoeff() : 0.0});
        rhs[i].nodal = e.data[i] - action;
      }
      const int threads = std::max(1, e.options.thread_count);
      if (threads == 1 || n == 1) {
        for (int i = 0; i < n; ++i) reflections[i] = e.solvers[i].solve(rhs[i]);
      } else {
        // Fan the independent solves out in batches of `threads`; the merge
        // below runs in fixed object order, so results are bit-identical
        // for every thread count.
        for (int start = 0; start < n; start += threads) {
          const int end = std::min(n, start + threads);
          std::vector<std::future<HarmonicField>> futures;
          for (int i = start; i < end; ++i) {
            futures.push_back(std::async(std::launch::async, [&e, &rhs, i] {
              return e.solvers[i].solve(rhs[i]);
            }));
          }
          for (int i = start; i < end; ++i) {
            reflections[i] = futures[i - start].get();
          }
        }
      }
      // Identity check against the pre-update approximation, then the
      // relaxed update in fixed object order.
      for (int i = 0; i < n; ++i) {
        Accumulator probe = acc;
        e.accumulate(probe, reflections[i], 1.0);
        residuals[i] =
            (e.boundary_action(probe, i) - e.data[i]).cwiseAbs().maxCoeff() /
            scales[i];
      }
      for (int i = 0; i < n; ++i) e.accumulate(acc, reflections[i], nu);
    }

    const double err = error_of(acc, &prev_probe);
    prev_probe = e.probe_values(acc);
    report.errors.push_back(err);

    if (static_cast<int>(trace.cycles.size()) < e.options.stored_cycles) {
      CycleRecord rec;
      rec.reflections = std::move(reflections);
      rec.accumulated = e.snapshot(acc, "cycle_" + std::to_string(cycle));
      rec.correction_residuals = residuals;
      rec.error = err;
      trace.cycles.push_back(std::move(rec));
    } else {
      ++trace.dropped_cycles;
    }

    if (!std::isfinite(err) || err > e.options.divergence_threshold) {
      status = RunStatus::diverged;
      break;
    }
    if (err < e.options.tol) {
      status = RunStatus::converged;
      break;
    }
  }

  report.status = status;
  report.cycles = cycle;
  report.final_error = report.errors.back();

  try {
    const auto est =
        estimate_contraction(report, std::min(5, cycle / 4), 1e-13, 3);
    report.contraction = est.factor;
    report.contraction_fit_residual = est.fit_residual;
  } catch (const ReflectionsError&) {
    report.contraction = kNaN;
    report.contraction_fit_residual = kNaN;
  }

  return {std::move(trace), std::move(report)};
}

std::pair<ReflectionTrace, ConvergenceReport> run_reflections(
    const ProblemSpec& problem, const ReflectionForm& form, int max_cycles,
    double tol, const HarmonicField* reference, ReflectionOptions options) {
  options.max_cycles = max_cycles;
  options.tol = tol;
  ReflectionEngine engine(problem, options);
  if (reference) engine.set_reference(*reference);
  return engine.run(form);
}

Eigen::VectorXd correction_residual(const ReflectionTrace& trace, int cycle) {
  if (cycle < 0 || cycle >= static_cast<int>(trace.cycles.size())) {
    throw ReflectionsError("cycle " + std::to_string(cycle) +
                           " has no stored successor reflections");
  }
  const GeometryLayout& layout = *trace.layout;
  const int n = layout.object_count();
  // u^{(cycle)} snapshot; cycle 0 is the initial approximation.
  const HarmonicField& base =
      cycle == 0 ? trace.initial : trace.cycles[cycle - 1].accumulated;
  const CycleRecord& next = trace.cycles[cycle];

  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) {
    const BoundaryCondition& bc = trace.conditions[i];
    const bool neumann = std::holds_alternative<NeumannCondition>(bc);

    HarmonicField sum = base;
    if (trace.sequential) {
      for (int j = 0; j <= i; ++j) sum.accumulate(next.reflections[j]);
    } else {
      sum.accumulate(next.reflections[i]);
    }

    Eigen::VectorXd action = neumann
                                 ? field_normal_trace(sum, layout, i)
                                 : field_value_trace(sum, layout, i);
    Eigen::VectorXd data;
    if (const auto* d = std::get_if<DirichletCondition>(&bc)) {
      data = d->values;
    } else if (const auto* nm = std::get_if<NeumannCondition>(&bc)) {
      data = nm->values;
    } else {
      const BoundaryCurve& c = layout.object(i);
      double mean = 0.0, total = 0.0;
      for (int k = 0; k < c.size(); ++k) {
        mean += action[k] * c.weight(k);
        total += c.weight(k);
      }
      action.array() -= mean / total;
      data = Eigen::VectorXd::Zero(c.size());
    }
    const Eigen::VectorXd base_action =
        neumann ? field_normal_trace(base, layout, i)
                : field_value_trace(base, layout, i);
    const double scale =
        std::max({1.0, base_action.cwiseAbs().maxCoeff(),
                  data.size() ? data.cwiseAbs().maxCoeff() : 0.0});
    out[i] = (action - data).cwiseAbs().maxCoeff() / scale;
  }
  return out;
}

ContractionEstimate estimate_contraction(const ConvergenceReport& report,
                                         int discard, double floor,
                                         int min_cycles) {
  std::vector<std::pair<double, double>> pts;
  for (int k = std::max(0, discard);
       k < static_cast<int>(report.errors.size()); ++k) {
    const double e = report.errors[k];
    if (!std::isfinite(e) || e <= floor) break;
    pts.emplace_back(static_cast<double>(k), std::log(e));
  }
  ContractionEstimate out;
  out.cycles_used = static_cast<int>(pts.size());
  if (out.cycles_used < std::max(2, min_cycles)) {
    throw ReflectionsError(
        "too few usable cycles to fit a contraction factor (" +
        std::to_string(pts.size()) + " above the error floor)");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  const double m = out.cycles_used;
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / m;
  double ss = 0.0;
  for (auto [x, y] : pts) {
    const double r = y - slope * x - intercept;
    ss += r * r;
  }
  out.factor = std::exp(slope);
  out.fit_residual = std::sqrt(ss / m);
  return out;
}

double kappa_pair(double surface_i, double surface_j, double c_i, double d) {
  if (!(d > 0.0)) throw ReflectionsError("kappa requires positive distance");
  const double d2 = d * d;
  const double d4 = d2 * d2;
  const double d6 = d4 * d2;
  const double four_pi_sq = 16.0 * std::numbers::pi * std::numbers::pi;
  const double prefactor = surface_i * surface_j * c_i * c_i / four_pi_sq;
  return prefactor * std::min(1.0 / d2 + 2.0 / d4, 1.0 / d4 + 16.0 / d6);
}

KappaCertificate kappa_criterion(const GeometryLayout& layout,
                                 const std::vector<double>& constants) {
  const int n = layout.object_count();
  if (static_cast<int>(constants.size()) != n) {
    throw ReflectionsError("need one constant per object");
  }
  for (double c : constants) {
    if (!(c >= 1.0)) throw ReflectionsError("constants must satisfy C_i >= 1");
  }
  const LayoutMetrics metrics = layout_metrics(layout);

  KappaCertificate cert;
  cert.kappa = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      cert.kappa(i, j) =
          kappa_pair(metrics.perimeter[i], metrics.perimeter[j], constants[i],
                     metrics.pair_distance[i][j]);
      cert.kappa_max = std::max(cert.kappa_max, cert.kappa(i, j));
    }
  }
  cert.product = static_cast<double>(n) * (n - 1) * cert.kappa_max;
  cert.satisfied = cert.product < 1.0;
  return cert;
}

}  // namespace mor
