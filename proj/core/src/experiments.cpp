#include "mor/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "mor/expr.hpp"
#include "mor/projection.hpp"
#include "mor/rng.hpp"

namespace mor {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int default_cycles(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::divergence_case: return 200;
    case ExperimentKind::distance_sweep: return 80;
    case ExperimentKind::projection_demo: return 50;
    default: return 100;
  }
}

double default_tol(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::triangle_convergence: return 0.0;  // full error series
    case ExperimentKind::divergence_case: return 1e-6;
    case ExperimentKind::distance_sweep: return 0.0;
    default: return 1e-10;
  }
}

Eigen::VectorXd nodal_data(const BoundaryCurve& curve, const std::string& expr_text) {
  const auto fn = parse_expression(expr_text);
  Eigen::VectorXd v(curve.size());
  for (int i = 0; i < curve.size(); ++i) {
    v[i] = fn(curve.node(i).x, curve.node(i).y);
  }
  return v;
}

BoundaryCurve curve_from_section(const ConfigSection& s, const std::string& name) {
  const std::string shape = s.get_string("shape");
  const auto center_list = s.has("center") ? s.get_doubles("center")
                                           : std::vector<double>{0.0, 0.0};
  if (center_list.size() != 2) {
    throw ConfigError("line " + std::to_string(s.line()) +
                      ": center needs two coordinates");
  }
  const Vec2 center{center_list[0], center_list[1]};
  const int n = s.get_int("n_nodes", 128);
  if (shape == "circle") {
    return make_circle(center, s.get_double("radius"), n, name);
  }
  if (shape == "cshape") {
    return make_cshape(center, s.get_double("r_inner"), s.get_double("r_outer"),
                       s.get_double("half_angle"), n,
                       s.get_double("blend_width", 0.05), name);
  }
  throw ConfigError("line " + std::to_string(s.line()) + ": unknown shape '" +
                    shape + "'");
}

BoundaryCondition condition_from_section(const ConfigSection& s,
                                         const BoundaryCurve& curve) {
  const std::string bc = s.get_string("bc", "dirichlet");
  if (bc == "dirichlet") {
    return DirichletCondition{nodal_data(curve, s.get_string("datum", "0"))};
  }
  if (bc == "neumann") {
    return NeumannCondition{nodal_data(curve, s.get_string("datum", "0"))};
  }
  if (bc == "fourth") {
    return FourthTypeCondition{s.get_double("flux", 0.0)};
  }
  throw ConfigError("line " + std::to_string(s.line()) +
                    ": unknown bc kind '" + bc + "'");
}

ProblemSpec problem_from_config(const ConfigFile& file) {
  std::optional<BoundaryCurve> container;
  if (const ConfigSection* c = file.find("container")) {
    container = curve_from_section(*c, "container");
  }
  std::vector<BoundaryCurve> objects;
  std::vector<const ConfigSection*> object_sections = file.all("object");
  if (object_sections.empty()) {
    throw ConfigError("config defines no [object] sections");
  }
  int index = 0;
  for (const ConfigSection* s : object_sections) {
    objects.push_back(curve_from_section(
        *s, s->get_string("name", "object" + std::to_string(index))));
    ++index;
  }
  auto layout = std::make_shared<GeometryLayout>(std::move(container),
                                                 std::move(objects));
  layout_metrics(*layout);  // reject invalid geometry early

  ProblemSpec problem;
  problem.layout = layout;
  for (std::size_t i = 0; i < object_sections.size(); ++i) {
    problem.conditions.push_back(
        condition_from_section(*object_sections[i], layout->object(i)));
  }
  return problem;
}

std::vector<std::string> csv_header(const ExperimentConfig& config,
                                    const std::string& nodes_desc,
                                    double tol, int cycles) {
  char hash_text[32];
  std::snprintf(hash_text, sizeof hash_text, "%016llx",
                static_cast<unsigned long long>(config.hash));
  return {
      "config_hash=" + std::string(hash_text),
      "seed=" + std::to_string(config.seed),
      "n_nodes=" + nodes_desc,
      "tol=" + format_number(tol),
      "max_cycles=" + std::to_string(cycles),
  };
}

std::string nodes_description(const GeometryLayout& layout) {
  std::string desc;
  if (layout.has_container()) {
    desc += std::to_string(layout.container().size());
  }
  for (const auto& obj : layout.objects()) {
    if (!desc.empty()) desc += "/";
    desc += std::to_string(obj.size());
  }
  return desc;
}

struct FormSet {
  bool seq = true, par = true, avg = true;
};

FormSet parse_forms(const std::string& form) {
  if (form == "all") return {};
  FormSet set{false, false, false};
  if (form == "seq") set.seq = true;
  else if (form == "par") set.par = true;
  else if (form == "avg") set.avg = true;
  else throw ExperimentError("unknown form '" + form + "' (seq|par|avg|all)");
  return set;
}

// Runs the requested forms over a shared engine; absent forms yield NaN
// columns.
struct ThreeFormRun {
  std::optional<ConvergenceReport> seq, par, avg;
  int max_len() const {
    int n = 0;
    for (const auto* r : {&seq, &par, &avg}) {
      if (*r) n = std::max(n, static_cast<int>((*r)->errors.size()));
    }
    return n;
  }
};

ThreeFormRun run_three_forms(ReflectionEngine& engine, const FormSet& set,
                             int n_objects) {
  ThreeFormRun out;
  if (set.seq) out.seq = engine.run(ReflectionForm::sequential()).second;
  if (set.par) out.par = engine.run(ReflectionForm::parallel()).second;
  if (set.avg) out.avg = engine.run(ReflectionForm::averaged(n_objects)).second;
  return out;
}

std::vector<std::vector<double>> error_rows(const ThreeFormRun& run) {
  const int len = run.max_len();
  std::vector<std::vector<double>> rows;
  auto at = [](const std::optional<ConvergenceReport>& r, int k) {
    if (!r || k >= static_cast<int>(r->errors.size())) return kNaN;
    return r->errors[k];
  };
  for (int k = 0; k < len; ++k) {
    rows.push_back({static_cast<double>(k), at(run.seq, k), at(run.par, k),
                    at(run.avg, k)});
  }
  return rows;
}

void append_statuses(RunOutcome& out, const std::string& prefix,
                     const ThreeFormRun& run) {
  auto describe = [&](const char* name,
                      const std::optional<ConvergenceReport>& r) {
    if (!r) return;
    std::ostringstream line;
    line << prefix << name << ": " << to_string(r->status) << " after "
         << r->cycles << " cycles, final error " << format_number(r->final_error);
    if (std::isfinite(r->contraction)) {
      line << ", contraction " << format_number(r->contraction);
    }
    out.status_lines.push_back(line.str());
  };
  describe("sequential", run.seq);
  describe("parallel", run.par);
  describe("averaged", run.avg);
}

bool all_converged(const ThreeFormRun& run) {
  for (const auto* r : {&run.seq, &run.par, &run.avg}) {
    if (*r && (*r)->status != RunStatus::converged) return false;
  }
  return true;
}

bool none_converged(const ThreeFormRun& run) {
  for (const auto* r : {&run.seq, &run.par, &run.avg}) {
    if (*r && (*r)->status == RunStatus::converged) return false;
  }
  return true;
}

std::string compact_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// least squares slope of log(y) against log(x)
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(y[i])) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    ++m;
  }
  if (m < 2) return kNaN;
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

ExperimentKind experiment_kind_from(const std::string& name) {
  if (name == "solve") return ExperimentKind::solve;
  if (name == "reflect") return ExperimentKind::reflect;
  if (name == "triangle_convergence" || name == "triangle-convergence") {
    return ExperimentKind::triangle_convergence;
  }
  if (name == "divergence_case" || name == "divergence-case") {
    return ExperimentKind::divergence_case;
  }
  if (name == "distance_sweep" || name == "distance-sweep") {
    return ExperimentKind::distance_sweep;
  }
  if (name == "projection_demo" || name == "projection-demo") {
    return ExperimentKind::projection_demo;
  }
  throw ExperimentError("unknown experiment kind '" + name + "'");
}

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::solve: return "solve";
    case ExperimentKind::reflect: return "reflect";
    case ExperimentKind::triangle_convergence: return "triangle_convergence";
    case ExperimentKind::divergence_case: return "divergence_case";
    case ExperimentKind::distance_sweep: return "distance_sweep";
    case ExperimentKind::projection_demo: return "projection_demo";
  }
  return "?";
}

ExperimentConfig ExperimentConfig::from_text(const std::string& text) {
  ExperimentConfig config;
  config.file = ConfigFile::parse(text);
  config.hash = config_hash(config.file);
  const ConfigSection* exp = config.file.find("experiment");
  if (!exp) throw ConfigError("config needs an [experiment] section");
  config.kind = experiment_kind_from(exp->get_string("kind"));
  config.out_dir = exp->get_string("out", "out");
  config.max_cycles = exp->get_int("max_cycles", default_cycles(config.kind));
  config.tol = exp->get_double("tol", default_tol(config.kind));
  config.seed = exp->get_uint64("seed", 201);
  config.threads = exp->get_int("threads", 1);
  config.form = exp->get_string("form", "all");
  config.expect_divergence = exp->get_bool("expect_divergence", false);
  return config;
}

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_text(buffer.str());
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header_comments,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
  if (const auto dir = path.parent_path(); !dir.empty()) {
    std::filesystem::create_directories(dir);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ExperimentError("cannot write " + path.string());
  for (const auto& c : header_comments) out << "# " << c << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) {
    out << columns[i] << (i + 1 < columns.size() ? "," : "");
  }
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i == 0 && row[i] == std::floor(row[i]) && std::abs(row[i]) < 1e9) {
        out << static_cast<long long>(row[i]);
      } else {
        out << format_number(row[i]);
      }
      out << (i + 1 < row.size() ? "," : "");
    }
    out << "\n";
  }
}

ProblemSpec make_triangle_problem(double side, double radius,
                                  double container_radius, int n_nodes,
                                  double datum) {
  if (!(side > 2.0 * radius)) {
    throw ExperimentError(
        "triangle side " + compact_number(side) +
        " must exceed the object diameter " + compact_number(2.0 * radius) +
        " (disjoint objects)");
  }
  const double circumradius = side / std::sqrt(3.0);
  std::vector<BoundaryCurve> objects;
  for (int k = 0; k < 3; ++k) {
    const double angle = std::numbers::pi / 2.0 + 2.0 * std::numbers::pi * k / 3.0;
    objects.push_back(make_circle(
        {circumradius * std::cos(angle), circumradius * std::sin(angle)},
        radius, n_nodes, "ball" + std::to_string(k)));
  }
  auto layout = std::make_shared<GeometryLayout>(
      make_circle({0.0, 0.0}, container_radius, n_nodes, "container"),
      std::move(objects));
  ProblemSpec problem;
  problem.layout = layout;
  for (int k = 0; k < 3; ++k) {
    problem.conditions.push_back(DirichletCondition{
        Eigen::VectorXd::Constant(n_nodes, datum)});
  }
  return problem;
}

ProblemSpec make_divergence_problem(int n_nodes_disk, int n_nodes_cshape,
                                    int n_nodes_container) {
  std::vector<BoundaryCurve> objects;
  objects.push_back(make_circle({0.0, 0.0}, 2.0, n_nodes_disk, "disk"));
  objects.push_back(make_cshape({0.0, 0.0}, 3.0, 5.0, std::numbers::pi / 6.0,
                                n_nodes_cshape, 0.05, "cshape"));
  auto layout = std::make_shared<GeometryLayout>(
      make_circle({0.0, 0.0}, 10.0, n_nodes_container, "container"),
      std::move(objects));
  ProblemSpec problem;
  problem.layout = layout;
  problem.conditions.push_back(
      DirichletCondition{Eigen::VectorXd::Constant(n_nodes_disk, 1.0)});
  // Constant-pattern normal-derivative datum modulated around the shape.
  const BoundaryCurve& cshape = layout->object(1);
  Eigen::VectorXd neumann(cshape.size());
  for (int i = 0; i < cshape.size(); ++i) {
    neumann[i] = std::cos(std::atan2(cshape.node(i).y, cshape.node(i).x));
  }
  problem.conditions.push_back(NeumannCondition{neumann});
  return problem;
}

ProblemSpec make_sweep_problem(double gap, double radius, int n_objects,
                               int n_nodes) {
  if (n_objects < 2 || n_objects > 3) {
    throw ExperimentError("distance sweep supports 2 or 3 objects");
  }
  std::vector<BoundaryCurve> objects;
  std::vector<Vec2> centers;
  if (n_objects == 2) {
    const double half = 0.5 * gap + radius;
    centers = {{-half, 0.0}, {half, 0.0}};
  } else {
    // Equilateral triangle with pairwise surface gap `gap`.
    const double side = gap + 2.0 * radius;
    const double circumradius = side / std::sqrt(3.0);
    for (int k = 0; k < 3; ++k) {
      const double angle =
          std::numbers::pi / 2.0 + 2.0 * std::numbers::pi * k / 3.0;
      centers.push_back(
          {circumradius * std::cos(angle), circumradius * std::sin(angle)});
    }
  }
  for (std::size_t k = 0; k < centers.size(); ++k) {
    objects.push_back(
        make_circle(centers[k], radius, n_nodes, "ball" + std::to_string(k)));
  }
  auto layout =
      std::make_shared<GeometryLayout>(std::nullopt, std::move(objects));
  ProblemSpec problem;
  problem.layout = layout;
  for (std::size_t k = 0; k < centers.size(); ++k) {
    const BoundaryCurve& c = layout->object(static_cast<int>(k));
    Eigen::VectorXd data(c.size());
    for (int i = 0; i < c.size(); ++i) {
      data[i] = (c.node(i).x - centers[k].x) / radius;  // cos of local angle
    }
    problem.conditions.push_back(NeumannCondition{data});
  }
  return problem;
}

namespace {

RunOutcome run_solve(const ExperimentConfig& config) {
  ProblemSpec problem = problem_from_config(config.file);
  const DirectSolution solution = solve_direct(problem);

  RunOutcome out;
  const auto probes =
      make_probe_cloud(*problem.layout, 200, config.seed);
  std::vector<std::vector<double>> rows;
  for (const Vec2& p : probes) {
    rows.push_back({p.x, p.y, solution.field.value(p)});
  }
  const auto path = config.out_dir / "solution.csv";
  write_csv(path,
            csv_header(config, nodes_description(*problem.layout), config.tol,
                       config.max_cycles),
            {"x", "y", "u"}, rows);
  out.outputs.push_back(path);

  double max_residual = 0.0;
  for (double r : solution.residuals) max_residual = std::max(max_residual, r);
  out.status_lines.push_back("solve: boundary residual " +
                             format_number(max_residual) +
                             ", condition estimate " +
                             format_number(solution.condition_estimate));
  for (std::size_t j = 0; j < solution.constants.size(); ++j) {
    if (solution.constants[j]) {
      out.status_lines.push_back("object " + std::to_string(j) +
                                 " surface constant c = " +
                                 format_number(*solution.constants[j]));
    }
  }
  return out;
}

RunOutcome run_reflect(const ExperimentConfig& config) {
  ProblemSpec problem = problem_from_config(config.file);
  ReflectionOptions options;
  options.max_cycles = config.max_cycles;
  options.tol = config.tol;
  options.thread_count = config.threads;
  options.probe_seed = config.seed;
  ReflectionEngine engine(problem, options);
  const ThreeFormRun run = run_three_forms(engine, parse_forms(config.form),
                                           problem.layout->object_count());

  RunOutcome out;
  const auto path = config.out_dir / "reflect.csv";
  write_csv(path,
            csv_header(config, nodes_description(*problem.layout), config.tol,
                       config.max_cycles),
            {"iter", "error_seq", "error_par", "error_avgpar"},
            error_rows(run));
  out.outputs.push_back(path);
  append_statuses(out, "", run);

  const bool ok = all_converged(run);
  if (config.expect_divergence) {
    out.exit_code = none_converged(run) ? 0 : 2;
  } else {
    out.exit_code = ok ? 0 : 2;
  }
  return out;
}

RunOutcome run_triangle(const ExperimentConfig& config) {
  const ConfigSection* exp = config.file.find("experiment");
  const std::vector<double> sides = exp->has("l_values")
                                        ? exp->get_doubles("l_values")
                                        : std::vector<double>{1.2, 4.0, 8.0};
  const double radius = exp->get_double("radius", 0.5);
  const double container_radius = exp->get_double("container_radius", 10.0);
  const int n_nodes = exp->get_int("n_nodes", 128);
  const double datum = exp->get_double("datum", 1.0);

  RunOutcome out;
  for (double side : sides) {
    ProblemSpec problem =
        make_triangle_problem(side, radius, container_radius, n_nodes, datum);
    ReflectionOptions options;
    options.max_cycles = config.max_cycles;
    options.tol = config.tol;
    options.thread_count = config.threads;
    options.probe_seed = config.seed;
    ReflectionEngine engine(problem, options);
    const ThreeFormRun run = run_three_forms(engine, parse_forms(config.form), 3);

    const auto path =
        config.out_dir / ("triangle_l" + compact_number(side) + ".csv");
    write_csv(path,
              csv_header(config, nodes_description(*problem.layout),
                         config.tol, config.max_cycles),
              {"iter", "error_seq", "error_par", "error_avgpar"},
              error_rows(run));
    out.outputs.push_back(path);
    append_statuses(out, "l=" + compact_number(side) + " ", run);
  }
  return out;
}

RunOutcome run_divergence(const ExperimentConfig& config) {
  const ConfigSection* exp = config.file.find("experiment");
  ProblemSpec problem = make_divergence_problem(
      exp->get_int("n_nodes_disk", 128), exp->get_int("n_nodes_cshape", 256),
      exp->get_int("n_nodes_container", 128));
  ReflectionOptions options;
  options.max_cycles = config.max_cycles;
  options.tol = config.tol;
  options.thread_count = config.threads;
  options.probe_seed = config.seed;
  ReflectionEngine engine(problem, options);
  const ThreeFormRun run =
      run_three_forms(engine, parse_forms(config.form), 2);

  RunOutcome out;
  const auto path = config.out_dir / "divergence.csv";
  write_csv(path,
            csv_header(config, nodes_description(*problem.layout), config.tol,
                       config.max_cycles),
            {"iter", "error_seq", "error_par", "error_avgpar"},
            error_rows(run));
  out.outputs.push_back(path);
  append_statuses(out, "", run);

  const bool diverged_as_expected = none_converged(run);
  out.exit_code = config.expect_divergence ? (diverged_as_expected ? 0 : 2)
                                           : (diverged_as_expected ? 2 : 0);
  return out;
}

RunOutcome run_sweep(const ExperimentConfig& config) {
  const ConfigSection* exp = config.file.find("experiment");
  const std::vector<double> distances =
      exp->has("distances") ? exp->get_doubles("distances")
                            : std::vector<double>{2.5, 3, 4, 5, 6, 8, 10};
  const double radius = exp->get_double("radius", 0.5);
  const int n_objects = exp->get_int("n_objects", 2);
  const int n_nodes = exp->get_int("n_nodes", 128);
  const int discard = exp->get_int("discard", 2);

  RunOutcome out;
  std::vector<std::vector<double>> rows;
  for (double gap : distances) {
    ProblemSpec problem = make_sweep_problem(gap, radius, n_objects, n_nodes);
    ReflectionOptions options;
    options.max_cycles = config.max_cycles;
    options.tol = 0.0;  // run the full series for the fit
    options.thread_count = config.threads;
    options.probe_seed = config.seed;
    ReflectionEngine engine(problem, options);

    auto fit = [&](const ReflectionForm& form) {
      const auto [trace, report] = engine.run(form);
      (void)trace;
      try {
        return estimate_contraction(report, discard, 1e-13, 3).factor;
      } catch (const ReflectionsError&) {
        return kNaN;
      }
    };
    const double k_seq = fit(ReflectionForm::sequential());
    const double k_par = fit(ReflectionForm::parallel());
    const double k_avg = fit(ReflectionForm::averaged(n_objects));
    rows.push_back({gap, k_seq, k_par, k_avg});
    out.status_lines.push_back(
        "R=" + compact_number(gap) + " K_seq=" + format_number(k_seq) +
        " K_par=" + format_number(k_par) + " K_avg=" + format_number(k_avg));
  }

  const auto path = config.out_dir / "sweep.csv";
  write_csv(path, csv_header(config, std::to_string(n_nodes), config.tol,
                             config.max_cycles),
            {"R", "seq_coef", "par_coef", "avgpar_coef"}, rows);
  out.outputs.push_back(path);

  // Fit the slopes over the five largest distances, as in the companion plot.
  const int fit_count = std::min<int>(5, static_cast<int>(rows.size()));
  std::vector<double> xs, s1, s2, s3;
  for (int i = static_cast<int>(rows.size()) - fit_count;
       i < static_cast<int>(rows.size()); ++i) {
    xs.push_back(rows[i][0]);
    s1.push_back(rows[i][1]);
    s2.push_back(rows[i][2]);
    s3.push_back(rows[i][3]);
  }
  out.status_lines.push_back(
      "slopes: seq=" + format_number(loglog_slope(xs, s1)) +
      " par=" + format_number(loglog_slope(xs, s2)) +
      " avg=" + format_number(loglog_slope(xs, s3)));
  return out;
}

RunOutcome run_projection_demo(const ExperimentConfig& config) {
  const ConfigSection* exp = config.file.find("experiment");
  const int cycles = config.max_cycles;

  std::vector<Eigen::MatrixXd> projectors;
  int dim = 0;
  if (exp->has("lines_angle")) {
    const double theta = exp->get_double("lines_angle");
    dim = 2;
    Eigen::MatrixXd b1(2, 1), b2(2, 1);
    b1 << 1.0, 0.0;
    b2 << std::cos(theta), std::sin(theta);
    projectors.push_back(orth_projector(SubspaceBasis(b1)));
    projectors.push_back(orth_projector(SubspaceBasis(b2)));
  } else {
    dim = exp->get_int("dim", 8);
    const std::vector<double> dims_list =
        exp->has("subspace_dims") ? exp->get_doubles("subspace_dims")
                                  : std::vector<double>{5, 5, 6};
    SplitMix64 rng(config.seed);
    for (double dval : dims_list) {
      const int d = static_cast<int>(dval);
      Eigen::MatrixXd b(dim, d);
      for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < d; ++j) b(i, j) = rng.normal();
      }
      projectors.push_back(orth_projector(SubspaceBasis(b)));
    }
  }

  SplitMix64 rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = rng.normal();

  const auto map = iterate_projections(IterationKind::alternating, projectors,
                                       v, cycles);
  const auto avg = iterate_projections(IterationKind::averaged, projectors, v,
                                       cycles);

  RunOutcome out;
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < map.errors.size(); ++k) {
    rows.push_back({static_cast<double>(k), map.errors[k], avg.errors[k]});
  }
  const auto path = config.out_dir / "projection.csv";
  write_csv(path, csv_header(config, "-", config.tol, cycles),
            {"iter", "error_map", "error_avgproj"}, rows);
  out.outputs.push_back(path);
  out.status_lines.push_back(
      "projection_demo: final MAP error " + format_number(map.errors.back()) +
      ", final averaged error " + format_number(avg.errors.back()));
  return out;
}

}  // namespace

RunOutcome run_config(const ExperimentConfig& config) {
  std::filesystem::create_directories(config.out_dir);
  switch (config.kind) {
    case ExperimentKind::solve: return run_solve(config);
    case ExperimentKind::reflect: return run_reflect(config);
    case ExperimentKind::triangle_convergence: return run_triangle(config);
    case ExperimentKind::divergence_case: return run_divergence(config);
    case ExperimentKind::distance_sweep: return run_sweep(config);
    case ExperimentKind::projection_demo: return run_projection_demo(config);
  }
  throw ExperimentError("unhandled experiment kind");
}

PlotData emit_plotdata(const std::filesystem::path& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw ExperimentError("cannot open " + csv_path.string());
  std::string line;
  std::vector<std::string> comments;
  std::string header;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      comments.push_back(line);
      continue;
    }
    if (header.empty()) {
      header = line;
      continue;
    }
    std::vector<double> row;
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      row.push_back(std::strtod(field.c_str(), nullptr));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw ExperimentError("CSV " + csv_path.string() + " has no data rows");
  }

  const bool is_sweep = header.rfind("R,", 0) == 0;
  const bool is_error_series = header.rfind("iter,", 0) == 0;
  if (!is_sweep && !is_error_series) {
    throw ExperimentError("unknown CSV schema: '" + header + "'");
  }

  std::vector<std::string> columns;
  {
    std::istringstream names(header);
    std::string name;
    while (std::getline(names, name, ',')) columns.push_back(name);
  }

  PlotData out;
  out.data_file = csv_path;
  out.data_file.replace_extension(".dat");
  out.script_file = csv_path;
  out.script_file.replace_extension(".gp");

  {
    std::ofstream data(out.data_file, std::ios::binary);
    for (const auto& c : comments) data << c << "\n";
    data << "#";
    for (const auto& c : columns) data << " " << c;
    data << "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        data << (i ? " " : "") << format_number(row[i]);
      }
      data << "\n";
    }
  }

  std::ofstream gp(out.script_file, std::ios::binary);
  gp << "set datafile missing 'nan'\n";
  if (is_error_series) {
    gp << "set logscale y\n"
       << "set xlabel 'cycle'\n"
       << "set ylabel 'error'\n"
       << "plot";
    for (std::size_t c = 1; c < columns.size(); ++c) {
      gp << (c > 1 ? "," : "") << " '" << out.data_file.filename().string()
         << "' using 1:" << c + 1 << " with linespoints title '" << columns[c]
         << "'";
    }
    gp << "\n";
  } else {
    // log-log sweep with fitted lines over the five largest distances
    const int fit_count = std::min<int>(5, static_cast<int>(rows.size()));
    std::vector<double> xs;
    for (int i = static_cast<int>(rows.size()) - fit_count;
         i < static_cast<int>(rows.size()); ++i) {
      xs.push_back(rows[i][0]);
    }
    gp << "set logscale xy\n"
       << "set xlabel 'distance'\n"
       << "set ylabel 'contraction factor'\n";
    std::ostringstream plot;
    plot << "plot";
    for (std::size_t c = 1; c < columns.size(); ++c) {
      std::vector<double> ys;
      for (int i = static_cast<int>(rows.size()) - fit_count;
           i < static_cast<int>(rows.size()); ++i) {
        ys.push_back(rows[i][c]);
      }
      const double slope = loglog_slope(xs, ys);
      out.slopes.push_back(slope);
      // intercept in log space for the overlay line
      double sy = 0, sx = 0;
      int m = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (ys[i] > 0 && std::isfinite(ys[i])) {
          sy += std::log(ys[i]);
          sx += std::log(xs[i]);
          ++m;
        }
      }
      const double intercept = m ? (sy - slope * sx) / m : kNaN;
      gp << "f" << c << "(x) = exp(" << format_number(intercept) << " + "
         << format_number(slope) << "*log(x))\n";
      gp << "print 'slope_" << columns[c] << " = " << format_number(slope)
         << "'\n";
      plot << (c > 1 ? "," : "") << " '" << out.data_file.filename().string()
           << "' using 1:" << c + 1 << " with points title '" << columns[c]
           << "', f" << c << "(x) with lines notitle";
    }
    gp << plot.str() << "\n";
  }
  return out;
}

}  // namespace mor
