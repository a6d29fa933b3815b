#include "testutil.hpp"

#include <cmath>
#include <memory>
#include <numbers>

#include "mor/bvp.hpp"

using namespace mor;

namespace {

constexpr double kPi = std::numbers::pi;

// Container of radius 10 around a concentric unit disk.
ProblemSpec annulus_problem(int n, BoundaryCondition inner) {
  auto layout = std::make_shared<GeometryLayout>(
      make_circle({0, 0}, 10.0, n, "container"),
      std::vector<BoundaryCurve>{make_circle({0, 0}, 1.0, n, "disk")});
  ProblemSpec p;
  p.layout = layout;
  p.conditions.push_back(std::move(inner));
  return p;
}

double annulus_dirichlet_exact(double rho) {
  return std::log(rho / 10.0) / std::log(1.0 / 10.0);
}

}  // namespace

TEST_CASE("concentric annulus with Dirichlet data matches the log solution") {
  ProblemSpec p =
      annulus_problem(128, DirichletCondition{Eigen::VectorXd::Ones(128)});
  const DirectSolution sol = solve_direct(p);
  for (double rho : {2.0, 5.0, 8.0}) {
    CHECK_NEAR(sol.field.value({rho, 0.0}), annulus_dirichlet_exact(rho), 1e-8);
    CHECK_NEAR(sol.field.value({0.0, -rho}), annulus_dirichlet_exact(rho), 1e-8);
  }
  CHECK_NEAR(sol.field.value({5.0, 0.0}), 0.30103, 1e-5);
  for (double r : sol.residuals) CHECK(r <= 1e-9);
}

TEST_CASE("all-zero data produce the identically zero field") {
  ProblemSpec p =
      annulus_problem(64, DirichletCondition{Eigen::VectorXd::Zero(64)});
  const DirectSolution sol = solve_direct(p);
  CHECK(sol.field.value({3.0, 1.0}) == 0.0);
  CHECK(sol.field.value({-6.0, 2.0}) == 0.0);
}

TEST_CASE("fourth-type annulus carries the prescribed flux") {
  const double flux = 3.5;
  ProblemSpec p = annulus_problem(128, FourthTypeCondition{flux});
  const DirectSolution sol = solve_direct(p);

  SUBCASE("field matches the radial solution") {
    for (double rho : {2.0, 5.0, 8.0}) {
      const double expected = flux / (2.0 * kPi) * std::log(rho / 10.0);
      CHECK_NEAR(sol.field.value({rho, 0.0}), expected, 1e-8);
    }
  }
  SUBCASE("surface constant") {
    REQUIRE(sol.constants[0].has_value());
    const double expected = flux / (2.0 * kPi) * std::log(1.0 / 10.0);
    CHECK_NEAR(*sol.constants[0], expected, 1e-8);
  }
  SUBCASE("discrete flux through the boundary") {
    CHECK_NEAR(boundary_flux(sol.field, *p.layout, 0), flux, 1e-8);
  }
  SUBCASE("trace is constant: standard deviation about c") {
    const Eigen::VectorXd trace = field_value_trace(sol.field, *p.layout, 0);
    const double mean = trace.mean();
    const double sd = std::sqrt((trace.array() - mean).square().mean());
    CHECK(sd <= 1e-8);
    CHECK_NEAR(mean, *sol.constants[0], 1e-8);
  }
}

TEST_CASE("one-object solve agrees with the direct solve") {
  ProblemSpec p =
      annulus_problem(128, DirichletCondition{Eigen::VectorXd::Ones(128)});
  const DirectSolution direct = solve_direct(p);
  const HarmonicField one = solve_one_object(
      p, 0, OneObjectRhs{Eigen::VectorXd::Ones(128), 0.0});
  for (double rho : {2.0, 5.0, 8.0}) {
    CHECK_NEAR(one.value({rho, 0.0}), direct.field.value({rho, 0.0}), 1e-10);
  }
}

TEST_CASE("Dirichlet subproblem with zero data returns the zero field") {
  ProblemSpec p =
      annulus_problem(64, DirichletCondition{Eigen::VectorXd::Zero(64)});
  const HarmonicField f =
      solve_one_object(p, 0, OneObjectRhs{Eigen::VectorXd::Zero(64), 0.0});
  CHECK(std::abs(f.value({4.0, 0.0})) < 1e-14);
}

TEST_CASE("fourth-type reflections carry zero total flux") {
  ProblemSpec p = annulus_problem(128, FourthTypeCondition{2.0});
  Eigen::VectorXd datum(128);
  const BoundaryCurve& c = p.layout->object(0);
  for (int i = 0; i < 128; ++i) datum[i] = 0.3 * c.node(i).x;
  // Remove the weighted mean so the datum is admissible.
  double mean = 0.0, total = 0.0;
  for (int i = 0; i < 128; ++i) {
    mean += datum[i] * c.weight(i);
    total += c.weight(i);
  }
  datum.array() -= mean / total;
  const HarmonicField f = solve_one_object(p, 0, OneObjectRhs{datum, 0.0});
  CHECK(std::abs(boundary_flux(f, *p.layout, 0)) <= 1e-9);
}

TEST_CASE("initial approximation") {
  SUBCASE("all-Dirichlet problems start from zero") {
    ProblemSpec p =
        annulus_problem(64, DirichletCondition{Eigen::VectorXd::Ones(64)});
    const HarmonicField init = solve_initial(p);
    CHECK(init.empty());
  }
  SUBCASE("single fourth-type object reproduces the radial solution") {
    const double flux = -1.25;
    ProblemSpec p = annulus_problem(128, FourthTypeCondition{flux});
    const HarmonicField init = solve_initial(p);
    for (double rho : {3.0, 6.0}) {
      const double expected = flux / (2.0 * kPi) * std::log(rho / 10.0);
      CHECK_NEAR(init.value({rho, 0.0}), expected, 1e-8);
    }
  }
  SUBCASE("two fourth-type objects carry their own charges") {
    auto layout = std::make_shared<GeometryLayout>(
        make_circle({0, 0}, 10.0, 128, "container"),
        std::vector<BoundaryCurve>{make_circle({-3, 0}, 1.0, 128, "a"),
                                   make_circle({3, 0}, 1.0, 128, "b")});
    ProblemSpec p;
    p.layout = layout;
    p.conditions.push_back(FourthTypeCondition{2.0});
    p.conditions.push_back(FourthTypeCondition{-0.5});
    const HarmonicField init = solve_initial(p);
    CHECK_NEAR(boundary_flux(init, *layout, 0), 2.0, 1e-8);
    CHECK_NEAR(boundary_flux(init, *layout, 1), -0.5, 1e-8);
  }
}

TEST_CASE("maximum principle spot check for an off-center Dirichlet solve") {
  auto layout = std::make_shared<GeometryLayout>(
      make_circle({0, 0}, 10.0, 128, "container"),
      std::vector<BoundaryCurve>{make_circle({2.5, 1.0}, 1.5, 128, "disk")});
  ProblemSpec p;
  p.layout = layout;
  Eigen::VectorXd data(128);
  const BoundaryCurve& c = layout->object(0);
  for (int i = 0; i < 128; ++i) data[i] = 1.0 + 0.5 * c.node(i).y;
  p.conditions.push_back(DirichletCondition{data});
  const DirectSolution sol = solve_direct(p);
  const double lo = std::min(0.0, data.minCoeff());
  const double hi = std::max(0.0, data.maxCoeff());
  for (const Vec2 probe : {Vec2{5.0, 5.0}, Vec2{-4.0, 0.5}, Vec2{0.5, -3.0}}) {
    const double u = sol.field.value(probe);
    CHECK(u >= lo - 1e-8);
    CHECK(u <= hi + 1e-8);
  }
}

TEST_CASE("spectral self-convergence on the annulus") {
  double previous = -1.0;
  for (int n : {16, 32, 64}) {
    ProblemSpec p =
        annulus_problem(n, DirichletCondition{Eigen::VectorXd::Ones(n)});
    const DirectSolution sol = solve_direct(p);
    double err = 0.0;
    for (double rho : {2.0, 5.0, 8.0}) {
      err = std::max(err, std::abs(sol.field.value({rho, 0.0}) -
                                   annulus_dirichlet_exact(rho)));
    }
    if (previous >= 0.0) {
      CHECK(err <= std::max(previous * 1e-4, 1e-12));
    }
    previous = err;
  }
}

TEST_CASE("exterior Neumann problem on one circle matches the dipole field") {
  const double a = 1.0;
  auto layout = std::make_shared<GeometryLayout>(
      std::nullopt,
      std::vector<BoundaryCurve>{make_circle({0, 0}, a, 128, "disk")});
  ProblemSpec p;
  p.layout = layout;
  Eigen::VectorXd data(128);
  for (int i = 0; i < 128; ++i) data[i] = layout->object(0).node(i).x / a;
  p.conditions.push_back(NeumannCondition{data});
  const DirectSolution sol = solve_direct(p);
  // du/drho = cos(theta) on rho=a decays as u = -a^2 cos(theta)/rho.
  for (double rho : {2.0, 5.0}) {
    CHECK_NEAR(sol.field.value({rho, 0.0}), -a * a / rho, 1e-10);
    CHECK_NEAR(sol.field.value({0.0, rho}), 0.0, 1e-10);
  }
}

TEST_CASE("exterior pure-Neumann data with nonzero mean are rejected") {
  auto layout = std::make_shared<GeometryLayout>(
      std::nullopt,
      std::vector<BoundaryCurve>{make_circle({0, 0}, 1.0, 64, "disk")});
  ProblemSpec p;
  p.layout = layout;
  p.conditions.push_back(NeumannCondition{Eigen::VectorXd::Ones(64)});
  CHECK_THROWS_AS(solve_direct(p), SolverError);
  CHECK_THROWS_AS(
      solve_one_object(p, 0, OneObjectRhs{Eigen::VectorXd::Ones(64), 0.0}),
      SolverError);
}

TEST_CASE("interior anchors are found for circles and cshapes") {
  const BoundaryCurve circle = make_circle({2.0, -1.0}, 0.5, 64);
  const Vec2 a1 = find_interior_anchor(circle);
  CHECK(winding_number(circle, a1) == 1);

  const BoundaryCurve cshape = make_cshape({0, 0}, 3.0, 5.0, kPi / 6.0, 256);
  const Vec2 a2 = find_interior_anchor(cshape);
  CHECK(winding_number(cshape, a2) == 1);
}

TEST_CASE("condition count mismatches are diagnosed") {
  auto layout = std::make_shared<GeometryLayout>(
      std::nullopt,
      std::vector<BoundaryCurve>{make_circle({0, 0}, 1.0, 64, "disk")});
  ProblemSpec p;
  p.layout = layout;
  CHECK_THROWS_AS(solve_direct(p), SolverError);
  p.conditions.push_back(DirichletCondition{Eigen::VectorXd::Ones(32)});
  CHECK_THROWS_AS(solve_direct(p), SolverError);
}
