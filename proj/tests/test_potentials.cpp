#include "testutil.hpp"

#include <cmath>
#include <memory>
#include <numbers>

#include "mor/field.hpp"
#include "mor/geometry.hpp"
#include "mor/potentials.hpp"

using namespace mor;

namespace {

constexpr double kPi = std::numbers::pi;

std::shared_ptr<GeometryLayout> single_object(BoundaryCurve curve) {
  std::vector<BoundaryCurve> objects;
  objects.push_back(std::move(curve));
  return std::make_shared<GeometryLayout>(std::nullopt, std::move(objects));
}

}  // namespace

TEST_CASE("log-kernel quadrature integrates trigonometric modes exactly") {
  // Oracle: int_0^2pi ln(4 sin^2((t-s)/2)) cos(m s) ds = -(2pi/m) cos(m t).
  const int n = 32;
  const Eigen::VectorXd r = log_kernel_weights(n);
  for (int m : {1, 3, 7}) {
    for (int i : {0, 5}) {
      double sum = 0.0;
      for (int j = 0; j < n; ++j) {
        sum += r[(i - j + n) % n] * std::cos(m * (2.0 * kPi * j / n));
      }
      const double expected = -(2.0 * kPi / m) * std::cos(m * (2.0 * kPi * i / n));
      CHECK_NEAR(sum, expected, 1e-12);
    }
  }
  SUBCASE("constant mode integrates to zero") {
    double sum = 0.0;
    for (int j = 0; j < n; ++j) sum += r[j];
    CHECK(std::abs(sum) < 1e-12);
  }
}

TEST_CASE("double-layer Gauss identities on circles") {
  const BoundaryCurve c = make_circle({0.5, -0.25}, 1.5, 128);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(c.size());

  SUBCASE("inside: -1") {
    const Eigen::MatrixXd m =
        evaluation_matrix(c, {{0.5, -0.25}, {1.0, 0.25}}, LayerKind::double_layer);
    const Eigen::VectorXd v = m * ones;
    CHECK_NEAR(v[0], -1.0, 1e-10);
    CHECK_NEAR(v[1], -1.0, 1e-10);
  }
  SUBCASE("outside: 0") {
    const Eigen::MatrixXd m =
        evaluation_matrix(c, {{3.0, 3.0}}, LayerKind::double_layer);
    CHECK_NEAR((m * ones)[0], 0.0, 1e-10);
  }
  SUBCASE("on-surface principal value: -1/2 row sums") {
    for (int n : {64, 128, 256}) {
      const BoundaryCurve cc = make_circle({0, 0}, 2.0, n);
      const Eigen::MatrixXd m = layer_matrix(cc, cc, LayerKind::double_layer,
                                             TraceKind::value, Side::principal);
      const Eigen::VectorXd sums = m.rowwise().sum();
      for (int i = 0; i < n; ++i) {
        CHECK_NEAR(sums[i], -0.5, 1e-10);
      }
    }
  }
  SUBCASE("jump terms land on the interior/exterior limits") {
    const Eigen::MatrixXd inside = layer_matrix(c, c, LayerKind::double_layer,
                                                TraceKind::value, Side::interior);
    const Eigen::MatrixXd outside = layer_matrix(c, c, LayerKind::double_layer,
                                                 TraceKind::value, Side::exterior);
    CHECK_NEAR((inside * ones)[3], -1.0, 1e-10);
    CHECK_NEAR((outside * ones)[3], 0.0, 1e-10);
  }
}

TEST_CASE("Gauss identities hold on the smoothed cshape") {
  // The blended curve is C2 rather than analytic, so the quadrature is
  // algebraic there; tolerances reflect that.
  for (int n : {128, 256}) {
    const BoundaryCurve c = make_cshape({0, 0}, 3.0, 5.0, kPi / 6.0, n);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(c.size());
    const Eigen::MatrixXd inside =
        evaluation_matrix(c, {{-4.0, 0.0}}, LayerKind::double_layer);
    CHECK_NEAR((inside * ones)[0], -1.0, 2e-4);
    const Eigen::MatrixXd outside =
        evaluation_matrix(c, {{0.0, 0.0}, {8.0, 0.0}}, LayerKind::double_layer);
    CHECK_NEAR((outside * ones)[0], 0.0, 2e-4);
    CHECK_NEAR((outside * ones)[1], 0.0, 2e-4);
    const Eigen::MatrixXd self = layer_matrix(c, c, LayerKind::double_layer,
                                              TraceKind::value, Side::principal);
    CHECK_NEAR((self * ones).cwiseAbs().maxCoeff(), 0.5, 2e-3);
  }
}

TEST_CASE("uniform single layer reproduces the radial potential") {
  const double a = 1.5, q = 2.25;
  auto layout = single_object(make_circle({0, 0}, a, 128));
  HarmonicField field(layout);
  field.add_density({0, LayerKind::single,
                     Eigen::VectorXd::Constant(128, q / (2.0 * kPi * a))});

  SUBCASE("declared far-field charge") {
    CHECK_NEAR(field.total_charge(), -q, 1e-12);
  }
  SUBCASE("potential at two radii") {
    for (double rho : {2.5, 7.0}) {
      const double expected = -(q / (2.0 * kPi)) * std::log(rho);
      CHECK_NEAR(field.value({rho, 0.0}), expected, 1e-10);
      CHECK_NEAR(field.value({0.0, -rho}), expected, 1e-10);
    }
  }
  SUBCASE("gradient is radial") {
    const double rho = 3.0;
    const Vec2 g = field.gradient({rho, 0.0});
    CHECK_NEAR(g.x, -q / (2.0 * kPi * rho), 1e-8);
    CHECK_NEAR(g.y, 0.0, 1e-10);
  }
  SUBCASE("probe flux equals the enclosed charge") {
    CHECK_NEAR(probe_flux(field, {0, 0}, 4.0), field.total_charge(), 1e-8);
  }
}

TEST_CASE("zero densities evaluate to zero") {
  auto layout = single_object(make_circle({0, 0}, 1.0, 64));
  HarmonicField field(layout);
  field.add_density({0, LayerKind::single, Eigen::VectorXd::Zero(64)});
  const FieldEvaluation eval =
      evaluate_field(field, {{2.0, 0.0}, {0.1, 0.1}});
  CHECK(eval.values[0] == 0.0);
  CHECK(eval.values[1] == 0.0);
}

TEST_CASE("evaluation rejects on-curve points and flags near-curve points") {
  auto layout = single_object(make_circle({0, 0}, 1.0, 64));
  HarmonicField field(layout);
  field.add_density({0, LayerKind::single, Eigen::VectorXd::Ones(64)});

  CHECK_THROWS_AS(evaluate_field(field, {{1.0, 0.0}}), FieldError);

  const double spacing = 2.0 * kPi / 64.0;
  const FieldEvaluation near = evaluate_field(field, {{1.0 + 0.5 * spacing, 0.0}});
  CHECK(near.near_boundary[0]);
  const FieldEvaluation far = evaluate_field(field, {{2.0, 0.0}});
  CHECK_FALSE(far.near_boundary[0]);
}

TEST_CASE("fields satisfy the five-point Laplace stencil off the curves") {
  auto layout = single_object(make_circle({0.2, 0.1}, 1.0, 128));
  HarmonicField field(layout);
  Eigen::VectorXd sigma(128), mu(128);
  for (int i = 0; i < 128; ++i) {
    sigma[i] = std::sin(3.0 * 2.0 * kPi * i / 128.0);
    mu[i] = std::cos(2.0 * 2.0 * kPi * i / 128.0) + 0.3;
  }
  field.add_density({0, LayerKind::single, sigma});
  field.add_density({0, LayerKind::double_layer, mu});

  const double h = 2.5e-4;
  for (const Vec2 p : {Vec2{1.4, 0.3}, Vec2{-0.8, -1.1}, Vec2{0.2, 2.0}}) {
    const double lap = (field.value({p.x + h, p.y}) + field.value({p.x - h, p.y}) +
                        field.value({p.x, p.y + h}) + field.value({p.x, p.y - h}) -
                        4.0 * field.value(p)) /
                       (h * h);
    CHECK(std::abs(lap) < 1e-6);
  }
}

TEST_CASE("hypersingular self-trace is rejected") {
  const BoundaryCurve c = make_circle({0, 0}, 1.0, 64);
  CHECK_THROWS_AS(layer_matrix(c, c, LayerKind::double_layer,
                               TraceKind::normal_derivative, Side::exterior),
                  PotentialError);
}

TEST_CASE("single-layer normal derivative jump relations on a circle") {
  const BoundaryCurve c = make_circle({0, 0}, 1.0, 128);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(c.size());
  const Eigen::MatrixXd ext =
      layer_matrix(c, c, LayerKind::single, TraceKind::normal_derivative,
                   Side::exterior);
  const Eigen::MatrixXd inte =
      layer_matrix(c, c, LayerKind::single, TraceKind::normal_derivative,
                   Side::interior);
  // Uniform unit density on the unit circle: du/dn = -1 outside, 0 inside.
  CHECK_NEAR((ext * ones)[10], -1.0, 1e-10);
  CHECK_NEAR((inte * ones)[10], 0.0, 1e-10);
}
