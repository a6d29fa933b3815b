#include "testutil.hpp"

#include <cmath>
#include <numbers>

#include "mor/geometry.hpp"

using namespace mor;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("circle perimeter matches the analytic value") {
  const BoundaryCurve c = make_circle({0, 0}, 10.0, 128);
  CHECK_NEAR(c.perimeter(), 20.0 * kPi, 1e-12);
}

TEST_CASE("circle node at angle zero sits at (r, 0) with radial normal") {
  const BoundaryCurve c = make_circle({0, 0}, 10.0, 128);
  CHECK_NEAR(c.node(0).x, 10.0, 1e-14);
  CHECK_NEAR(c.node(0).y, 0.0, 1e-14);
  CHECK_NEAR(c.normal(0).x, 1.0, 1e-14);
  CHECK_NEAR(c.normal(0).y, 0.0, 1e-14);
}

TEST_CASE("discrete perimeters agree across resolutions") {
  const double p64 = make_circle({0, 0}, 1.0, 64).perimeter();
  const double p128 = make_circle({0, 0}, 1.0, 128).perimeter();
  CHECK(std::abs(p64 - p128) < 1e-13);
}

TEST_CASE("circle factory rejects bad arguments") {
  CHECK_THROWS_AS(make_circle({0, 0}, -1.0, 64), GeometryError);
  CHECK_THROWS_AS(make_circle({0, 0}, 0.0, 64), GeometryError);
  CHECK_THROWS_AS(make_circle({0, 0}, 1.0, 65), GeometryError);
  CHECK_THROWS_AS(make_circle({0, 0}, 1.0, 8), GeometryError);
}

TEST_CASE("normals are unit length and orthogonal to tangents") {
  for (const BoundaryCurve& c :
       {make_circle({1, -2}, 3.0, 64),
        make_cshape({0, 0}, 3.0, 5.0, kPi / 6.0, 256)}) {
    for (int i = 0; i < c.size(); ++i) {
      CHECK(std::abs(c.normal(i).norm() - 1.0) <= 1e-12);
      CHECK(std::abs(c.normal(i).dot(c.tangent(i))) / c.jacobian(i) <= 1e-12);
    }
  }
}

TEST_CASE("circle curvature equals 1/r at every node") {
  const BoundaryCurve c = make_circle({0, 0}, 2.5, 64);
  for (int i = 0; i < c.size(); ++i) {
    CHECK_NEAR(c.curvature(i), 1.0 / 2.5, 1e-10);
  }
}

TEST_CASE("cshape arc-length sum matches the closed form within 1%") {
  const BoundaryCurve c = make_cshape({0, 0}, 3.0, 5.0, kPi / 6.0, 512);
  const double expected = 46.0 * kPi / 3.0;
  CHECK(std::abs(c.perimeter() - expected) / expected < 0.01);
}

TEST_CASE("cshape rejects invalid radii ordering") {
  CHECK_THROWS_AS(make_cshape({0, 0}, 5.0, 3.0, kPi / 6.0, 128), GeometryError);
  CHECK_THROWS_AS(make_cshape({0, 0}, -1.0, 3.0, kPi / 6.0, 128), GeometryError);
  CHECK_THROWS_AS(make_cshape({0, 0}, 3.0, 5.0, 2.0, 128), GeometryError);
}

TEST_CASE("cshape stays closed and simple toward the half-annulus limit") {
  const BoundaryCurve c = make_cshape({0, 0}, 3.0, 5.0, kPi / 2.0 - 0.05, 256);
  const Vec2 gap = c.position(0.0) - c.position(2.0 * kPi);
  CHECK(gap.norm() < 1e-12);
  // No two distant nodes coincide.
  const int n = c.size();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 8; j < std::min(n, i + n - 8); ++j) {
      CHECK((c.node(i) - c.node(j)).norm() > 1e-6);
    }
  }
}

TEST_CASE("cshape winds once around a point of its body") {
  const BoundaryCurve c = make_cshape({0, 0}, 3.0, 5.0, kPi / 6.0, 256);
  const Vec2 body_point{-4.0, 0.0};
  CHECK(winding_number(c, body_point) == 1);
  const Vec2 hole_point{0.0, 0.0};
  CHECK(winding_number(c, hole_point) == 0);
}

TEST_CASE("reversing orientation negates normals exactly") {
  const BoundaryCurve c = make_cshape({0, 0}, 3.0, 5.0, kPi / 6.0, 128);
  const BoundaryCurve r = c.reversed();
  CHECK(r.counterclockwise() != c.counterclockwise());
  const int n = c.size();
  for (int i = 0; i < n; ++i) {
    const int j = (n - i) % n;
    CHECK(r.node(i).x == c.node(j).x);
    CHECK(r.normal(i).x == -c.normal(j).x);
    CHECK(r.normal(i).y == -c.normal(j).y);
  }
}

TEST_CASE("layout metrics: two unit circles four apart have gap two") {
  GeometryLayout layout(std::nullopt, {make_circle({0, 0}, 1.0, 64),
                                       make_circle({4, 0}, 1.0, 64)});
  const LayoutMetrics m = layout_metrics(layout);
  CHECK_NEAR(m.pair_distance[0][1], 2.0, 1e-10);
  SUBCASE("distance matrix is symmetric bitwise") {
    CHECK(m.pair_distance[0][1] == m.pair_distance[1][0]);
  }
}

TEST_CASE("layout metrics reject overlapping objects naming the pair") {
  // Unit circles at the vertices of an equilateral triangle with side 1.2
  // overlap (the side is smaller than the diameter).
  std::vector<BoundaryCurve> objects;
  const double circumradius = 1.2 / std::sqrt(3.0);
  for (int k = 0; k < 3; ++k) {
    const double a = 2.0 * kPi * k / 3.0;
    objects.push_back(make_circle(
        {circumradius * std::cos(a), circumradius * std::sin(a)}, 1.0, 64));
  }
  GeometryLayout layout(std::nullopt, std::move(objects));
  CHECK_THROWS_WITH_AS(layout_metrics(layout),
                       doctest::Contains("objects 0 and 1"), GeometryError);
}

TEST_CASE("single object without container reports its perimeter") {
  GeometryLayout layout(std::nullopt, {make_circle({0, 0}, 2.0, 64)});
  const LayoutMetrics m = layout_metrics(layout);
  CHECK(m.perimeter[0] == layout.object(0).perimeter());
}

TEST_CASE("objects must stay strictly inside the container") {
  GeometryLayout bad(make_circle({0, 0}, 2.0, 64),
                     {make_circle({1.5, 0}, 1.0, 64)});
  CHECK_THROWS_AS(layout_metrics(bad), GeometryError);

  GeometryLayout good(make_circle({0, 0}, 10.0, 64),
                      {make_circle({1.5, 0}, 1.0, 64)});
  CHECK_NOTHROW(layout_metrics(good));
}

TEST_CASE("point-curve distance is refined past the node spacing") {
  const BoundaryCurve c = make_circle({0, 0}, 1.0, 64);
  // Aim between two nodes where the node minimum alone would overshoot.
  const double t = kPi / 64.0;
  const Vec2 p{2.0 * std::cos(t), 2.0 * std::sin(t)};
  CHECK_NEAR(point_curve_distance(c, p), 1.0, 1e-10);
}
