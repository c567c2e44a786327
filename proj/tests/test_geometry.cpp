#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "mcpzone/geometry.hpp"
#include "oracles.hpp"

using namespace mcpzone::geom;

namespace {

double shoelace_area(const Ring& ring) {
  double twice = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Point2D& a = ring[i];
    const Point2D& b = ring[(i + 1) % ring.size()];
    twice += a.x * b.y - b.x * a.y;
  }
  return twice / 2.0;
}

}  // namespace

TEST_CASE("polyline construction enforces its invariants") {
  CHECK_THROWS_AS(Polyline({{0.0, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(Polyline({}), std::invalid_argument);
  CHECK_THROWS_AS(Polyline({{0.0, 0.0}, {0.0, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(Polyline({{0.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}}),
                  std::invalid_argument);
  const double nan = std::nan("");
  CHECK_THROWS_AS(Polyline({{0.0, 0.0}, {nan, 1.0}}), std::invalid_argument);

  // Non-consecutive repeats are legal (a polyline may revisit a vertex).
  const Polyline zigzag({{0.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}, {0.0, 1.0}});
  CHECK(zigzag.size() == 4);
}

TEST_CASE("arc length and midpoint on exact shapes") {
  const Polyline straight({{0.0, 0.0}, {10.0, 0.0}});
  CHECK(polyline_arc_length(straight) == doctest::Approx(10.0));
  CHECK(polyline_midpoint(straight).x == doctest::Approx(5.0));
  CHECK(polyline_midpoint(straight).y == doctest::Approx(0.0));

  // Half length lands exactly on the corner vertex.
  const Polyline corner({{0.0, 0.0}, {10.0, 0.0}, {10.0, 10.0}});
  CHECK(polyline_arc_length(corner) == doctest::Approx(20.0));
  CHECK(polyline_midpoint(corner).x == doctest::Approx(10.0));
  CHECK(polyline_midpoint(corner).y == doctest::Approx(0.0));

  // Unequal pieces: total 6, half 3 sits inside the first segment.
  const Polyline uneven({{0.0, 0.0}, {4.0, 0.0}, {4.0, 2.0}});
  const Point2D mid = polyline_midpoint(uneven);
  CHECK(mid.x == doctest::Approx(3.0));
  CHECK(mid.y == doctest::Approx(0.0));
}

TEST_CASE("midpoint matches the cumulative-length formulation on random lines") {
  oracle::TestRng rng(101);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Point2D> vertices;
    const std::size_t n = 2 + rng.index(9);
    Point2D cursor = rng.point(1000.0);
    vertices.push_back(cursor);
    for (std::size_t i = 1; i < n; ++i) {
      cursor.x += rng.uniform(-80.0, 80.0);
      cursor.y += rng.uniform(-80.0, 80.0);
      if (cursor == vertices.back()) cursor.x += 1.0;
      vertices.push_back(cursor);
    }
    const Polyline line(vertices);
    const Point2D got = polyline_midpoint(line);
    const Point2D want = oracle::arc_midpoint(line);
    CHECK(got.x == doctest::Approx(want.x).epsilon(1e-12));
    CHECK(got.y == doctest::Approx(want.y).epsilon(1e-12));
    // The midpoint must split the arc exactly in half when measured back.
    CHECK(oracle::dist(got, want) < 1e-6);
  }
}

TEST_CASE("point to segment distance") {
  SUBCASE("interior projection") {
    CHECK(point_segment_distance({5.0, 3.0}, {0.0, 0.0}, {10.0, 0.0}) ==
          doctest::Approx(3.0));
  }
  SUBCASE("clamps to the near endpoint") {
    CHECK(point_segment_distance({-3.0, 4.0}, {0.0, 0.0}, {10.0, 0.0}) ==
          doctest::Approx(5.0));
    CHECK(point_segment_distance({13.0, -4.0}, {0.0, 0.0}, {10.0, 0.0}) ==
          doctest::Approx(5.0));
  }
  SUBCASE("degenerate segment is a point") {
    CHECK(point_segment_distance({3.0, 4.0}, {0.0, 0.0}, {0.0, 0.0}) ==
          doctest::Approx(5.0));
  }
  SUBCASE("on the segment is zero") {
    CHECK(point_segment_distance({7.5, 0.0}, {0.0, 0.0}, {10.0, 0.0}) ==
          doctest::Approx(0.0));
  }
}

TEST_CASE("polyline distance agrees with the per-segment oracle") {
  const Polyline corner({{0.0, 0.0}, {10.0, 0.0}, {10.0, 10.0}});
  CHECK(point_polyline_distance({5.0, -2.0}, corner) == doctest::Approx(2.0));
  CHECK(point_polyline_distance({12.0, 5.0}, corner) == doctest::Approx(2.0));
  // Inside the elbow the nearest feature is whichever leg is closer.
  CHECK(point_polyline_distance({8.0, 3.0}, corner) == doctest::Approx(2.0));

  oracle::TestRng rng(202);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Point2D> vertices;
    const std::size_t n = 2 + rng.index(6);
    for (std::size_t i = 0; i < n; ++i) {
      Point2D v = rng.point(500.0);
      if (!vertices.empty() && v == vertices.back()) v.x += 1.0;
      vertices.push_back(v);
    }
    const Polyline line(vertices);
    const Point2D probe = rng.point(500.0);
    CHECK(point_polyline_distance(probe, line) ==
          doctest::Approx(oracle::min_distance_to(probe, line)).epsilon(1e-12));
  }
}

TEST_CASE("projection is exact at the origin and invertible nearby") {
  const GeoPoint origin{-72.0, 42.0};
  const Point2D at_origin = project_to_plane(origin, origin);
  CHECK(at_origin.x == doctest::Approx(0.0));
  CHECK(at_origin.y == doctest::Approx(0.0));

  oracle::TestRng rng(303);
  for (int trial = 0; trial < 100; ++trial) {
    const GeoPoint g{origin.lon + rng.uniform(-0.05, 0.05),
                     origin.lat + rng.uniform(-0.05, 0.05)};
    const GeoPoint back = inverse_project(project_to_plane(g, origin), origin);
    CHECK(back.lon == doctest::Approx(g.lon).epsilon(1e-12));
    CHECK(back.lat == doctest::Approx(g.lat).epsilon(1e-12));
  }
}

TEST_CASE("planar distances track great-circle distances at survey scale") {
  const GeoPoint origin{-72.0, 42.0};
  oracle::TestRng rng(404);
  for (int trial = 0; trial < 100; ++trial) {
    const GeoPoint a{origin.lon + rng.uniform(-0.03, 0.03),
                     origin.lat + rng.uniform(-0.03, 0.03)};
    const GeoPoint b{origin.lon + rng.uniform(-0.03, 0.03),
                     origin.lat + rng.uniform(-0.03, 0.03)};
    const double planar =
        euclidean_distance(project_to_plane(a, origin), project_to_plane(b, origin));
    const double sphere = oracle::haversine_m(a, b);
    if (sphere < 100.0) continue;  // relative error is meaningless that close
    CHECK(std::abs(planar - sphere) / sphere < 0.005);
  }
}

TEST_CASE("projection rejects out-of-range and near-polar input") {
  const GeoPoint origin{0.0, 0.0};
  CHECK_THROWS_AS(project_to_plane({181.0, 0.0}, origin), std::invalid_argument);
  CHECK_THROWS_AS(project_to_plane({0.0, 91.0}, origin), std::invalid_argument);
  CHECK_THROWS_AS(project_to_plane({0.0, 89.0}, origin), std::invalid_argument);
  CHECK_THROWS_AS(project_to_plane({0.0, -89.5}, origin), std::invalid_argument);
  CHECK_THROWS_AS(project_to_plane({0.0, 0.0}, {0.0, 89.2}), std::invalid_argument);
  CHECK_NOTHROW(project_to_plane({0.0, 88.9}, origin));
}

TEST_CASE("projection wraps the antimeridian") {
  const GeoPoint origin{179.95, 0.0};
  const Point2D p = project_to_plane({-179.95, 0.0}, origin);
  // 0.1 degrees east, not 359.9 degrees west.
  const double want = kEarthRadiusM * 0.1 * std::numbers::pi / 180.0;
  CHECK(p.x == doctest::Approx(want).epsilon(1e-9));
  CHECK(p.y == doctest::Approx(0.0));
}

TEST_CASE("convex hull of simple shapes") {
  SUBCASE("square with interior point") {
    const Ring hull = convex_hull(
        {{0.0, 0.0}, {1.0, 0.0}, {0.5, 0.5}, {1.0, 1.0}, {0.0, 1.0}});
    REQUIRE(hull.size() == 4);
    CHECK(hull[0] == Point2D{0.0, 0.0});
    CHECK(hull[1] == Point2D{1.0, 0.0});
    CHECK(hull[2] == Point2D{1.0, 1.0});
    CHECK(hull[3] == Point2D{0.0, 1.0});
    CHECK(shoelace_area(hull) == doctest::Approx(1.0));
  }
  SUBCASE("collinear points collapse to their extremes") {
    const Ring hull = convex_hull({{2.0, 2.0}, {0.0, 0.0}, {10.0, 10.0}, {5.0, 5.0}});
    REQUIRE(hull.size() == 2);
    CHECK(hull[0] == Point2D{0.0, 0.0});
    CHECK(hull[1] == Point2D{10.0, 10.0});
  }
  SUBCASE("coincident points collapse to one vertex") {
    const Ring hull = convex_hull({{3.0, 4.0}, {3.0, 4.0}, {3.0, 4.0}});
    REQUIRE(hull.size() == 1);
    CHECK(hull[0] == Point2D{3.0, 4.0});
  }
  SUBCASE("boundary midpoints are dropped") {
    const Ring hull =
        convex_hull({{0.0, 0.0}, {2.0, 0.0}, {1.0, 0.0}, {2.0, 2.0}, {0.0, 2.0}});
    CHECK(hull.size() == 4);
  }
  SUBCASE("empty input throws") {
    CHECK_THROWS_AS(convex_hull({}), std::invalid_argument);
  }
}

TEST_CASE("convex hull properties on random clouds") {
  oracle::TestRng rng(505);
  for (int trial = 0; trial < 40; ++trial) {
    const auto pts = rng.cloud(3 + rng.index(120), 1000.0);
    const Ring hull = convex_hull(pts);

    if (hull.size() >= 3) {
      CHECK(shoelace_area(hull) > 0.0);  // counterclockwise
    }
    // Hull vertices come from the input.
    for (const Point2D& v : hull) {
      CHECK(std::find(pts.begin(), pts.end(), v) != pts.end());
    }
    // Every input point is contained, by both containment routines.
    for (const Point2D& p : pts) {
      CHECK(point_in_ring(p, hull, 1e-7));
      CHECK(oracle::inside_convex_ccw(p, hull, 1e-7));
    }
    // Idempotence: the hull of the hull is the hull.
    std::vector<Point2D> again(hull.begin(), hull.end());
    CHECK(convex_hull(again) == hull);
  }
}

TEST_CASE("point_in_ring handles degenerate rings") {
  SUBCASE("single vertex") {
    const Ring dot{{5.0, 5.0}};
    CHECK(point_in_ring({5.0, 5.0}, dot));
    CHECK_FALSE(point_in_ring({5.0, 5.1}, dot));
  }
  SUBCASE("two vertices behave as a segment") {
    const Ring seg{{0.0, 0.0}, {10.0, 0.0}};
    CHECK(point_in_ring({5.0, 0.0}, seg));
    CHECK(point_in_ring({0.0, 0.0}, seg));
    CHECK(point_in_ring({10.0, 0.0}, seg));
    CHECK_FALSE(point_in_ring({11.0, 0.0}, seg));   // past the span
    CHECK_FALSE(point_in_ring({5.0, 0.5}, seg));    // lateral offset
    CHECK_FALSE(point_in_ring({-0.5, 0.0}, seg));
  }
  SUBCASE("full ring, boundary inclusive") {
    const Ring square{{0.0, 0.0}, {10.0, 0.0}, {10.0, 10.0}, {0.0, 10.0}};
    CHECK(point_in_ring({5.0, 5.0}, square));
    CHECK(point_in_ring({0.0, 0.0}, square));
    CHECK(point_in_ring({10.0, 5.0}, square));
    CHECK_FALSE(point_in_ring({10.001, 5.0}, square));
    CHECK_FALSE(point_in_ring({-0.001, 5.0}, square));
  }
}

TEST_CASE("random containment agrees with the half-plane oracle") {
  oracle::TestRng rng(606);
  for (int trial = 0; trial < 30; ++trial) {
    const auto pts = rng.cloud(4 + rng.index(40), 100.0);
    const Ring hull = convex_hull(pts);
    if (hull.size() < 3) continue;
    for (int probe = 0; probe < 50; ++probe) {
      const Point2D p = rng.point(120.0);
      // Stay clear of the boundary where eps conventions may differ.
      bool near_edge = false;
      for (std::size_t i = 0; i < hull.size(); ++i) {
        if (point_segment_distance(p, hull[i], hull[(i + 1) % hull.size()]) < 1e-6) {
          near_edge = true;
          break;
        }
      }
      if (near_edge) continue;
      CHECK(point_in_ring(p, hull) == oracle::inside_convex_ccw(p, hull));
    }
  }
}

TEST_CASE("unit constants") {
  CHECK(kMetersPerMile == 1609.344);
  CHECK(kEarthRadiusM == 6'371'000.0);
}
