#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "mcpzone/spatial_index.hpp"
#include "oracles.hpp"

using mcpzone::geom::Point2D;
using mcpzone::spatial::KdTree;
using mcpzone::spatial::Neighbor;
using mcpzone::spatial::linear_scan_knn;
using mcpzone::spatial::linear_scan_radius;

namespace {

std::vector<Point2D> grid3x3(double spacing) {
  std::vector<Point2D> pts;
  for (int row = 0; row < 3; ++row) {
    for (int col = 0; col < 3; ++col) {
      pts.push_back({col * spacing, row * spacing});
    }
  }
  return pts;
}

bool sorted_by_distance_then_index(const std::vector<Neighbor>& hits) {
  for (std::size_t i = 1; i < hits.size(); ++i) {
    if (hits[i - 1].distance_m > hits[i].distance_m) return false;
    if (hits[i - 1].distance_m == hits[i].distance_m &&
        hits[i - 1].point_index >= hits[i].point_index) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("construction rejects bad input") {
  CHECK_THROWS_AS(KdTree({}), std::invalid_argument);
  CHECK_THROWS_AS(KdTree({{0.0, std::nan("")}}), std::invalid_argument);
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(KdTree({{inf, 0.0}}), std::invalid_argument);
}

TEST_CASE("knn on a 3x3 grid") {
  const KdTree tree(grid3x3(10.0));

  SUBCASE("nearest three from a corner") {
    const auto hits = tree.knn({0.0, 0.0}, 3, 1e9);
    REQUIRE(hits.size() == 3);
    CHECK(hits[0].point_index == 0);
    CHECK(hits[0].distance_m == 0.0);
    // Two points at exactly 10; the lower ordinal wins the earlier slot.
    CHECK(hits[1].point_index == 1);
    CHECK(hits[1].distance_m == doctest::Approx(10.0));
    CHECK(hits[2].point_index == 3);
    CHECK(hits[2].distance_m == doctest::Approx(10.0));
  }

  SUBCASE("max_dist is inclusive") {
    const auto hits = tree.knn({0.0, 0.0}, 5, 10.0);
    REQUIRE(hits.size() == 3);  // the diagonal neighbor at 14.14 is out
    CHECK(hits[0].point_index == 0);
    CHECK(hits[1].point_index == 1);
    CHECK(hits[2].point_index == 3);
  }

  SUBCASE("k larger than the population returns everything in range") {
    const auto hits = tree.knn({10.0, 10.0}, 99, 1e9);
    CHECK(hits.size() == 9);
    CHECK(hits[0].point_index == 4);  // the center itself
    CHECK(sorted_by_distance_then_index(hits));
  }

  SUBCASE("query far outside still resolves") {
    const auto hits = tree.knn({1000.0, 1000.0}, 1, 1e9);
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].point_index == 8);
  }

  SUBCASE("nothing in range gives an empty result") {
    CHECK(tree.knn({1000.0, 1000.0}, 3, 5.0).empty());
  }
}

TEST_CASE("radius query on a 3x3 grid") {
  const KdTree tree(grid3x3(10.0));

  const auto at_r = tree.radius_query({0.0, 0.0}, 10.0);
  REQUIRE(at_r.size() == 3);  // self plus the two axis neighbors, inclusive
  CHECK(at_r[0].point_index == 0);
  CHECK(at_r[1].point_index == 1);
  CHECK(at_r[2].point_index == 3);

  const auto just_under = tree.radius_query({0.0, 0.0}, 9.999);
  CHECK(just_under.size() == 1);

  const auto all = tree.radius_query({10.0, 10.0}, 15.0);
  CHECK(all.size() == 9);
  CHECK(sorted_by_distance_then_index(all));
}

TEST_CASE("duplicate coordinates break ties by ordinal") {
  const std::vector<Point2D> dups(5, Point2D{7.0, 7.0});
  const KdTree tree(dups, 2);

  const auto three = tree.knn({7.0, 7.0}, 3, 1.0);
  REQUIRE(three.size() == 3);
  CHECK(three[0].point_index == 0);
  CHECK(three[1].point_index == 1);
  CHECK(three[2].point_index == 2);

  const auto all = tree.radius_query({7.0, 7.0}, 0.5);
  REQUIRE(all.size() == 5);
  for (std::size_t i = 0; i < all.size(); ++i) {
    CHECK(all[i].point_index == i);
    CHECK(all[i].distance_m == 0.0);
  }
}

TEST_CASE("invalid query parameters throw") {
  const KdTree tree(grid3x3(10.0));
  CHECK_THROWS_AS(tree.knn({0.0, 0.0}, 0, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(tree.knn({0.0, 0.0}, 3, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(tree.knn({0.0, 0.0}, 3, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(tree.knn({0.0, 0.0}, 3, std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(tree.radius_query({0.0, 0.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(tree.radius_query({0.0, 0.0}, -2.0), std::invalid_argument);
}

TEST_CASE("leaf size does not change results") {
  oracle::TestRng rng(11);
  const auto pts = rng.cloud(150, 500.0);
  const KdTree bucket1(pts, 1);
  const KdTree bucket4(pts, 4);
  const KdTree bucket64(pts, 64);  // larger than the cloud: one leaf

  for (int q = 0; q < 25; ++q) {
    const Point2D probe = rng.point(550.0);
    const auto a = bucket1.knn(probe, 5, 80.0);
    CHECK(a == bucket4.knn(probe, 5, 80.0));
    CHECK(a == bucket64.knn(probe, 5, 80.0));
    const auto r = bucket1.radius_query(probe, 60.0);
    CHECK(r == bucket4.radius_query(probe, 60.0));
    CHECK(r == bucket64.radius_query(probe, 60.0));
  }
}

TEST_CASE("tree agrees exactly with the exhaustive scan") {
  oracle::TestRng rng(22);
  const double inf = std::numeric_limits<double>::infinity();

  for (int trial = 0; trial < 40; ++trial) {
    // Alternate flavors: uniform, heavily duplicated (snapped to a coarse
    // grid), and collinear. Duplicates and shared coordinates stress the
    // ordinal tie-break; collinear input stresses degenerate splits.
    const std::size_t n = 20 + rng.index(180);
    std::vector<Point2D> pts;
    pts.reserve(n);
    const int flavor = trial % 3;
    for (std::size_t i = 0; i < n; ++i) {
      Point2D p = rng.point(400.0);
      if (flavor == 1) {
        p.x = std::floor(p.x / 50.0) * 50.0;
        p.y = std::floor(p.y / 50.0) * 50.0;
      } else if (flavor == 2) {
        p.x = 123.0;
      }
      pts.push_back(p);
    }
    const KdTree tree(pts, 1 + rng.index(16));

    for (int q = 0; q < 8; ++q) {
      Point2D probe = rng.point(450.0);
      if (q % 4 == 0) probe = pts[rng.index(pts.size())];  // exact hits
      const std::size_t k = 1 + rng.index(n + 3);
      for (const double max_dist : {25.0, 120.0, inf}) {
        CHECK(tree.knn(probe, k, max_dist) ==
              linear_scan_knn(pts, probe, k, max_dist));
      }
      for (const double r : {10.0, 75.0, 300.0}) {
        CHECK(tree.radius_query(probe, r) == linear_scan_radius(pts, probe, r));
      }
    }
  }
}

TEST_CASE("scan oracle sanity") {
  // The oracle itself must honor the inclusive cutoff and the ordering.
  const std::vector<Point2D> pts{{0.0, 0.0}, {3.0, 4.0}, {3.0, 4.0}, {6.0, 8.0}};
  const auto hits = linear_scan_knn(pts, {0.0, 0.0}, 3, 5.0);
  REQUIRE(hits.size() == 3);
  CHECK(hits[0].point_index == 0);
  CHECK(hits[1].point_index == 1);
  CHECK(hits[1].distance_m == doctest::Approx(5.0));
  CHECK(hits[2].point_index == 2);

  const auto within = linear_scan_radius(pts, {0.0, 0.0}, 5.0);
  CHECK(within.size() == 3);
}
