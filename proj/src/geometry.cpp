#include "mcpzone/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mcpzone::geom {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;
constexpr double kMaxProjectableLatDeg = 89.0;

double wrap_lon_deg(double lon) {
  while (lon > 180.0) lon -= 360.0;
  while (lon < -180.0) lon += 360.0;
  return lon;
}

// Signed cross product of OA x OB.
double cross(const Point2D& o, const Point2D& a, const Point2D& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

}  // namespace

Polyline::Polyline(std::vector<Point2D> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 2) {
    throw std::invalid_argument("polyline needs at least 2 vertices");
  }
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (!is_finite(vertices_[i])) {
      throw std::invalid_argument("polyline vertex is not finite");
    }
    if (i > 0 && vertices_[i] == vertices_[i - 1]) {
      throw std::invalid_argument("polyline has identical consecutive vertices");
    }
  }
}

bool is_finite(const Point2D& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

void validate_geo(const GeoPoint& g) {
  if (!(std::isfinite(g.lon) && std::isfinite(g.lat)) || g.lon < -180.0 ||
      g.lon > 180.0 || g.lat < -90.0 || g.lat > 90.0) {
    throw std::invalid_argument("geographic point out of range");
  }
}

double squared_distance(const Point2D& a, const Point2D& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

double euclidean_distance(const Point2D& a, const Point2D& b) {
  return std::sqrt(squared_distance(a, b));
}

double polyline_arc_length(const Polyline& p) {
  const auto& v = p.vertices();
  double total = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    total += euclidean_distance(v[i - 1], v[i]);
  }
  return total;
}

Point2D polyline_midpoint(const Polyline& p) {
  const auto& v = p.vertices();
  const double half = polyline_arc_length(p) / 2.0;
  double walked = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double edge = euclidean_distance(v[i - 1], v[i]);
    if (walked + edge >= half) {
      const double t = edge > 0.0 ? (half - walked) / edge : 0.0;
      return {v[i - 1].x + t * (v[i].x - v[i - 1].x),
              v[i - 1].y + t * (v[i].y - v[i - 1].y)};
    }
    walked += edge;
  }
  return v.back();
}

double point_segment_distance(const Point2D& p, const Point2D& a, const Point2D& b) {
  const double len2 = squared_distance(a, b);
  if (len2 == 0.0) return euclidean_distance(p, a);
  double t = ((p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y)) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return euclidean_distance(p, {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
}

double point_polyline_distance(const Point2D& p, const Polyline& line) {
  const auto& v = line.vertices();
  double best = point_segment_distance(p, v[0], v[1]);
  for (std::size_t i = 2; i < v.size(); ++i) {
    best = std::min(best, point_segment_distance(p, v[i - 1], v[i]));
  }
  return best;
}

Point2D project_to_plane(const GeoPoint& g, const GeoPoint& origin) {
  validate_geo(g);
  validate_geo(origin);
  if (std::abs(g.lat) >= kMaxProjectableLatDeg ||
      std::abs(origin.lat) >= kMaxProjectableLatDeg) {
    throw std::invalid_argument("latitude too close to a pole to project");
  }
  const double dlon = wrap_lon_deg(g.lon - origin.lon) * kDegToRad;
  const double dlat = (g.lat - origin.lat) * kDegToRad;
  const double lat0 = origin.lat * kDegToRad;
  return {kEarthRadiusM * dlon * std::cos(lat0), kEarthRadiusM * dlat};
}

GeoPoint inverse_project(const Point2D& p, const GeoPoint& origin) {
  validate_geo(origin);
  if (std::abs(origin.lat) >= kMaxProjectableLatDeg) {
    throw std::invalid_argument("latitude too close to a pole to project");
  }
  const double lat0 = origin.lat * kDegToRad;
  GeoPoint g;
  g.lat = origin.lat + (p.y / kEarthRadiusM) * kRadToDeg;
  g.lon = wrap_lon_deg(origin.lon + (p.x / (kEarthRadiusM * std::cos(lat0))) * kRadToDeg);
  validate_geo(g);
  return g;
}

Ring convex_hull(std::vector<Point2D> points) {
  if (points.empty()) {
    throw std::invalid_argument("convex_hull: empty input");
  }
  std::sort(points.begin(), points.end(), [](const Point2D& a, const Point2D& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  points.erase(std::unique(points.begin(), points.end()), points.end());

  const std::size_t n = points.size();
  if (n <= 2) {
    return points;
  }

  // Monotone chain; lower hull then upper hull, strictly convex vertices only.
  Ring hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], points[i]) <= 0.0) --k;
    hull[k++] = points[i];
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = n - 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], points[i]) <= 0.0) --k;
    hull[k++] = points[i];
  }
  hull.resize(k - 1);  // last point repeats the first
  if (hull.size() == 2 && hull[0] == hull[1]) {
    hull.resize(1);
  }
  return hull;
}

bool point_in_ring(const Point2D& p, const Ring& ring, double eps) {
  if (ring.empty()) return false;
  if (ring.size() == 1) {
    return euclidean_distance(p, ring[0]) <= eps;
  }
  // A convex CCW ring keeps interior points on the left of every edge. For a
  // 2-vertex ring the two half-plane tests collapse to segment membership.
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Point2D& a = ring[i];
    const Point2D& b = ring[(i + 1) % ring.size()];
    const double edge_len = euclidean_distance(a, b);
    if (edge_len == 0.0) continue;
    if (cross(a, b, p) < -eps * edge_len) {
      return false;
    }
  }
  if (ring.size() == 2) {
    // Collinear ring: also require p within the segment's span.
    const Point2D& a = ring[0];
    const Point2D& b = ring[1];
    const double t = ((p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y)) /
                     squared_distance(a, b);
    return t >= -eps && t <= 1.0 + eps;
  }
  return true;
}

}  // namespace mcpzone::geom
