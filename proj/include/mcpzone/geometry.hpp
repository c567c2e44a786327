#pragma once

#include <stdexcept>
#include <vector>

namespace mcpzone::geom {

/// Mean Earth radius used by the local equirectangular projection.
inline constexpr double kEarthRadiusM = 6'371'000.0;

/// Exactly 1609.344 meters per statute mile.
inline constexpr double kMetersPerMile = 1609.344;

/// Planar point, easting/northing in meters.
struct Point2D {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point2D&) const = default;
};

/// Geographic point, WGS84 lon/lat in degrees.
struct GeoPoint {
  double lon = 0.0;
  double lat = 0.0;
};

/// Open ring of hull vertices in counterclockwise order. Degenerate inputs
/// yield degenerate rings (one vertex for a point, two for a collinear set).
using Ring = std::vector<Point2D>;

/// Ordered planar polyline with at least 2 vertices and no two consecutive
/// vertices identical. Throws std::invalid_argument on violation.
class Polyline {
 public:
  explicit Polyline(std::vector<Point2D> vertices);

  const std::vector<Point2D>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }

  bool operator==(const Polyline&) const = default;

 private:
  std::vector<Point2D> vertices_;
};

bool is_finite(const Point2D& p);

/// Throws std::invalid_argument unless lon in [-180, 180] and lat in [-90, 90].
void validate_geo(const GeoPoint& g);

double squared_distance(const Point2D& a, const Point2D& b);

/// Euclidean distance sqrt((ax-bx)^2 + (ay-by)^2).
double euclidean_distance(const Point2D& a, const Point2D& b);

/// Sum of consecutive-vertex Euclidean distances.
double polyline_arc_length(const Polyline& p);

/// The point at exactly half the arc length along the polyline.
Point2D polyline_midpoint(const Polyline& p);

/// Distance from p to the closed segment [a, b].
double point_segment_distance(const Point2D& p, const Point2D& a, const Point2D& b);

/// Minimum distance from p to any segment of the polyline.
double point_polyline_distance(const Point2D& p, const Polyline& line);

/// Local equirectangular projection about `origin`:
///   x = R * dlon * cos(lat0), y = R * dlat  (angles in radians).
/// Exact at the origin. Rejects |lat| >= 89 degrees for either argument.
Point2D project_to_plane(const GeoPoint& g, const GeoPoint& origin);

/// Inverse of project_to_plane about the same origin.
GeoPoint inverse_project(const Point2D& p, const GeoPoint& origin);

/// Convex hull (monotone chain), counterclockwise, starting at the
/// lexicographically smallest vertex. Collinear boundary points are dropped.
/// Throws std::invalid_argument on empty input.
Ring convex_hull(std::vector<Point2D> points);

/// Boundary-inclusive point-in-convex-ring test; degenerate rings supported.
bool point_in_ring(const Point2D& p, const Ring& ring, double eps = 1e-9);

}  // namespace mcpzone::geom
