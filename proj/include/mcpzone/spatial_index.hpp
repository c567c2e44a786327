#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mcpzone/geometry.hpp"

namespace mcpzone::spatial {

using geom::Point2D;

/// One query hit: ordinal of the indexed point plus its true distance in
/// meters (never a squared distance).
struct Neighbor {
  std::size_t point_index = 0;
  double distance_m = 0.0;

  bool operator==(const Neighbor&) const = default;
};

/// Immutable 2-D KD-tree over a point collection. Alternating x/y split axes
/// by depth, median split with ties broken by input ordinal, leaf buckets of
/// `leaf_size` points. All queries are exact and return results sorted
/// ascending by (distance, point_index); range checks are boundary inclusive.
/// Safe for unrestricted concurrent queries after construction.
class KdTree {
 public:
  static constexpr std::size_t kDefaultLeafSize = 16;

  /// Throws std::invalid_argument on an empty or non-finite input.
  explicit KdTree(std::vector<Point2D> points,
                  std::size_t leaf_size = kDefaultLeafSize);

  std::size_t size() const { return points_.size(); }
  const Point2D& point(std::size_t ordinal) const { return points_[ordinal]; }
  std::span<const Point2D> points() const { return points_; }

  /// Up to k nearest indexed points with distance <= max_dist.
  std::vector<Neighbor> knn(const Point2D& query, std::size_t k,
                            double max_dist) const;

  /// All indexed points with distance <= r.
  std::vector<Neighbor> radius_query(const Point2D& query, double r) const;

 private:
  struct Node {
    double split = 0.0;
    std::uint32_t left = 0;    // node index; 0 == none (root is 0 but never a child)
    std::uint32_t right = 0;
    std::uint32_t begin = 0;   // leaf range into order_
    std::uint32_t end = 0;
    std::uint8_t axis = 0;
    bool leaf = false;
  };

  std::uint32_t build(std::uint32_t begin, std::uint32_t end, int depth);

  std::vector<Point2D> points_;       // ordinal order as given
  std::vector<std::uint32_t> order_;  // permutation partitioned by the tree
  std::vector<Node> nodes_;
  std::size_t leaf_size_;
};

/// Exhaustive-scan reference with the exact knn contract (used as the
/// verification oracle for the tree).
std::vector<Neighbor> linear_scan_knn(std::span<const Point2D> points,
                                      const Point2D& query, std::size_t k,
                                      double max_dist);

/// Exhaustive-scan reference with the exact radius_query contract.
std::vector<Neighbor> linear_scan_radius(std::span<const Point2D> points,
                                         const Point2D& query, double r);

}  // namespace mcpzone::spatial
