#include "mcpzone/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mcpzone::spatial {

namespace {

double coord(const Point2D& p, int axis) { return axis == 0 ? p.x : p.y; }

/// Candidate ordering inside a knn search: squared distance first, input
/// ordinal second. The ordinal tie-break makes results reproducible for
/// duplicate coordinates and symmetric layouts.
struct Candidate {
  double d2;
  std::uint32_t index;

  bool operator<(const Candidate& o) const {
    return d2 < o.d2 || (d2 == o.d2 && index < o.index);
  }
};

void sort_neighbors(std::vector<Candidate>& hits) {
  std::sort(hits.begin(), hits.end());
}

std::vector<Neighbor> to_neighbors(std::vector<Candidate>& hits) {
  sort_neighbors(hits);
  std::vector<Neighbor> out;
  out.reserve(hits.size());
  for (const Candidate& c : hits) {
    out.push_back({c.index, std::sqrt(c.d2)});
  }
  return out;
}

}  // namespace

KdTree::KdTree(std::vector<Point2D> points, std::size_t leaf_size)
    : points_(std::move(points)), leaf_size_(std::max<std::size_t>(1, leaf_size)) {
  if (points_.empty()) {
    throw std::invalid_argument("KdTree: empty point set");
  }
  for (const Point2D& p : points_) {
    if (!geom::is_finite(p)) {
      throw std::invalid_argument("KdTree: non-finite point");
    }
  }
  order_.resize(points_.size());
  for (std::uint32_t i = 0; i < order_.size(); ++i) order_[i] = i;
  nodes_.reserve(2 * points_.size() / leaf_size_ + 2);
  build(0, static_cast<std::uint32_t>(points_.size()), 0);
}

std::uint32_t KdTree::build(std::uint32_t begin, std::uint32_t end, int depth) {
  const std::uint32_t node_index = static_cast<std::uint32_t>(nodes_.size());
  nodes_.emplace_back();
  if (end - begin <= leaf_size_) {
    Node& n = nodes_[node_index];
    n.leaf = true;
    n.begin = begin;
    n.end = end;
    return node_index;
  }
  const int axis = depth % 2;
  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid,
                   order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     const double ca = coord(points_[a], axis);
                     const double cb = coord(points_[b], axis);
                     return ca < cb || (ca == cb && a < b);
                   });
  const double split = coord(points_[order_[mid]], axis);
  // Left subtree holds coordinates <= split, right holds >= split; the median
  // element itself goes right. Exhaustive and disjoint by construction.
  const std::uint32_t left = build(begin, mid, depth + 1);
  const std::uint32_t right = build(mid, end, depth + 1);
  Node& n = nodes_[node_index];
  n.split = split;
  n.axis = static_cast<std::uint8_t>(axis);
  n.left = left;
  n.right = right;
  return node_index;
}

std::vector<Neighbor> KdTree::knn(const Point2D& query, std::size_t k,
                                  double max_dist) const {
  if (k < 1) {
    throw std::invalid_argument("knn: k must be >= 1");
  }
  if (!(max_dist > 0.0)) {
    throw std::invalid_argument("knn: max_dist must be > 0");
  }
  const double max_d2 = max_dist * max_dist;

  // Max-heap over (d2, index): top() is the current worst kept candidate.
  std::vector<Candidate> heap;
  heap.reserve(k + 1);
  const auto heap_less = [](const Candidate& a, const Candidate& b) { return a < b; };

  const auto bound_d2 = [&]() {
    return heap.size() == k ? heap.front().d2 : max_d2;
  };

  const auto visit = [&](auto&& self, std::uint32_t node_index) -> void {
    const Node& node = nodes_[node_index];
    if (node.leaf) {
      for (std::uint32_t i = node.begin; i < node.end; ++i) {
        const std::uint32_t idx = order_[i];
        const double d2 = geom::squared_distance(query, points_[idx]);
        if (d2 > max_d2) continue;
        const Candidate c{d2, idx};
        if (heap.size() < k) {
          heap.push_back(c);
          std::push_heap(heap.begin(), heap.end(), heap_less);
        } else if (c < heap.front()) {
          std::pop_heap(heap.begin(), heap.end(), heap_less);
          heap.back() = c;
          std::push_heap(heap.begin(), heap.end(), heap_less);
        }
      }
      return;
    }
    const double diff = coord(query, node.axis) - node.split;
    const std::uint32_t near = diff < 0.0 ? node.left : node.right;
    const std::uint32_t far = diff < 0.0 ? node.right : node.left;
    self(self, near);
    // Descend on equality: the far side may hold an equal-distance point with
    // a smaller ordinal.
    if (diff * diff <= bound_d2()) {
      self(self, far);
    }
  };
  visit(visit, 0);
  return to_neighbors(heap);
}

std::vector<Neighbor> KdTree::radius_query(const Point2D& query, double r) const {
  if (!(r > 0.0)) {
    throw std::invalid_argument("radius_query: r must be > 0");
  }
  const double r2 = r * r;
  std::vector<Candidate> hits;
  const auto visit = [&](auto&& self, std::uint32_t node_index) -> void {
    const Node& node = nodes_[node_index];
    if (node.leaf) {
      for (std::uint32_t i = node.begin; i < node.end; ++i) {
        const std::uint32_t idx = order_[i];
        const double d2 = geom::squared_distance(query, points_[idx]);
        if (d2 <= r2) {
          hits.push_back({d2, idx});
        }
      }
      return;
    }
    const double diff = coord(query, node.axis) - node.split;
    if (diff <= 0.0) {
      self(self, node.left);
      if (diff * diff <= r2) self(self, node.right);
    } else {
      self(self, node.right);
      if (diff * diff <= r2) self(self, node.left);
    }
  };
  visit(visit, 0);
  return to_neighbors(hits);
}

std::vector<Neighbor> linear_scan_knn(std::span<const Point2D> points,
                                      const Point2D& query, std::size_t k,
                                      double max_dist) {
  if (k < 1) {
    throw std::invalid_argument("linear_scan_knn: k must be >= 1");
  }
  if (!(max_dist > 0.0)) {
    throw std::invalid_argument("linear_scan_knn: max_dist must be > 0");
  }
  const double max_d2 = max_dist * max_dist;
  std::vector<Candidate> all;
  for (std::uint32_t i = 0; i < points.size(); ++i) {
    const double d2 = geom::squared_distance(query, points[i]);
    if (d2 <= max_d2) {
      all.push_back({d2, i});
    }
  }
  sort_neighbors(all);
  if (all.size() > k) all.resize(k);
  std::vector<Neighbor> out;
  out.reserve(all.size());
  for (const Candidate& c : all) out.push_back({c.index, std::sqrt(c.d2)});
  return out;
}

std::vector<Neighbor> linear_scan_radius(std::span<const Point2D> points,
                                         const Point2D& query, double r) {
  if (!(r > 0.0)) {
    throw std::invalid_argument("linear_scan_radius: r must be > 0");
  }
  const double r2 = r * r;
  std::vector<Candidate> all;
  for (std::uint32_t i = 0; i < points.size(); ++i) {
    const double d2 = geom::squared_distance(query, points[i]);
    if (d2 <= r2) {
      all.push_back({d2, i});
    }
  }
  std::vector<Neighbor> out;
  out.reserve(all.size());
  sort_neighbors(all);
  for (const Candidate& c : all) out.push_back({c.index, std::sqrt(c.d2)});
  return out;
}

}  // namespace mcpzone::spatial
