#include "mcpzone/zoning.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "mcpzone/io_util.hpp"
#include "mcpzone/spatial_index.hpp"

namespace mcpzone::zone {

namespace {

using geom::Point2D;

void validate(const ZoningParams& params) {
  if (!(params.radius_m > 0.0)) throw std::invalid_argument("zoning radius must be > 0");
  if (params.min_extent_m < 0.0) throw std::invalid_argument("min_extent must be >= 0");
  if (params.min_poles < 1) throw std::invalid_argument("min_poles must be >= 1");
}

double discovery_order_extent(const std::vector<Point2D>& locations) {
  double total = 0.0;
  for (std::size_t i = 1; i < locations.size(); ++i) {
    total += geom::euclidean_distance(locations[i - 1], locations[i]);
  }
  return total;
}

std::string zone_digest(const detect::CircuitSet& circuits,
                        const std::vector<std::string>& pole_ids) {
  std::string payload;
  for (const std::string& c : circuits) {
    payload += c;
    payload += '\x1f';
  }
  payload += '\x1e';
  for (const std::string& id : pole_ids) {
    payload += id;
    payload += '\x1f';
  }
  return "Z-" + io::hex16(io::fnv1a64(payload));
}

}  // namespace

std::vector<std::vector<std::size_t>> cluster_group(const detect::McpGroup& group,
                                                    const ZoningParams& params) {
  validate(params);
  if (group.members.empty()) {
    throw std::invalid_argument("cluster_group needs a non-empty group");
  }
  std::vector<Point2D> locations;
  locations.reserve(group.members.size());
  for (const detect::McpPole& m : group.members) {
    locations.push_back(m.location);
  }
  // Member positions ascend with pole ordinal, so the index tie-break of
  // radius_query is exactly the ordinal tie-break the contract asks for.
  const spatial::KdTree tree(locations);

  std::vector<std::vector<std::size_t>> clusters;
  std::vector<bool> queued(group.members.size(), false);
  for (std::size_t seed = 0; seed < group.members.size(); ++seed) {
    if (queued[seed]) continue;
    queued[seed] = true;
    std::vector<std::size_t> cluster;
    std::deque<std::size_t> frontier{seed};
    while (!frontier.empty()) {
      const std::size_t current = frontier.front();
      frontier.pop_front();
      cluster.push_back(group.members[current].pole_ordinal);
      for (const spatial::Neighbor& hit :
           tree.radius_query(locations[current], params.radius_m)) {
        if (!queued[hit.point_index]) {
          queued[hit.point_index] = true;
          frontier.push_back(hit.point_index);
        }
      }
    }
    clusters.push_back(std::move(cluster));
  }
  return clusters;
}

double zone_extent(const std::vector<Point2D>& locations) {
  if (locations.empty()) {
    throw std::invalid_argument("zone_extent needs at least one location");
  }
  const std::size_t n = locations.size();
  if (n == 1) return 0.0;

  // Prim's greedy tree growth from node 0; O(n^2) with no heap, which wins
  // for the dense all-pairs case. Total MST weight is unique even when the
  // chosen tree is not.
  std::vector<bool> in_tree(n, false);
  std::vector<double> best_d2(n, std::numeric_limits<double>::infinity());
  in_tree[0] = true;
  for (std::size_t j = 1; j < n; ++j) {
    best_d2[j] = geom::squared_distance(locations[0], locations[j]);
  }
  double total = 0.0;
  for (std::size_t added = 1; added < n; ++added) {
    std::size_t next = n;
    double next_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (!in_tree[j] && best_d2[j] < next_d2) {
        next_d2 = best_d2[j];
        next = j;
      }
    }
    in_tree[next] = true;
    total += std::sqrt(next_d2);
    for (std::size_t j = 0; j < n; ++j) {
      if (!in_tree[j]) {
        best_d2[j] = std::min(best_d2[j], geom::squared_distance(locations[next], locations[j]));
      }
    }
  }
  return total;
}

std::vector<RiskZone> build_zones(const std::vector<detect::McpGroup>& groups,
                                  const model::PoleSet& poles,
                                  const ZoningParams& params) {
  validate(params);
  std::vector<RiskZone> zones;
  for (const detect::McpGroup& group : groups) {
    if (group.members.empty()) continue;
    for (std::vector<std::size_t>& cluster : cluster_group(group, params)) {
      std::vector<Point2D> locations;
      locations.reserve(cluster.size());
      for (const std::size_t ordinal : cluster) {
        locations.push_back(poles.at(ordinal).location);
      }
      const double extent = params.extent == ExtentMode::kMst
                                ? zone_extent(locations)
                                : discovery_order_extent(locations);
      if (cluster.size() < params.min_poles || extent < params.min_extent_m) {
        continue;
      }
      RiskZone z;
      z.circuits = group.key;
      z.member_ordinals = std::move(cluster);
      z.pole_count = z.member_ordinals.size();
      z.extent_m = extent;
      z.pole_ids.reserve(z.pole_count);
      for (const std::size_t ordinal : z.member_ordinals) {
        z.pole_ids.push_back(poles.at(ordinal).pole_id);
      }
      std::sort(z.pole_ids.begin(), z.pole_ids.end());
      z.zone_id = zone_digest(z.circuits, z.pole_ids);
      z.hull = geom::convex_hull(locations);
      z.bbox_min = locations[0];
      z.bbox_max = locations[0];
      double sum_x = 0.0;
      double sum_y = 0.0;
      for (const Point2D& p : locations) {
        z.bbox_min.x = std::min(z.bbox_min.x, p.x);
        z.bbox_min.y = std::min(z.bbox_min.y, p.y);
        z.bbox_max.x = std::max(z.bbox_max.x, p.x);
        z.bbox_max.y = std::max(z.bbox_max.y, p.y);
        sum_x += p.x;
        sum_y += p.y;
      }
      z.centroid = {sum_x / static_cast<double>(z.pole_count),
                    sum_y / static_cast<double>(z.pole_count)};
      zones.push_back(std::move(z));
    }
  }
  std::sort(zones.begin(), zones.end(), [](const RiskZone& a, const RiskZone& b) {
    if (a.circuits != b.circuits) return a.circuits < b.circuits;
    if (a.centroid.x != b.centroid.x) return a.centroid.x < b.centroid.x;
    return a.centroid.y < b.centroid.y;
  });
  return zones;
}

std::vector<HistogramBin> length_histogram_m(const std::vector<double>& extents_m,
                                             double bin_width_mi, double overflow_mi) {
  if (!(bin_width_mi > 0.0)) {
    throw std::invalid_argument("histogram bin width must be > 0");
  }
  if (overflow_mi < 0.0) {
    throw std::invalid_argument("histogram overflow threshold must be >= 0");
  }
  const std::size_t regular =
      std::max<std::size_t>(1, static_cast<std::size_t>(
                                   std::floor(overflow_mi / bin_width_mi + 1e-9)));
  std::vector<HistogramBin> bins(regular + 1);
  for (std::size_t i = 0; i < regular; ++i) {
    bins[i].lo_mi = static_cast<double>(i) * bin_width_mi;
    bins[i].hi_mi = static_cast<double>(i + 1) * bin_width_mi;
  }
  bins[regular].lo_mi = static_cast<double>(regular) * bin_width_mi;
  bins[regular].hi_mi = std::nullopt;

  for (const double extent_m : extents_m) {
    const double miles = extent_m / geom::kMetersPerMile;
    const auto idx = static_cast<std::size_t>(
        std::min(std::floor(miles / bin_width_mi), static_cast<double>(regular)));
    bins[idx].count += 1;
  }
  return bins;
}

std::vector<HistogramBin> length_histogram(const std::vector<RiskZone>& zones,
                                           double bin_width_mi, double overflow_mi) {
  std::vector<double> extents;
  extents.reserve(zones.size());
  for (const RiskZone& z : zones) {
    extents.push_back(z.extent_m);
  }
  return length_histogram_m(extents, bin_width_mi, overflow_mi);
}

}  // namespace mcpzone::zone
