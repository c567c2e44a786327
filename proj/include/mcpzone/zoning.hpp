#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mcpzone/geometry.hpp"
#include "mcpzone/mcp_detect.hpp"
#include "mcpzone/model.hpp"

namespace mcpzone::zone {

enum class ExtentMode {
  kMst,             // total Euclidean minimum-spanning-tree length (default)
  kDiscoveryOrder,  // sum of consecutive hops in BFS discovery order
};

struct ZoningParams {
  double radius_m = 200.0;      // flood-fill hop radius, inclusive
  double min_extent_m = 200.0;  // zones below this extent are dropped
  std::size_t min_poles = 2;    // zones with fewer members are dropped
  ExtentMode extent = ExtentMode::kMst;
};

struct RiskZone {
  std::string zone_id;  // "Z-" + digest of circuits and member ids
  detect::CircuitSet circuits;
  std::vector<std::size_t> member_ordinals;  // BFS discovery order
  std::vector<std::string> pole_ids;         // sorted ascending
  std::size_t pole_count = 0;
  double extent_m = 0.0;
  geom::Ring hull;  // open convex ring; 1 or 2 vertices when degenerate
  geom::Point2D bbox_min;
  geom::Point2D bbox_max;
  geom::Point2D centroid;  // mean of member locations
};

/// Splits a group into maximal components connected by hops of length
/// <= radius_m. Each component starts a breadth-first fill at its
/// lowest-ordinal member; neighbors join the frontier in (distance, ordinal)
/// order and members are listed in discovery order.
std::vector<std::vector<std::size_t>> cluster_group(const detect::McpGroup& group,
                                                    const ZoningParams& params);

/// Total edge length of the Euclidean minimum spanning tree; 0 for a
/// singleton. Unique even under distance ties (every MST of a graph has the
/// same total weight).
double zone_extent(const std::vector<geom::Point2D>& locations);

/// Clusters every group and materializes the survivors (pole_count >=
/// min_poles and extent_m >= min_extent_m) with extent, hull, bbox, and
/// centroid, sorted by (circuits, centroid.x, centroid.y).
std::vector<RiskZone> build_zones(const std::vector<detect::McpGroup>& groups,
                                  const model::PoleSet& poles,
                                  const ZoningParams& params);

struct HistogramBin {
  double lo_mi = 0.0;
  std::optional<double> hi_mi;  // nullopt = unbounded overflow bin
  std::size_t count = 0;
};

/// Half-open 1-mile-style bins [i*w, (i+1)*w) over zone extents, with a
/// trailing unbounded bin starting at overflow_mi. Every bin is emitted,
/// including empty ones.
std::vector<HistogramBin> length_histogram(const std::vector<RiskZone>& zones,
                                           double bin_width_mi = 1.0,
                                           double overflow_mi = 5.0);

/// Same binning over plain extents in meters (used by the `hist` subcommand).
std::vector<HistogramBin> length_histogram_m(const std::vector<double>& extents_m,
                                             double bin_width_mi = 1.0,
                                             double overflow_mi = 5.0);

}  // namespace mcpzone::zone
