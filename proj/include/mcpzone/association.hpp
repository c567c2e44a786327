#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mcpzone/model.hpp"

namespace mcpzone::assoc {

/// How pole-to-wire distance is measured.
enum class DistanceMode {
  kCentroid,      // distance to the wire's arc-length midpoint (default)
  kNearestPoint,  // distance to the closest point on the wire polyline
};

struct AssociationParams {
  std::size_t k = 3;       // wires retained per pole
  double d_max_m = 50.0;   // association cutoff, inclusive
  DistanceMode distance = DistanceMode::kCentroid;
  bool trust_declared = false;  // use declared_pole_ids instead of geometry
};

/// One wire attached to a pole.
struct AssociationEntry {
  std::size_t wire_ordinal = 0;  // index into the WireSet
  std::string circuit_id;
  double distance_m = 0.0;
};

/// entries[i] lists the wires associated with pole ordinal i, nearest first.
struct AssociationResult {
  std::vector<std::vector<AssociationEntry>> entries;
};

/// Attaches to every pole its k nearest wires within d_max_m. Poles with no
/// wire in range get an empty list. Ties on distance resolve toward the wire
/// whose wire_id sorts first.
AssociationResult associate(const model::PoleSet& poles, const model::WireSet& wires,
                            const AssociationParams& params = {});

void write_associations_csv(const model::PoleSet& poles, const model::WireSet& wires,
                            const AssociationResult& result, const std::string& path);

}  // namespace mcpzone::assoc
