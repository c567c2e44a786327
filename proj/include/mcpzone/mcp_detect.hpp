#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mcpzone/association.hpp"
#include "mcpzone/geometry.hpp"
#include "mcpzone/model.hpp"

namespace mcpzone::detect {

/// Sorted, de-duplicated circuit ids. Equality is element-wise.
using CircuitSet = std::vector<std::string>;

/// Builds a CircuitSet: trims surrounding whitespace, sorts, drops duplicates
/// and empties.
CircuitSet make_circuit_set(std::vector<std::string> circuit_ids);

/// A pole carrying two or more distinct circuits.
struct McpPole {
  std::size_t pole_ordinal = 0;
  geom::Point2D location;
  CircuitSet circuits;  // size >= 2
};

/// Poles grouped for per-configuration clustering.
struct McpGroup {
  CircuitSet key;
  std::vector<McpPole> members;  // ascending pole ordinal
};

enum class GroupingMode {
  kExact,    // group by identical CircuitSet (default)
  kOverlap,  // merge groups whose members share >= 2 circuits
};

/// Returns exactly the poles whose associations span more than one unique
/// circuit, in pole-ordinal order. Repeated wires of one circuit count once.
std::vector<McpPole> detect_mcp(const assoc::AssociationResult& table,
                                const model::PoleSet& poles);

/// Partitions MCPs into groups ordered lexicographically by key. In overlap
/// mode, configurations sharing at least two circuits merge transitively and
/// the group key becomes the union of the merged members' circuits.
std::vector<McpGroup> group_by_configuration(const std::vector<McpPole>& mcps,
                                             GroupingMode mode = GroupingMode::kExact);

}  // namespace mcpzone::detect
