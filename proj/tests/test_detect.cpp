#include <doctest.h>

#include <string>
#include <vector>

#include "mcpzone/association.hpp"
#include "mcpzone/mcp_detect.hpp"
#include "mcpzone/model.hpp"
#include "oracles.hpp"

using namespace mcpzone;
using detect::CircuitSet;
using detect::GroupingMode;
using detect::McpPole;

namespace {

/// Association table stub: per pole, the circuits it sees (one fake wire per
/// circuit string, ordinals fabricated).
assoc::AssociationResult table_of(const std::vector<std::vector<std::string>>& per_pole) {
  assoc::AssociationResult result;
  std::size_t wire_ordinal = 0;
  for (const auto& circuits : per_pole) {
    std::vector<assoc::AssociationEntry> list;
    for (const auto& c : circuits) list.push_back({wire_ordinal++, c, 10.0});
    result.entries.push_back(std::move(list));
  }
  return result;
}

model::PoleSet poles_at(std::size_t n) {
  model::PoleSet poles;
  for (std::size_t i = 0; i < n; ++i) {
    poles.add({"P-" + std::to_string(i), {static_cast<double>(i) * 100.0, 0.0}, {}});
  }
  return poles;
}

McpPole mcp(std::size_t ordinal, CircuitSet circuits) {
  return {ordinal, {static_cast<double>(ordinal), 0.0}, std::move(circuits)};
}

}  // namespace

TEST_CASE("circuit sets trim, sort, and de-duplicate") {
  CHECK(detect::make_circuit_set({" A ", "B", "A", "", "  "}) == CircuitSet{"A", "B"});
  CHECK(detect::make_circuit_set({"z", "y", "x"}) == CircuitSet{"x", "y", "z"});
  CHECK(detect::make_circuit_set({}) == CircuitSet{});
  CHECK(detect::make_circuit_set({"only"}) == CircuitSet{"only"});
}

TEST_CASE("a pole is flagged only when its unique circuit count exceeds one") {
  const auto poles = poles_at(5);
  const auto table = table_of({
      {"A", "A"},         // two wires, one circuit: not flagged
      {"A", "B"},         // flagged
      {},                 // no wires: not flagged
      {" A", "A "},       // whitespace variants of one circuit: not flagged
      {"A", "B", "A"},    // duplicate plus a second circuit: flagged
  });

  const auto mcps = detect::detect_mcp(table, poles);
  REQUIRE(mcps.size() == 2);
  CHECK(mcps[0].pole_ordinal == 1);
  CHECK(mcps[0].circuits == CircuitSet{"A", "B"});
  CHECK(mcps[0].location.x == 100.0);
  CHECK(mcps[1].pole_ordinal == 4);
  CHECK(mcps[1].circuits == CircuitSet{"A", "B"});
}

TEST_CASE("detection agrees with an independent recount over real associations") {
  oracle::TestRng rng(41);
  model::WireSet wires;
  for (int i = 0; i < 60; ++i) {
    const geom::Point2D c = rng.point(600.0);
    wires.add({"W-" + std::to_string(100 + i), "CKT-" + std::to_string(i % 6),
               geom::Polyline({{c.x, c.y - 5.0}, {c.x, c.y + 5.0}}), 10.0, {}, {}});
  }
  model::PoleSet poles;
  for (int i = 0; i < 80; ++i) {
    poles.add({"P-" + std::to_string(i), rng.point(600.0), {}});
  }

  const auto table = assoc::associate(poles, wires);
  const auto mcps = detect::detect_mcp(table, poles);

  std::vector<bool> flagged(poles.size(), false);
  for (const auto& m : mcps) {
    flagged[m.pole_ordinal] = true;
    // Reported circuits match the recount through the wire set itself.
    std::vector<std::size_t> ordinals;
    for (const auto& e : table.entries[m.pole_ordinal]) ordinals.push_back(e.wire_ordinal);
    CHECK(m.circuits.size() == oracle::unique_circuit_count(ordinals, wires));
    CHECK(m.circuits.size() >= 2);
  }
  for (std::size_t i = 0; i < poles.size(); ++i) {
    std::vector<std::size_t> ordinals;
    for (const auto& e : table.entries[i]) ordinals.push_back(e.wire_ordinal);
    CHECK(flagged[i] == (oracle::unique_circuit_count(ordinals, wires) > 1));
  }

  // Ordinal order is preserved.
  for (std::size_t i = 1; i < mcps.size(); ++i) {
    CHECK(mcps[i - 1].pole_ordinal < mcps[i].pole_ordinal);
  }
}

TEST_CASE("exact grouping partitions by identical circuit set") {
  const std::vector<McpPole> mcps{
      mcp(0, {"A", "B"}),
      mcp(1, {"A", "B", "C"}),
      mcp(2, {"A", "B"}),
      mcp(3, {"B", "C"}),
      mcp(4, {"A", "B", "C"}),
  };
  const auto groups = detect::group_by_configuration(mcps);

  REQUIRE(groups.size() == 3);
  // Lexicographic key order.
  CHECK(groups[0].key == CircuitSet{"A", "B"});
  CHECK(groups[1].key == CircuitSet{"A", "B", "C"});
  CHECK(groups[2].key == CircuitSet{"B", "C"});

  REQUIRE(groups[0].members.size() == 2);
  CHECK(groups[0].members[0].pole_ordinal == 0);
  CHECK(groups[0].members[1].pole_ordinal == 2);
  REQUIRE(groups[1].members.size() == 2);
  CHECK(groups[1].members[0].pole_ordinal == 1);
  CHECK(groups[1].members[1].pole_ordinal == 4);
  REQUIRE(groups[2].members.size() == 1);

  // Partition property: every input lands in exactly one group, keyed by its
  // own circuit set.
  std::size_t total = 0;
  for (const auto& g : groups) {
    total += g.members.size();
    for (const auto& m : g.members) CHECK(m.circuits == g.key);
  }
  CHECK(total == mcps.size());
}

TEST_CASE("grouping an empty detection result is empty") {
  CHECK(detect::group_by_configuration({}).empty());
  CHECK(detect::group_by_configuration({}, GroupingMode::kOverlap).empty());
}

TEST_CASE("overlap grouping merges configurations sharing two circuits") {
  SUBCASE("a single shared circuit does not merge") {
    const std::vector<McpPole> mcps{mcp(0, {"A", "B"}), mcp(1, {"B", "C"})};
    const auto groups = detect::group_by_configuration(mcps, GroupingMode::kOverlap);
    REQUIRE(groups.size() == 2);
    CHECK(groups[0].key == CircuitSet{"A", "B"});
    CHECK(groups[1].key == CircuitSet{"B", "C"});
  }

  SUBCASE("two shared circuits merge and the key becomes the union") {
    const std::vector<McpPole> mcps{
        mcp(0, {"A", "B", "C"}),
        mcp(1, {"B", "C", "D"}),
        mcp(2, {"X", "Y"}),
    };
    const auto groups = detect::group_by_configuration(mcps, GroupingMode::kOverlap);
    REQUIRE(groups.size() == 2);
    CHECK(groups[0].key == CircuitSet{"A", "B", "C", "D"});
    REQUIRE(groups[0].members.size() == 2);
    CHECK(groups[0].members[0].pole_ordinal == 0);
    CHECK(groups[0].members[1].pole_ordinal == 1);
    CHECK(groups[1].key == CircuitSet{"X", "Y"});
  }

  SUBCASE("merging is transitive across a chain") {
    const std::vector<McpPole> mcps{
        mcp(3, {"A", "B"}),
        mcp(1, {"A", "B", "C"}),
        mcp(2, {"B", "C", "X"}),  // shares {B, C} with the middle link only
        mcp(0, {"Q", "R"}),
    };
    const auto groups = detect::group_by_configuration(mcps, GroupingMode::kOverlap);
    REQUIRE(groups.size() == 2);
    CHECK(groups[0].key == CircuitSet{"A", "B", "C", "X"});
    REQUIRE(groups[0].members.size() == 3);
    // Members re-sorted by ordinal after the merge.
    CHECK(groups[0].members[0].pole_ordinal == 1);
    CHECK(groups[0].members[1].pole_ordinal == 2);
    CHECK(groups[0].members[2].pole_ordinal == 3);
    CHECK(groups[1].key == CircuitSet{"Q", "R"});
  }

  SUBCASE("exact mode leaves the same input unmerged") {
    const std::vector<McpPole> mcps{mcp(0, {"A", "B", "C"}), mcp(1, {"B", "C", "D"})};
    CHECK(detect::group_by_configuration(mcps).size() == 2);
  }
}
