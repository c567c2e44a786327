#include "mcpzone/mcp_detect.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "mcpzone/io_util.hpp"

namespace mcpzone::detect {

CircuitSet make_circuit_set(std::vector<std::string> circuit_ids) {
  CircuitSet set;
  set.reserve(circuit_ids.size());
  for (std::string& id : circuit_ids) {
    std::string trimmed(io::trim(id));
    if (!trimmed.empty()) set.push_back(std::move(trimmed));
  }
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  return set;
}

std::vector<McpPole> detect_mcp(const assoc::AssociationResult& table,
                                const model::PoleSet& poles) {
  if (table.entries.size() != poles.size()) {
    throw std::invalid_argument("association table does not match the pole set");
  }
  std::vector<McpPole> mcps;
  for (std::size_t i = 0; i < poles.size(); ++i) {
    std::vector<std::string> circuits;
    circuits.reserve(table.entries[i].size());
    for (const assoc::AssociationEntry& e : table.entries[i]) {
      circuits.push_back(e.circuit_id);
    }
    CircuitSet set = make_circuit_set(std::move(circuits));
    if (set.size() >= 2) {
      mcps.push_back({i, poles.at(i).location, std::move(set)});
    }
  }
  return mcps;
}

namespace {

std::size_t shared_circuits(const CircuitSet& a, const CircuitSet& b) {
  std::size_t count = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++count;
      ++ia;
      ++ib;
    }
  }
  return count;
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

}  // namespace

std::vector<McpGroup> group_by_configuration(const std::vector<McpPole>& mcps,
                                             GroupingMode mode) {
  // Exact-key partition first; overlap mode then merges whole key-groups, so
  // both modes share one deterministic backbone.
  std::map<CircuitSet, std::vector<McpPole>> by_key;
  for (const McpPole& m : mcps) {
    by_key[m.circuits].push_back(m);
  }

  std::vector<McpGroup> groups;
  groups.reserve(by_key.size());
  for (auto& [key, members] : by_key) {
    std::sort(members.begin(), members.end(),
              [](const McpPole& a, const McpPole& b) {
                return a.pole_ordinal < b.pole_ordinal;
              });
    groups.push_back({key, std::move(members)});
  }
  if (mode == GroupingMode::kExact || groups.size() < 2) {
    return groups;
  }

  std::vector<std::size_t> parent(groups.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  for (std::size_t i = 0; i < groups.size(); ++i) {
    for (std::size_t j = i + 1; j < groups.size(); ++j) {
      if (shared_circuits(groups[i].key, groups[j].key) >= 2) {
        parent[find_root(parent, j)] = find_root(parent, i);
      }
    }
  }

  std::map<std::size_t, McpGroup> merged;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    McpGroup& target = merged[find_root(parent, i)];
    std::vector<std::string> combined = target.key;
    combined.insert(combined.end(), groups[i].key.begin(), groups[i].key.end());
    target.key = make_circuit_set(std::move(combined));
    target.members.insert(target.members.end(), groups[i].members.begin(),
                          groups[i].members.end());
  }
  std::vector<McpGroup> result;
  result.reserve(merged.size());
  for (auto& [root, group] : merged) {
    std::sort(group.members.begin(), group.members.end(),
              [](const McpPole& a, const McpPole& b) {
                return a.pole_ordinal < b.pole_ordinal;
              });
    result.push_back(std::move(group));
  }
  std::sort(result.begin(), result.end(),
            [](const McpGroup& a, const McpGroup& b) { return a.key < b.key; });
  return result;
}

}  // namespace mcpzone::detect
