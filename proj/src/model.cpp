#include "mcpzone/model.hpp"

namespace mcpzone::model {

void PoleSet::add(Pole pole) {
  if (!geom::is_finite(pole.location)) {
    throw std::invalid_argument("pole '" + pole.pole_id + "' has non-finite coordinates");
  }
  auto [it, inserted] = by_id_.emplace(pole.pole_id, poles_.size());
  if (!inserted) {
    throw std::invalid_argument("duplicate pole_id '" + pole.pole_id + "'");
  }
  poles_.push_back(std::move(pole));
}

std::optional<std::size_t> PoleSet::ordinal_of(const std::string& pole_id) const {
  const auto it = by_id_.find(pole_id);
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

void WireSet::add(WireSegment wire) {
  if (wire.circuit_id.empty()) {
    throw std::invalid_argument("wire '" + wire.wire_id + "' has an empty circuit_id");
  }
  if (!(wire.length_m > 0.0)) {
    throw std::invalid_argument("wire '" + wire.wire_id + "' has non-positive length");
  }
  auto [it, inserted] = by_id_.emplace(wire.wire_id, wires_.size());
  if (!inserted) {
    throw std::invalid_argument("duplicate wire_id '" + wire.wire_id + "'");
  }
  wires_.push_back(std::move(wire));
}

std::optional<std::size_t> WireSet::ordinal_of(const std::string& wire_id) const {
  const auto it = by_id_.find(wire_id);
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

}  // namespace mcpzone::model
