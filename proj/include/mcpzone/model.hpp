#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcpzone/geometry.hpp"

namespace mcpzone::model {

using geom::Point2D;
using geom::Polyline;

/// Surveyed support structure: unique id, planar location, open attributes.
struct Pole {
  std::string pole_id;
  Point2D location;
  std::map<std::string, std::string> metadata;
};

/// Overhead conductor polyline carrying a circuit identifier. `length_m` is
/// recomputed from geometry when the source lacks it or disagrees by > 1%.
struct WireSegment {
  std::string wire_id;
  std::string circuit_id;
  Polyline geometry;
  double length_m = 0.0;
  std::optional<double> ampacity_a;
  std::vector<std::string> declared_pole_ids;  // empty when absent
};

/// Ordered pole collection with id -> ordinal lookup (a bijection).
class PoleSet {
 public:
  PoleSet() = default;

  /// Throws std::invalid_argument on a duplicate pole_id, naming the id.
  void add(Pole pole);

  std::size_t size() const { return poles_.size(); }
  bool empty() const { return poles_.empty(); }
  const Pole& at(std::size_t ordinal) const { return poles_.at(ordinal); }
  const std::vector<Pole>& items() const { return poles_; }
  std::optional<std::size_t> ordinal_of(const std::string& pole_id) const;

 private:
  std::vector<Pole> poles_;
  std::map<std::string, std::size_t> by_id_;
};

/// Ordered wire collection with id -> ordinal lookup (a bijection).
class WireSet {
 public:
  WireSet() = default;

  /// Throws std::invalid_argument on a duplicate wire_id, naming the id.
  void add(WireSegment wire);

  std::size_t size() const { return wires_.size(); }
  bool empty() const { return wires_.empty(); }
  const WireSegment& at(std::size_t ordinal) const { return wires_.at(ordinal); }
  const std::vector<WireSegment>& items() const { return wires_; }
  std::optional<std::size_t> ordinal_of(const std::string& wire_id) const;

 private:
  std::vector<WireSegment> wires_;
  std::map<std::string, std::size_t> by_id_;
};

}  // namespace mcpzone::model
