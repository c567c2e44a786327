#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mcpzone/mcp_detect.hpp"
#include "mcpzone/model.hpp"

namespace mcpzone::synth {

/// One planted corridor: a straight line of poles all carrying the same
/// circuit_count circuits.
struct CorridorSpec {
  std::size_t circuit_count = 2;  // 2..26
  double length_m = 1000.0;
  double spacing_m = 100.0;  // must not exceed the default clustering radius
  double heading_deg = 0.0;
};

struct SynthParams {
  std::uint64_t seed = 1;
  double extent_x_m = 10'000.0;
  double extent_y_m = 10'000.0;
  std::size_t background_poles = 0;
  std::size_t background_circuits = 8;  // pool size for single-circuit noise
  std::vector<CorridorSpec> corridors;
  double jitter_sigma_m = 5.0;   // gaussian coordinate noise, clamped to 2 sigma per axis
  double wire_offset_m = 10.0;   // base lateral conductor offset from the pole line
};

struct CorridorTruth {
  detect::CircuitSet circuits;
  std::vector<std::string> pole_ids;  // sorted ascending
  std::size_t pole_count = 0;
  double expected_extent_m = 0.0;  // (pole_count - 1) * spacing, before jitter
};

struct GroundTruth {
  std::uint64_t seed = 0;
  std::vector<CorridorTruth> corridors;  // in CorridorSpec order
};

struct SynthResult {
  model::PoleSet poles;
  model::WireSet wires;
  GroundTruth truth;
};

/// Generates a territory, deterministic for a fixed seed (pinned mt19937_64
/// stream, hand-rolled uniform/gaussian draws).
///
/// Placement guarantees, assuming the pipeline's default parameters
/// (association cutoff 50 m, clustering radius 200 m):
///  - every corridor pole associates with a conductor of each of its
///    corridor's circuits, because per-circuit conductor segments are centered
///    on the pole line at lateral offsets well inside the cutoff;
///  - corridors sit > 400 m from each other and from background poles;
///  - background poles are spaced so no pole sees another pole's conductor,
///    hence never carry two circuits.
/// Throws std::invalid_argument when the requested layout cannot satisfy
/// these guarantees inside the territory extent.
SynthResult generate(const SynthParams& params);

/// Writes poles/wires as GeoJSON (WGS84, about a fixed reference origin) and
/// CSV (planar meters) plus ground_truth.json into out_dir (created if
/// absent). Returns the written paths.
std::vector<std::string> write_outputs(const SynthResult& result, const std::string& out_dir);

}  // namespace mcpzone::synth
