#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mcpzone/geometry.hpp"
#include "mcpzone/model.hpp"

namespace mcpzone::ingest {

using geom::GeoPoint;
using model::PoleSet;
using model::WireSet;

enum class Format { kAuto, kGeoJson, kCsv };

/// Coordinate interpretation of a source. kAuto resolves per format:
/// GeoJSON defaults to WGS84 lon/lat, CSV to planar meters.
enum class Crs { kAuto, kPlanar, kWgs84 };

struct LoadOptions {
  Format format = Format::kAuto;
  Crs crs = Crs::kAuto;
  /// Drop invalid records (collected in `skipped`) instead of throwing.
  bool lenient = false;
  /// Projection origin for WGS84 sources; when absent the loader uses the
  /// source's own coordinate centroid.
  std::optional<GeoPoint> origin;
};

struct PoleLoadResult {
  PoleSet poles;
  std::vector<std::string> warnings;
  std::vector<std::string> skipped;  // lenient-mode record diagnostics
  std::optional<GeoPoint> origin;    // set when the source was geographic
};

struct WireLoadResult {
  WireSet wires;
  std::vector<std::string> warnings;
  std::vector<std::string> skipped;
  std::optional<GeoPoint> origin;
};

/// Load a pole layer from GeoJSON (Point features with a `pole_id` property)
/// or CSV (`pole_id,x,y[,...]`, extra columns become metadata).
/// Throws std::runtime_error with the offending record named unless lenient.
PoleLoadResult load_poles(const std::string& path, const LoadOptions& opts = {});

/// Load a wire layer from GeoJSON (LineString features with `wire_id`,
/// `circuit_id`, optional `length_m`, `ampacity_a`, `declared_pole_ids`)
/// or CSV (`wire_id,circuit_id,geometry_wkt[,length_m,ampacity_a]`).
WireLoadResult load_wires(const std::string& path, const LoadOptions& opts = {});

struct PairLoadResult {
  PoleLoadResult poles;
  WireLoadResult wires;
  std::optional<GeoPoint> origin;
};

/// Load both layers with one shared projection origin (the combined
/// coordinate centroid) so pole-to-wire distances are consistent.
PairLoadResult load_pair(const std::string& poles_path,
                         const std::string& wires_path,
                         const LoadOptions& opts = {});

/// Writers. When `origin` is set, planar coordinates are inverse-projected
/// and the file is written in WGS84 lon/lat; otherwise coordinates are
/// written as planar meters.
void write_poles_geojson(const PoleSet& poles, const std::string& path,
                         const std::optional<GeoPoint>& origin = std::nullopt);
void write_wires_geojson(const WireSet& wires, const std::string& path,
                         const std::optional<GeoPoint>& origin = std::nullopt);
void write_poles_csv(const PoleSet& poles, const std::string& path);
void write_wires_csv(const WireSet& wires, const std::string& path);

/// Format by file extension: .json/.geojson -> GeoJSON, .csv -> CSV.
Format detect_format(const std::string& path);

}  // namespace mcpzone::ingest
