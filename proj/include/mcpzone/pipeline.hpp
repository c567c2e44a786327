#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mcpzone/association.hpp"
#include "mcpzone/ingest.hpp"
#include "mcpzone/mcp_detect.hpp"
#include "mcpzone/prioritize.hpp"
#include "mcpzone/zoning.hpp"

namespace mcpzone::pipeline {

struct PipelineConfig {
  std::string poles_path;
  std::string wires_path;
  std::optional<std::string> factors_path;  // enables the ranking stage
  std::string out_dir;
  ingest::LoadOptions load;
  assoc::AssociationParams association;
  detect::GroupingMode grouping = detect::GroupingMode::kExact;
  zone::ZoningParams zoning;
  rank::RankParams ranking;
};

struct StageTiming {
  std::string stage;
  double elapsed_ms = 0.0;
};

struct RunSummary {
  std::size_t pole_count = 0;
  std::size_t wire_count = 0;
  std::size_t skipped_records = 0;  // lenient-mode drops across both layers
  std::size_t mcp_count = 0;
  std::size_t group_count = 0;
  std::size_t zone_count = 0;
  std::optional<std::size_t> ranked_count;
  std::optional<geom::GeoPoint> origin;  // when inputs were geographic
  std::vector<std::string> warnings;     // ingest warnings + skip diagnostics
  std::vector<std::string> outputs;      // files written, in write order
  std::vector<StageTiming> timings;      // informational only
};

/// Runs ingest -> associate -> detect -> zone (-> rank) and writes
/// zones.geojson, zones.csv, histogram.csv, ranking.csv (with factors), and
/// run_summary.json into cfg.out_dir. Failures carry the stage name in the
/// exception message.
RunSummary run_pipeline(const PipelineConfig& cfg);

/// Writers, shared with the narrower subcommands.
void write_zones_geojson(const std::vector<zone::RiskZone>& zones, const std::string& path,
                         const std::optional<geom::GeoPoint>& origin);
void write_zones_csv(const std::vector<zone::RiskZone>& zones, const std::string& path);
void write_histogram_csv(const std::vector<zone::HistogramBin>& bins, const std::string& path);

struct ZoneCsvRow {
  std::string zone_id;
  double extent_m = 0.0;
};

/// Reads zone_id and extent_m back out of a zones.csv.
std::vector<ZoneCsvRow> read_zones_csv(const std::string& path);

}  // namespace mcpzone::pipeline
