#include "mcpzone/pipeline.hpp"

#include <charconv>
#include <chrono>
#include <filesystem>
#include <sstream>
#include <stdexcept>
#include <type_traits>

#include <json.hpp>

#include "mcpzone/io_util.hpp"

namespace mcpzone::pipeline {

namespace {

using nlohmann::json;

json coordinates_json(const geom::Point2D& p, const std::optional<geom::GeoPoint>& origin) {
  if (origin) {
    const geom::GeoPoint g = geom::inverse_project(p, *origin);
    return json::array({g.lon, g.lat});
  }
  return json::array({p.x, p.y});
}

json hull_geometry(const zone::RiskZone& z, const std::optional<geom::GeoPoint>& origin) {
  if (z.hull.size() >= 3) {
    json ring = json::array();
    for (const geom::Point2D& v : z.hull) ring.push_back(coordinates_json(v, origin));
    ring.push_back(coordinates_json(z.hull.front(), origin));  // close the ring
    return {{"type", "Polygon"}, {"coordinates", json::array({ring})}};
  }
  if (z.hull.size() == 2) {
    return {{"type", "LineString"},
            {"coordinates", json::array({coordinates_json(z.hull[0], origin),
                                         coordinates_json(z.hull[1], origin)})}};
  }
  return {{"type", "Point"}, {"coordinates", coordinates_json(z.hull.at(0), origin)}};
}

/// Runs fn under a stage label: failures are rethrown with the stage named,
/// and the wall time lands in summary.timings.
template <typename Fn>
auto timed_stage(RunSummary& summary, const std::string& stage, Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  try {
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      const std::chrono::duration<double, std::milli> elapsed =
          std::chrono::steady_clock::now() - start;
      summary.timings.push_back({stage, elapsed.count()});
      return;
    } else {
      auto result = fn();
      const std::chrono::duration<double, std::milli> elapsed =
          std::chrono::steady_clock::now() - start;
      summary.timings.push_back({stage, elapsed.count()});
      return result;
    }
  } catch (const std::exception& e) {
    throw std::runtime_error(stage + " stage: " + e.what());
  }
}

void write_run_summary(const PipelineConfig& cfg, const RunSummary& summary,
                       const std::string& path) {
  json counts = {{"poles", summary.pole_count},
                 {"wires", summary.wire_count},
                 {"skipped_records", summary.skipped_records},
                 {"mcp_poles", summary.mcp_count},
                 {"groups", summary.group_count},
                 {"zones", summary.zone_count}};
  if (summary.ranked_count) counts["ranked_zones"] = *summary.ranked_count;

  json params = {
      {"k", cfg.association.k},
      {"d_max_m", cfg.association.d_max_m},
      {"distance", cfg.association.distance == assoc::DistanceMode::kCentroid
                       ? "centroid"
                       : "nearest-point"},
      {"trust_declared", cfg.association.trust_declared},
      {"grouping", cfg.grouping == detect::GroupingMode::kExact ? "exact" : "overlap"},
      {"radius_m", cfg.zoning.radius_m},
      {"min_extent_m", cfg.zoning.min_extent_m},
      {"min_poles", cfg.zoning.min_poles},
      {"extent", cfg.zoning.extent == zone::ExtentMode::kMst ? "mst" : "discovery-order"},
      {"lenient", cfg.load.lenient},
  };
  if (cfg.factors_path) {
    const char* mode = cfg.ranking.normalize == rank::NormalizeMode::kMinMax ? "minmax"
                       : cfg.ranking.normalize == rank::NormalizeMode::kRank ? "rank"
                                                                             : "passthrough";
    params["normalize"] = mode;
    params["impute"] = cfg.ranking.impute;
  }

  json inputs = {{"poles", cfg.poles_path}, {"wires", cfg.wires_path}};
  if (cfg.factors_path) inputs["factors"] = *cfg.factors_path;

  json timings = json::object();
  for (const StageTiming& t : summary.timings) timings[t.stage] = t.elapsed_ms;

  json doc = {{"counts", counts},
              {"inputs", inputs},
              {"outputs", summary.outputs},
              {"parameters", params},
              {"timings_ms", timings},
              {"warnings", summary.warnings}};
  if (summary.origin) {
    doc["origin"] = {{"lon", summary.origin->lon}, {"lat", summary.origin->lat}};
  }
  io::write_file(path, doc.dump(2) + "\n");
}

}  // namespace

void write_zones_geojson(const std::vector<zone::RiskZone>& zones, const std::string& path,
                         const std::optional<geom::GeoPoint>& origin) {
  json features = json::array();
  for (const zone::RiskZone& z : zones) {
    features.push_back({{"type", "Feature"},
                        {"geometry", hull_geometry(z, origin)},
                        {"properties",
                         {{"zone_id", z.zone_id},
                          {"circuits", z.circuits},
                          {"extent_m", z.extent_m},
                          {"extent_mi", z.extent_m / geom::kMetersPerMile},
                          {"pole_count", z.pole_count},
                          {"pole_ids", z.pole_ids}}}});
  }
  const json doc = {{"type", "FeatureCollection"}, {"features", features}};
  io::write_file(path, doc.dump(2) + "\n");
}

void write_zones_csv(const std::vector<zone::RiskZone>& zones, const std::string& path) {
  std::string out =
      "zone_id,circuits,pole_count,extent_m,extent_mi,centroid_x,centroid_y,"
      "bbox_min_x,bbox_min_y,bbox_max_x,bbox_max_y,pole_ids\n";
  for (const zone::RiskZone& z : zones) {
    out += io::csv_escape(z.zone_id);
    out += ',';
    out += io::csv_escape(io::join(z.circuits, "|"));
    out += ',';
    out += std::to_string(z.pole_count);
    out += ',';
    out += io::format_double(z.extent_m);
    out += ',';
    out += io::format_double(z.extent_m / geom::kMetersPerMile);
    for (const double v : {z.centroid.x, z.centroid.y, z.bbox_min.x, z.bbox_min.y,
                           z.bbox_max.x, z.bbox_max.y}) {
      out += ',';
      out += io::format_double(v);
    }
    out += ',';
    out += io::csv_escape(io::join(z.pole_ids, "|"));
    out += '\n';
  }
  io::write_file(path, out);
}

void write_histogram_csv(const std::vector<zone::HistogramBin>& bins, const std::string& path) {
  std::string out = "bin_lo_mi,bin_hi_mi,count\n";
  for (const zone::HistogramBin& b : bins) {
    out += io::format_double(b.lo_mi);
    out += ',';
    out += b.hi_mi ? io::format_double(*b.hi_mi) : "inf";
    out += ',';
    out += std::to_string(b.count);
    out += '\n';
  }
  io::write_file(path, out);
}

std::vector<ZoneCsvRow> read_zones_csv(const std::string& path) {
  const std::string text = io::read_file(path);
  std::istringstream lines(text);
  std::string line;
  if (!std::getline(lines, line)) {
    throw std::runtime_error("'" + path + "': empty zones CSV");
  }
  const std::vector<std::string> header = io::csv_split(line);
  std::size_t extent_col = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (io::trim(header[i]) == "extent_m") extent_col = i;
  }
  if (header.empty() || io::trim(header[0]) != "zone_id" || extent_col == header.size()) {
    throw std::runtime_error("'" + path + "': zones CSV needs zone_id and extent_m columns");
  }
  std::vector<ZoneCsvRow> rows;
  std::size_t line_no = 1;
  while (std::getline(lines, line)) {
    ++line_no;
    if (io::trim(line).empty()) continue;
    const std::vector<std::string> fields = io::csv_split(line);
    if (fields.size() <= extent_col) {
      throw std::runtime_error("'" + path + "' line " + std::to_string(line_no) +
                               ": too few fields");
    }
    ZoneCsvRow row;
    row.zone_id = std::string(io::trim(fields[0]));
    const std::string_view cell = io::trim(fields[extent_col]);
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), row.extent_m);
    if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
      throw std::runtime_error("'" + path + "' line " + std::to_string(line_no) +
                               ": bad extent_m '" + std::string(cell) + "'");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

RunSummary run_pipeline(const PipelineConfig& cfg) {
  RunSummary summary;

  auto loaded = timed_stage(summary, "ingest", [&] {
    auto pair = ingest::load_pair(cfg.poles_path, cfg.wires_path, cfg.load);
    if (pair.poles.poles.empty()) {
      throw std::runtime_error("'" + cfg.poles_path + "' holds no usable poles");
    }
    if (pair.wires.wires.empty()) {
      throw std::runtime_error("'" + cfg.wires_path + "' holds no usable wires");
    }
    return pair;
  });
  summary.pole_count = loaded.poles.poles.size();
  summary.wire_count = loaded.wires.wires.size();
  summary.skipped_records = loaded.poles.skipped.size() + loaded.wires.skipped.size();
  summary.origin = loaded.origin;
  for (const auto* list : {&loaded.poles.warnings, &loaded.wires.warnings,
                           &loaded.poles.skipped, &loaded.wires.skipped}) {
    summary.warnings.insert(summary.warnings.end(), list->begin(), list->end());
  }

  const assoc::AssociationResult table = timed_stage(summary, "associate", [&] {
    return assoc::associate(loaded.poles.poles, loaded.wires.wires, cfg.association);
  });

  const std::vector<detect::McpGroup> groups = timed_stage(summary, "detect", [&] {
    return detect::group_by_configuration(detect::detect_mcp(table, loaded.poles.poles),
                                          cfg.grouping);
  });
  summary.group_count = groups.size();
  for (const detect::McpGroup& g : groups) summary.mcp_count += g.members.size();

  const std::vector<zone::RiskZone> zones = timed_stage(summary, "zone", [&] {
    return zone::build_zones(groups, loaded.poles.poles, cfg.zoning);
  });
  summary.zone_count = zones.size();

  std::vector<rank::RankedZone> ranking;
  if (cfg.factors_path) {
    ranking = timed_stage(summary, "rank", [&] {
      const rank::FactorTable factors = rank::read_factors_csv(*cfg.factors_path);
      std::vector<std::string> ids;
      ids.reserve(zones.size());
      for (const zone::RiskZone& z : zones) ids.push_back(z.zone_id);
      return rank::rank_zones(ids, factors, cfg.ranking);
    });
    summary.ranked_count = ranking.size();
  }

  timed_stage(summary, "write", [&] {
    std::filesystem::create_directories(cfg.out_dir);
    const std::string base = cfg.out_dir + "/";
    write_zones_geojson(zones, base + "zones.geojson", summary.origin);
    summary.outputs.push_back(base + "zones.geojson");
    write_zones_csv(zones, base + "zones.csv");
    summary.outputs.push_back(base + "zones.csv");
    write_histogram_csv(zone::length_histogram(zones), base + "histogram.csv");
    summary.outputs.push_back(base + "histogram.csv");
    if (cfg.factors_path) {
      rank::write_ranking_csv(ranking, base + "ranking.csv", cfg.ranking.impute);
      summary.outputs.push_back(base + "ranking.csv");
    }
  });

  // Written outside the timed stages so the summary can include them all.
  const std::string summary_path = cfg.out_dir + "/run_summary.json";
  summary.outputs.push_back(summary_path);
  write_run_summary(cfg, summary, summary_path);
  return summary;
}

}  // namespace mcpzone::pipeline
