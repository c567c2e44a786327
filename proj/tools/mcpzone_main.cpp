#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mcpzone/association.hpp"
#include "mcpzone/ingest.hpp"
#include "mcpzone/io_util.hpp"
#include "mcpzone/pipeline.hpp"
#include "mcpzone/prioritize.hpp"
#include "mcpzone/synth.hpp"
#include "mcpzone/zoning.hpp"

namespace {

using namespace mcpzone;

ingest::Crs parse_crs(const std::string& name) {
  if (name == "planar") return ingest::Crs::kPlanar;
  if (name == "wgs84") return ingest::Crs::kWgs84;
  return ingest::Crs::kAuto;
}

rank::NormalizeMode parse_normalize(const std::string& name) {
  if (name == "rank") return rank::NormalizeMode::kRank;
  if (name == "passthrough") return rank::NormalizeMode::kPassthrough;
  return rank::NormalizeMode::kMinMax;
}

/// "circuits:length_m:spacing_m:heading_deg", e.g. "2:1600:100:45".
synth::CorridorSpec parse_corridor(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t colon = text.find(':', start);
    parts.push_back(text.substr(start, colon == std::string::npos ? std::string::npos
                                                                  : colon - start));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  if (parts.size() != 4) {
    throw CLI::ValidationError("--corridor",
                               "expected circuits:length_m:spacing_m:heading_deg");
  }
  synth::CorridorSpec spec;
  try {
    spec.circuit_count = std::stoul(parts[0]);
    spec.length_m = std::stod(parts[1]);
    spec.spacing_m = std::stod(parts[2]);
    spec.heading_deg = std::stod(parts[3]);
  } catch (const std::exception&) {
    throw CLI::ValidationError("--corridor", "bad number in '" + text + "'");
  }
  return spec;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) {
    std::cerr << "warning: " << w << "\n";
  }
}

int run_zone(const pipeline::PipelineConfig& cfg) {
  const pipeline::RunSummary summary = pipeline::run_pipeline(cfg);
  print_warnings(summary.warnings);
  std::cout << "poles " << summary.pole_count << ", wires " << summary.wire_count;
  if (summary.skipped_records > 0) {
    std::cout << " (" << summary.skipped_records << " records skipped)";
  }
  std::cout << "\nmcp poles " << summary.mcp_count << ", configurations "
            << summary.group_count << ", zones " << summary.zone_count;
  if (summary.ranked_count) {
    std::cout << ", ranked " << *summary.ranked_count;
  }
  std::cout << "\n";
  for (const std::string& path : summary.outputs) {
    std::cout << "wrote " << path << "\n";
  }
  return 0;
}

int run_validate(const std::string& poles_path, const std::string& wires_path,
                 const ingest::LoadOptions& opts) {
  const ingest::PairLoadResult loaded = ingest::load_pair(poles_path, wires_path, opts);
  print_warnings(loaded.poles.warnings);
  print_warnings(loaded.wires.warnings);
  for (const auto* skipped : {&loaded.poles.skipped, &loaded.wires.skipped}) {
    for (const std::string& s : *skipped) std::cerr << "skipped: " << s << "\n";
  }
  std::cout << "poles: " << loaded.poles.poles.size() << " ok, "
            << loaded.poles.skipped.size() << " skipped\n";
  std::cout << "wires: " << loaded.wires.wires.size() << " ok, "
            << loaded.wires.skipped.size() << " skipped\n";
  if (loaded.origin) {
    std::cout << "projection origin: lon " << io::format_double(loaded.origin->lon)
              << ", lat " << io::format_double(loaded.origin->lat) << "\n";
  }
  return 0;
}

int run_associate(const std::string& poles_path, const std::string& wires_path,
                  const ingest::LoadOptions& opts, const assoc::AssociationParams& params,
                  const std::string& out_dir) {
  const ingest::PairLoadResult loaded = ingest::load_pair(poles_path, wires_path, opts);
  print_warnings(loaded.poles.warnings);
  print_warnings(loaded.wires.warnings);
  const assoc::AssociationResult result =
      assoc::associate(loaded.poles.poles, loaded.wires.wires, params);
  std::filesystem::create_directories(out_dir);
  const std::string path = out_dir + "/associations.csv";
  assoc::write_associations_csv(loaded.poles.poles, loaded.wires.wires, result, path);
  std::size_t attached = 0;
  for (const auto& list : result.entries) attached += list.size();
  std::cout << "associations " << attached << " across " << loaded.poles.poles.size()
            << " poles\nwrote " << path << "\n";
  return 0;
}

int run_rank(const std::string& zones_path, const std::string& factors_path,
             const rank::RankParams& params, const std::string& out_dir) {
  std::vector<std::string> ids;
  for (const pipeline::ZoneCsvRow& row : pipeline::read_zones_csv(zones_path)) {
    ids.push_back(row.zone_id);
  }
  const rank::FactorTable table = rank::read_factors_csv(factors_path);
  const std::vector<rank::RankedZone> ranking = rank::rank_zones(ids, table, params);
  std::filesystem::create_directories(out_dir);
  const std::string path = out_dir + "/ranking.csv";
  rank::write_ranking_csv(ranking, path, params.impute);
  std::cout << "ranked " << ranking.size() << " zones\nwrote " << path << "\n";
  return 0;
}

int run_hist(const std::string& zones_path, double bin_width_mi, double overflow_mi,
             const std::string& out_dir) {
  std::vector<double> extents;
  for (const pipeline::ZoneCsvRow& row : pipeline::read_zones_csv(zones_path)) {
    extents.push_back(row.extent_m);
  }
  const auto bins = zone::length_histogram_m(extents, bin_width_mi, overflow_mi);
  std::filesystem::create_directories(out_dir);
  const std::string path = out_dir + "/histogram.csv";
  pipeline::write_histogram_csv(bins, path);
  std::cout << "binned " << extents.size() << " zones\nwrote " << path << "\n";
  return 0;
}

int run_synth(const synth::SynthParams& params, const std::string& out_dir) {
  const synth::SynthResult result = synth::generate(params);
  std::cout << "generated " << result.poles.size() << " poles, " << result.wires.size()
            << " wires, " << result.truth.corridors.size() << " corridors\n";
  for (const std::string& path : synth::write_outputs(result, out_dir)) {
    std::cout << "wrote " << path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiple-circuit-pole risk zone analytics for utility GIS data"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from an INI file (flags win on conflict)");

  // zone: the full pipeline
  pipeline::PipelineConfig cfg;
  std::string crs = "auto";
  std::string normalize = "minmax";
  std::string grouping = "exact";
  std::string distance = "centroid";
  std::string extent = "mst";
  std::string factors_path;
  std::string weights_path;
  CLI::App* zone_cmd =
      app.add_subcommand("zone", "Run the full pipeline and write zone reports");
  zone_cmd->add_option("--poles", cfg.poles_path, "Pole layer (GeoJSON or CSV)")->required();
  zone_cmd->add_option("--wires", cfg.wires_path, "Wire layer (GeoJSON or CSV)")->required();
  zone_cmd->add_option("--factors", factors_path,
                       "Per-zone factor CSV; enables the ranking stage");
  zone_cmd->add_option("--crs", crs, "Coordinate system of the inputs")
      ->check(CLI::IsMember({"planar", "wgs84"}));
  zone_cmd->add_option("--k", cfg.association.k, "Wires retained per pole (default 3)");
  zone_cmd->add_option("--d-max", cfg.association.d_max_m,
                       "Association cutoff in meters (default 50)");
  zone_cmd->add_option("--radius", cfg.zoning.radius_m,
                       "Clustering hop radius in meters (default 200)");
  zone_cmd->add_option("--min-extent", cfg.zoning.min_extent_m,
                       "Drop zones shorter than this many meters (default 200; 0 disables)");
  zone_cmd->add_option("--min-poles", cfg.zoning.min_poles,
                       "Drop zones with fewer poles (default 2)");
  zone_cmd->add_option("--normalize", normalize, "Factor normalization method")
      ->check(CLI::IsMember({"minmax", "rank", "passthrough"}));
  zone_cmd->add_option("--weights", weights_path, "JSON file overriding factor weights");
  zone_cmd->add_option("--grouping", grouping, "Circuit-configuration grouping mode")
      ->check(CLI::IsMember({"exact", "overlap"}));
  zone_cmd->add_option("--distance", distance, "Pole-to-wire distance definition")
      ->check(CLI::IsMember({"centroid", "nearest-point"}));
  zone_cmd->add_option("--extent", extent, "Zone extent definition")
      ->check(CLI::IsMember({"mst", "discovery-order"}));
  zone_cmd->add_flag("--lenient", cfg.load.lenient,
                     "Skip and log invalid records instead of failing");
  zone_cmd->add_flag("--trust-declared", cfg.association.trust_declared,
                     "Union declared pole attachments into the spatial result");
  zone_cmd->add_flag("--impute", cfg.ranking.impute,
                     "Substitute 0.5 for missing factor values");
  zone_cmd->add_option("--out", cfg.out_dir, "Output directory")->required();

  // validate: ingest-only dry run
  std::string v_poles, v_wires;
  std::string v_crs = "auto";
  bool v_lenient = false;
  CLI::App* validate_cmd =
      app.add_subcommand("validate", "Load both layers and report record counts");
  validate_cmd->add_option("--poles", v_poles, "Pole layer")->required();
  validate_cmd->add_option("--wires", v_wires, "Wire layer")->required();
  validate_cmd->add_option("--crs", v_crs, "Coordinate system of the inputs")
      ->check(CLI::IsMember({"planar", "wgs84"}));
  validate_cmd->add_flag("--lenient", v_lenient, "Skip and log invalid records");

  // associate: debug dump of the pole-to-wire table
  std::string a_poles, a_wires, a_out;
  std::string a_crs = "auto";
  std::string a_distance = "centroid";
  assoc::AssociationParams a_params;
  bool a_lenient = false;
  CLI::App* assoc_cmd =
      app.add_subcommand("associate", "Write the pole-to-wire association table");
  assoc_cmd->add_option("--poles", a_poles, "Pole layer")->required();
  assoc_cmd->add_option("--wires", a_wires, "Wire layer")->required();
  assoc_cmd->add_option("--crs", a_crs, "Coordinate system of the inputs")
      ->check(CLI::IsMember({"planar", "wgs84"}));
  assoc_cmd->add_option("--k", a_params.k, "Wires retained per pole (default 3)");
  assoc_cmd->add_option("--d-max", a_params.d_max_m, "Association cutoff in meters");
  assoc_cmd->add_option("--distance", a_distance, "Pole-to-wire distance definition")
      ->check(CLI::IsMember({"centroid", "nearest-point"}));
  assoc_cmd->add_flag("--trust-declared", a_params.trust_declared,
                      "Union declared pole attachments into the spatial result");
  assoc_cmd->add_flag("--lenient", a_lenient, "Skip and log invalid records");
  assoc_cmd->add_option("--out", a_out, "Output directory")->required();

  // rank: scoring only, from an existing zones.csv
  std::string r_zones, r_factors, r_weights, r_out;
  std::string r_normalize = "minmax";
  bool r_impute = false;
  CLI::App* rank_cmd = app.add_subcommand("rank", "Score and rank zones from factors");
  rank_cmd->add_option("--zones", r_zones, "zones.csv from a previous run")->required();
  rank_cmd->add_option("--factors", r_factors, "Per-zone factor CSV")->required();
  rank_cmd->add_option("--weights", r_weights, "JSON file overriding factor weights");
  rank_cmd->add_option("--normalize", r_normalize, "Factor normalization method")
      ->check(CLI::IsMember({"minmax", "rank", "passthrough"}));
  rank_cmd->add_flag("--impute", r_impute, "Substitute 0.5 for missing factor values");
  rank_cmd->add_option("--out", r_out, "Output directory")->required();

  // hist: re-bin an existing zones.csv
  std::string h_zones, h_out;
  double h_width = 1.0;
  double h_overflow = 5.0;
  CLI::App* hist_cmd =
      app.add_subcommand("hist", "Write the extent histogram for an existing zones.csv");
  hist_cmd->add_option("--zones", h_zones, "zones.csv from a previous run")->required();
  hist_cmd->add_option("--bin-width", h_width, "Bin width in miles (default 1)");
  hist_cmd->add_option("--overflow", h_overflow,
                       "Start of the unbounded top bin in miles (default 5)");
  hist_cmd->add_option("--out", h_out, "Output directory")->required();

  // synth: generator
  synth::SynthParams s_params;
  std::vector<std::string> s_corridors;
  std::string s_out;
  CLI::App* synth_cmd =
      app.add_subcommand("synth", "Generate a synthetic territory with known ground truth");
  synth_cmd->add_option("--seed", s_params.seed, "RNG seed (default 1)");
  synth_cmd->add_option("--extent-x", s_params.extent_x_m, "Territory width in meters");
  synth_cmd->add_option("--extent-y", s_params.extent_y_m, "Territory height in meters");
  synth_cmd->add_option("--background", s_params.background_poles,
                        "Single-circuit background pole count");
  synth_cmd->add_option("--bg-circuits", s_params.background_circuits,
                        "Background circuit pool size");
  synth_cmd->add_option("--jitter", s_params.jitter_sigma_m,
                        "Coordinate noise sigma in meters (default 5)");
  synth_cmd->add_option("--wire-offset", s_params.wire_offset_m,
                        "Base lateral conductor offset in meters (default 10)");
  synth_cmd
      ->add_option("--corridor", s_corridors,
                   "Planted corridor as circuits:length_m:spacing_m:heading_deg "
                   "(repeatable)")
      ->take_all();
  synth_cmd->add_option("--out", s_out, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*zone_cmd) {
      cfg.load.crs = parse_crs(crs);
      cfg.ranking.normalize = parse_normalize(normalize);
      cfg.grouping = grouping == "overlap" ? detect::GroupingMode::kOverlap
                                           : detect::GroupingMode::kExact;
      cfg.association.distance = distance == "nearest-point"
                                     ? assoc::DistanceMode::kNearestPoint
                                     : assoc::DistanceMode::kCentroid;
      cfg.zoning.extent = extent == "discovery-order" ? zone::ExtentMode::kDiscoveryOrder
                                                      : zone::ExtentMode::kMst;
      if (!factors_path.empty()) cfg.factors_path = factors_path;
      if (!weights_path.empty()) cfg.ranking.weights = rank::read_weights_json(weights_path);
      return run_zone(cfg);
    }
    if (*validate_cmd) {
      ingest::LoadOptions opts;
      opts.crs = parse_crs(v_crs);
      opts.lenient = v_lenient;
      return run_validate(v_poles, v_wires, opts);
    }
    if (*assoc_cmd) {
      ingest::LoadOptions opts;
      opts.crs = parse_crs(a_crs);
      opts.lenient = a_lenient;
      a_params.distance = a_distance == "nearest-point" ? assoc::DistanceMode::kNearestPoint
                                                        : assoc::DistanceMode::kCentroid;
      return run_associate(a_poles, a_wires, opts, a_params, a_out);
    }
    if (*rank_cmd) {
      rank::RankParams params;
      params.normalize = parse_normalize(r_normalize);
      params.impute = r_impute;
      if (!r_weights.empty()) params.weights = rank::read_weights_json(r_weights);
      return run_rank(r_zones, r_factors, params, r_out);
    }
    if (*hist_cmd) {
      return run_hist(h_zones, h_width, h_overflow, h_out);
    }
    if (*synth_cmd) {
      for (const std::string& text : s_corridors) {
        s_params.corridors.push_back(parse_corridor(text));
      }
      if (s_params.corridors.empty() && s_params.background_poles == 0) {
        throw std::invalid_argument("nothing to generate: pass --corridor and/or --background");
      }
      return run_synth(s_params, s_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
