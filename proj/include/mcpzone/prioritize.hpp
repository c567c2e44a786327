#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mcpzone::rank {

inline constexpr std::size_t kFactorCount = 6;

/// Canonical factor order; CSV columns and weight files use these names.
inline constexpr std::array<const char*, kFactorCount> kFactorNames = {
    "customer_impact",         "redundancy_loss",        "critical_infrastructure",
    "asset_condition",         "restoration_complexity", "outage_risk",
};

/// Normalized factor scores in [0,1], indexed per kFactorNames.
using FactorVector = std::array<double, kFactorCount>;

/// Percentage weights summing to 100, indexed per kFactorNames.
struct WeightVector {
  std::array<double, kFactorCount> values{30.0, 20.0, 10.0, 20.0, 10.0, 10.0};
};

/// Returns the weights rescaled to sum exactly 100. Throws on a negative
/// weight or a sum off by more than 1e-6 relative.
WeightVector validate_weights(const WeightVector& w);

/// Weighted linear sum, in [0, 100] for valid inputs.
double score_zone(const FactorVector& factors, const WeightVector& weights);

enum class NormalizeMode {
  kMinMax,       // [min,max] -> [0,1]; constant column -> all 0.5
  kRank,         // (rank-1)/(n-1), average ranks for ties; n=1 -> 0.5
  kPassthrough,  // input already in [0,1], validated
};

/// Normalizes one raw factor column across zones.
std::vector<double> normalize_factor(const std::vector<double>& raw, NormalizeMode mode);

/// Raw factor rows keyed by zone_id; a nullopt cell is a missing value.
struct FactorTable {
  std::map<std::string, std::array<std::optional<double>, kFactorCount>> rows;
};

/// Parses `factors.csv` (header: zone_id followed by the six factor names in
/// canonical order; empty cells mean missing).
FactorTable read_factors_csv(const std::string& path);

/// Parses a weights config: a JSON object mapping every factor name to its
/// percentage weight.
WeightVector read_weights_json(const std::string& path);

struct RankParams {
  WeightVector weights;
  NormalizeMode normalize = NormalizeMode::kMinMax;
  bool impute = false;  // substitute 0.5 for missing factors instead of erroring
};

struct RankedZone {
  std::size_t rank = 0;  // 1-based, contiguous
  std::string zone_id;
  double score = 0.0;
  FactorVector factors{};  // normalized values that produced the score
  bool imputed = false;    // any factor was substituted
};

/// Scores every zone_id against the table and returns the ranking: score
/// descending, ties by (customer_impact descending, zone_id ascending).
/// Strict mode throws on a missing factor, naming the zone and factor.
std::vector<RankedZone> rank_zones(const std::vector<std::string>& zone_ids,
                                   const FactorTable& table, const RankParams& params);

/// Writes `ranking.csv`; the trailing `imputed` column appears only when the
/// run imputed missing factors.
void write_ranking_csv(const std::vector<RankedZone>& ranking, const std::string& path,
                       bool include_imputed_column);

}  // namespace mcpzone::rank
