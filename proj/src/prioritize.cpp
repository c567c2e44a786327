#include "mcpzone/prioritize.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "mcpzone/io_util.hpp"

namespace mcpzone::rank {

namespace {

constexpr double kWeightSum = 100.0;
constexpr double kWeightDriftTolerance = 1e-6;  // relative to the 100 target

std::size_t factor_index(const std::string& name) {
  for (std::size_t i = 0; i < kFactorCount; ++i) {
    if (name == kFactorNames[i]) return i;
  }
  throw std::invalid_argument("unknown factor name '" + name + "'");
}

}  // namespace

WeightVector validate_weights(const WeightVector& w) {
  double sum = 0.0;
  for (std::size_t i = 0; i < kFactorCount; ++i) {
    if (!std::isfinite(w.values[i]) || w.values[i] < 0.0) {
      throw std::invalid_argument(std::string("weight for ") + kFactorNames[i] +
                                  " must be a non-negative number");
    }
    sum += w.values[i];
  }
  if (std::abs(sum - kWeightSum) > kWeightDriftTolerance * kWeightSum) {
    throw std::invalid_argument("weights must sum to 100, got " + io::format_double(sum));
  }
  WeightVector out = w;
  if (sum != kWeightSum) {
    for (double& v : out.values) v *= kWeightSum / sum;
  }
  return out;
}

double score_zone(const FactorVector& factors, const WeightVector& weights) {
  double score = 0.0;
  for (std::size_t i = 0; i < kFactorCount; ++i) {
    score += weights.values[i] * factors[i];
  }
  return score;
}

std::vector<double> normalize_factor(const std::vector<double>& raw, NormalizeMode mode) {
  if (raw.empty()) throw std::invalid_argument("normalize_factor needs at least one value");
  for (const double v : raw) {
    if (!std::isfinite(v)) throw std::invalid_argument("factor value is not finite");
  }
  const std::size_t n = raw.size();
  std::vector<double> out(n);
  switch (mode) {
    case NormalizeMode::kMinMax: {
      const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
      if (*lo == *hi) {
        std::fill(out.begin(), out.end(), 0.5);
      } else {
        for (std::size_t i = 0; i < n; ++i) out[i] = (raw[i] - *lo) / (*hi - *lo);
      }
      return out;
    }
    case NormalizeMode::kRank: {
      if (n == 1) return {0.5};
      std::vector<std::size_t> order(n);
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::sort(order.begin(), order.end(),
                [&](std::size_t a, std::size_t b) { return raw[a] < raw[b]; });
      // Tied values share the mean of the 1-based positions they straddle.
      std::size_t i = 0;
      while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && raw[order[j + 1]] == raw[order[i]]) ++j;
        const double avg_rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) {
          out[order[k]] = (avg_rank - 1.0) / static_cast<double>(n - 1);
        }
        i = j + 1;
      }
      return out;
    }
    case NormalizeMode::kPassthrough: {
      for (const double v : raw) {
        if (v < 0.0 || v > 1.0) {
          throw std::invalid_argument("passthrough factor value " + io::format_double(v) +
                                      " is outside [0,1]");
        }
      }
      return raw;
    }
  }
  throw std::logic_error("unreachable normalize mode");
}

FactorTable read_factors_csv(const std::string& path) {
  const std::string text = io::read_file(path);
  std::istringstream lines(text);
  std::string line;
  if (!std::getline(lines, line)) {
    throw std::runtime_error("'" + path + "': empty factors CSV");
  }
  const std::vector<std::string> header = io::csv_split(line);
  if (header.size() != kFactorCount + 1 || io::trim(header[0]) != "zone_id") {
    throw std::runtime_error("'" + path + "': factors header must be zone_id followed by " +
                             std::to_string(kFactorCount) + " factor columns");
  }
  for (std::size_t i = 0; i < kFactorCount; ++i) {
    if (io::trim(header[i + 1]) != kFactorNames[i]) {
      throw std::runtime_error("'" + path + "': factor column " + std::to_string(i + 1) +
                               " must be " + kFactorNames[i]);
    }
  }
  FactorTable table;
  std::size_t line_no = 1;
  while (std::getline(lines, line)) {
    ++line_no;
    if (io::trim(line).empty()) continue;
    const std::vector<std::string> fields = io::csv_split(line);
    if (fields.size() != kFactorCount + 1) {
      throw std::runtime_error("'" + path + "' line " + std::to_string(line_no) +
                               ": expected " + std::to_string(kFactorCount + 1) + " fields");
    }
    const std::string zone_id(io::trim(fields[0]));
    if (zone_id.empty()) {
      throw std::runtime_error("'" + path + "' line " + std::to_string(line_no) +
                               ": empty zone_id");
    }
    if (table.rows.count(zone_id) != 0) {
      throw std::runtime_error("'" + path + "': duplicate zone_id '" + zone_id + "'");
    }
    std::array<std::optional<double>, kFactorCount> row;
    for (std::size_t i = 0; i < kFactorCount; ++i) {
      const std::string_view cell = io::trim(fields[i + 1]);
      if (cell.empty()) continue;
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
        throw std::runtime_error("'" + path + "': zone '" + zone_id + "' has a bad " +
                                 kFactorNames[i] + " value '" + std::string(cell) + "'");
      }
      row[i] = v;
    }
    table.rows.emplace(zone_id, row);
  }
  return table;
}

WeightVector read_weights_json(const std::string& path) {
  nlohmann::json doc = nlohmann::json::parse(io::read_file(path), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw std::runtime_error("'" + path + "': weights file must be a JSON object");
  }
  WeightVector w;
  std::array<bool, kFactorCount> seen{};
  for (const auto& [key, value] : doc.items()) {
    const std::size_t idx = factor_index(key);
    if (!value.is_number()) {
      throw std::runtime_error("'" + path + "': weight for " + key + " must be a number");
    }
    w.values[idx] = value.get<double>();
    seen[idx] = true;
  }
  for (std::size_t i = 0; i < kFactorCount; ++i) {
    if (!seen[i]) {
      throw std::runtime_error("'" + path + "': missing weight for " +
                               std::string(kFactorNames[i]));
    }
  }
  return validate_weights(w);
}

std::vector<RankedZone> rank_zones(const std::vector<std::string>& zone_ids,
                                   const FactorTable& table, const RankParams& params) {
  const WeightVector weights = validate_weights(params.weights);
  const std::size_t n = zone_ids.size();
  std::vector<RankedZone> ranking(n);
  if (n == 0) return ranking;

  // Normalize column-wise over the values that exist; imputation fills the
  // neutral midpoint afterwards so absent cells never skew a column's scale.
  std::array<std::vector<double>, kFactorCount> normalized;
  std::array<std::vector<bool>, kFactorCount> present;
  for (std::size_t f = 0; f < kFactorCount; ++f) {
    std::vector<double> column;
    present[f].assign(n, false);
    for (std::size_t z = 0; z < n; ++z) {
      const auto row = table.rows.find(zone_ids[z]);
      const std::optional<double> cell =
          row == table.rows.end() ? std::nullopt : row->second[f];
      if (cell) {
        present[f][z] = true;
        column.push_back(*cell);
      } else if (!params.impute) {
        throw std::runtime_error("zone '" + zone_ids[z] + "' is missing factor " +
                                 std::string(kFactorNames[f]));
      }
    }
    std::vector<double> scaled =
        column.empty() ? std::vector<double>{} : normalize_factor(column, params.normalize);
    normalized[f].assign(n, 0.5);
    std::size_t next = 0;
    for (std::size_t z = 0; z < n; ++z) {
      if (present[f][z]) normalized[f][z] = scaled[next++];
    }
  }

  for (std::size_t z = 0; z < n; ++z) {
    ranking[z].zone_id = zone_ids[z];
    for (std::size_t f = 0; f < kFactorCount; ++f) {
      ranking[z].factors[f] = normalized[f][z];
      if (!present[f][z]) ranking[z].imputed = true;
    }
    ranking[z].score = score_zone(ranking[z].factors, weights);
  }
  std::sort(ranking.begin(), ranking.end(), [](const RankedZone& a, const RankedZone& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.factors[0] != b.factors[0]) return a.factors[0] > b.factors[0];
    return a.zone_id < b.zone_id;
  });
  for (std::size_t i = 0; i < n; ++i) {
    ranking[i].rank = i + 1;
  }
  return ranking;
}

void write_ranking_csv(const std::vector<RankedZone>& ranking, const std::string& path,
                       bool include_imputed_column) {
  std::string out = "rank,zone_id,score";
  for (const char* name : kFactorNames) {
    out += ',';
    out += name;
  }
  if (include_imputed_column) out += ",imputed";
  out += '\n';
  for (const RankedZone& z : ranking) {
    out += std::to_string(z.rank);
    out += ',';
    out += io::csv_escape(z.zone_id);
    out += ',';
    out += io::format_double(z.score);
    for (const double f : z.factors) {
      out += ',';
      out += io::format_double(f);
    }
    if (include_imputed_column) {
      out += ',';
      out += z.imputed ? "true" : "false";
    }
    out += '\n';
  }
  io::write_file(path, out);
}

}  // namespace mcpzone::rank
