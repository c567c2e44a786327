#include "mcpzone/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "mcpzone/geometry.hpp"
#include "mcpzone/ingest.hpp"
#include "mcpzone/io_util.hpp"

namespace mcpzone::synth {

namespace {

using geom::Point2D;

// Defaults of the downstream pipeline that the generator's layout guarantees
// are honored (see the header notes).
constexpr double kAssocCutoffM = 50.0;
constexpr double kClusterRadiusM = 200.0;

constexpr double kCorridorGapM = 2.0 * kClusterRadiusM + 100.0;  // between corridor boxes
constexpr double kBgBlockMarginM = 2.0 * kClusterRadiusM + 60.0;  // corridor box to bg cell
constexpr double kBgCellM = 200.0;
constexpr double kBgCellInsetM = 60.0;   // keeps neighbor-cell conductors out of reach
constexpr double kBgWireLengthM = 30.0;

/// WGS84 anchor for the GeoJSON flavor of the outputs.
constexpr geom::GeoPoint kGeoOrigin{-72.0, 42.0};

/// Seeded mt19937_64 with hand-rolled draws; std::normal_distribution and
/// friends are not bit-stable across standard libraries, these are.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Box-Muller; the open-interval draw keeps log() finite.
  double gaussian(double sigma) {
    const double u1 = static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return sigma * std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Gaussian clamped to +/- 2 sigma.
  double jitter(double sigma) {
    return std::clamp(gaussian(sigma), -2.0 * sigma, 2.0 * sigma);
  }

  /// Uniform integer in [0, n), rejection-sampled to kill modulo bias.
  std::size_t index(std::size_t n) {
    const std::uint64_t limit = (UINT64_MAX / n) * n;
    std::uint64_t v = engine_();
    while (v >= limit) v = engine_();
    return static_cast<std::size_t>(v % n);
  }

 private:
  std::mt19937_64 engine_;
};

std::string pad_number(std::size_t value, std::size_t width) {
  std::string digits = std::to_string(value);
  return digits.size() >= width ? digits
                                : std::string(width - digits.size(), '0') + digits;
}

double lateral_offset_m(const SynthParams& p, std::size_t circuit_index) {
  const double magnitude = p.wire_offset_m * (1.0 + 0.25 * static_cast<double>(circuit_index));
  return circuit_index % 2 == 0 ? magnitude : -magnitude;
}

void validate(const SynthParams& p) {
  if (!(p.extent_x_m > 0.0) || !(p.extent_y_m > 0.0)) {
    throw std::invalid_argument("territory extent must be positive");
  }
  if (p.jitter_sigma_m < 0.0) throw std::invalid_argument("jitter sigma must be >= 0");
  if (!(p.wire_offset_m > 0.0) || p.wire_offset_m >= kAssocCutoffM) {
    throw std::invalid_argument("wire offset must be in (0, 50)");
  }
  if (p.background_poles > 0 && p.background_circuits < 1) {
    throw std::invalid_argument("background_circuits must be >= 1");
  }
  if (p.background_poles > 999'999 || p.corridors.size() > 999) {
    throw std::invalid_argument("generator id scheme caps: 999,999 background poles, 999 corridors");
  }
  for (const CorridorSpec& c : p.corridors) {
    if (c.circuit_count < 2 || c.circuit_count > 26) {
      throw std::invalid_argument("corridor circuit_count must be in 2..26");
    }
    if (!(c.length_m > 0.0) || !(c.spacing_m > 0.0)) {
      throw std::invalid_argument("corridor length and spacing must be positive");
    }
    if (c.spacing_m > kClusterRadiusM) {
      throw std::invalid_argument(
          "corridor spacing exceeds the 200 m clustering radius; the corridor would fragment");
    }
    const double worst_lateral =
        p.wire_offset_m * (1.0 + 0.25 * static_cast<double>(c.circuit_count - 1)) +
        4.0 * p.jitter_sigma_m;
    if (std::hypot(worst_lateral, 4.0 * p.jitter_sigma_m) >= kAssocCutoffM) {
      throw std::invalid_argument(
          "wire offset plus jitter cannot guarantee association within the 50 m cutoff");
    }
  }
}

struct Bbox {
  double min_x, min_y, max_x, max_y;
};

struct PlacedCorridor {
  Point2D start;      // first pole's unjittered location
  Point2D direction;  // unit vector along the heading
  std::size_t pole_count;
  Bbox box;  // padded footprint incl. conductors, overhangs, and jitter
};

/// Shelf-packs the corridors' padded boxes left to right, top row first,
/// with kCorridorGapM between boxes. Throws when they do not fit.
std::vector<PlacedCorridor> place_corridors(const SynthParams& p) {
  std::vector<PlacedCorridor> placed;
  const double border = kCorridorGapM;
  double cursor_x = border;
  double row_y = border;
  double row_h = 0.0;
  for (const CorridorSpec& c : p.corridors) {
    const double heading = c.heading_deg * std::numbers::pi / 180.0;
    const Point2D dir{std::cos(heading), std::sin(heading)};
    const std::size_t n =
        static_cast<std::size_t>(std::floor(c.length_m / c.spacing_m + 1e-9)) + 1;
    const double run = static_cast<double>(n - 1) * c.spacing_m;
    const double max_offset =
        p.wire_offset_m * (1.0 + 0.25 * static_cast<double>(c.circuit_count - 1));
    const double pad = c.spacing_m / 2.0 + max_offset + 2.0 * p.jitter_sigma_m + 1.0;
    const double bw = std::abs(run * dir.x) + 2.0 * pad;
    const double bh = std::abs(run * dir.y) + 2.0 * pad;

    if (cursor_x + bw + border > p.extent_x_m && cursor_x > border) {
      row_y += row_h + kCorridorGapM;
      cursor_x = border;
      row_h = 0.0;
    }
    if (cursor_x + bw + border > p.extent_x_m || row_y + bh + border > p.extent_y_m) {
      throw std::invalid_argument(
          "infeasible layout: corridors cannot be separated within the territory extent");
    }
    PlacedCorridor pc;
    pc.direction = dir;
    pc.pole_count = n;
    pc.box = {cursor_x, row_y, cursor_x + bw, row_y + bh};
    pc.start = {cursor_x + pad + std::max(0.0, -run * dir.x),
                row_y + pad + std::max(0.0, -run * dir.y)};
    placed.push_back(pc);
    cursor_x += bw + kCorridorGapM;
    row_h = std::max(row_h, bh);
  }
  return placed;
}

}  // namespace

SynthResult generate(const SynthParams& params) {
  validate(params);
  const std::vector<PlacedCorridor> placed = place_corridors(params);
  Rng rng(params.seed);

  SynthResult result;
  result.truth.seed = params.seed;

  for (std::size_t ci = 0; ci < params.corridors.size(); ++ci) {
    const CorridorSpec& spec = params.corridors[ci];
    const PlacedCorridor& pc = placed[ci];
    const std::string corridor_tag = pad_number(ci, 3);
    const Point2D dir = pc.direction;
    const Point2D normal{-dir.y, dir.x};

    CorridorTruth truth;
    truth.pole_count = pc.pole_count;
    truth.expected_extent_m = static_cast<double>(pc.pole_count - 1) * spec.spacing_m;

    std::vector<Point2D> axis_points(pc.pole_count);
    for (std::size_t j = 0; j < pc.pole_count; ++j) {
      const double t = static_cast<double>(j) * spec.spacing_m;
      axis_points[j] = {pc.start.x + dir.x * t, pc.start.y + dir.y * t};
      model::Pole pole;
      pole.pole_id = "C" + corridor_tag + "-P" + pad_number(j, 4);
      pole.location = {axis_points[j].x + rng.jitter(params.jitter_sigma_m),
                       axis_points[j].y + rng.jitter(params.jitter_sigma_m)};
      pole.metadata["kind"] = "corridor";
      truth.pole_ids.push_back(pole.pole_id);
      result.poles.add(std::move(pole));
    }

    for (std::size_t k = 0; k < spec.circuit_count; ++k) {
      const std::string circuit_id =
          "CKT-" + corridor_tag + "-" + std::string(1, static_cast<char>('A' + k));
      truth.circuits.push_back(circuit_id);
      const double offset = lateral_offset_m(params, k);
      // One conductor segment per pole, centered on it along the axis, so the
      // segment midpoint stays within the association cutoff of its pole.
      for (std::size_t j = 0; j < pc.pole_count; ++j) {
        const double half = spec.spacing_m / 2.0;
        const Point2D a{
            axis_points[j].x - dir.x * half + normal.x * offset + rng.jitter(params.jitter_sigma_m),
            axis_points[j].y - dir.y * half + normal.y * offset + rng.jitter(params.jitter_sigma_m)};
        const Point2D b{
            axis_points[j].x + dir.x * half + normal.x * offset + rng.jitter(params.jitter_sigma_m),
            axis_points[j].y + dir.y * half + normal.y * offset + rng.jitter(params.jitter_sigma_m)};
        result.wires.add({"C" + corridor_tag + "-K" + std::to_string(k) + "-W" + pad_number(j, 4),
                          circuit_id, geom::Polyline({a, b}),
                          geom::euclidean_distance(a, b), std::nullopt, {}});
      }
    }
    std::sort(truth.circuits.begin(), truth.circuits.end());
    std::sort(truth.pole_ids.begin(), truth.pole_ids.end());
    result.truth.corridors.push_back(std::move(truth));
  }

  if (params.background_poles > 0) {
    const auto nx = static_cast<std::size_t>(params.extent_x_m / kBgCellM);
    const auto ny = static_cast<std::size_t>(params.extent_y_m / kBgCellM);
    std::vector<std::size_t> open_cells;
    open_cells.reserve(nx * ny);
    for (std::size_t iy = 0; iy < ny; ++iy) {
      for (std::size_t ix = 0; ix < nx; ++ix) {
        const double x0 = static_cast<double>(ix) * kBgCellM;
        const double y0 = static_cast<double>(iy) * kBgCellM;
        bool blocked = false;
        for (const PlacedCorridor& pc : placed) {
          if (x0 + kBgCellM >= pc.box.min_x - kBgBlockMarginM &&
              x0 <= pc.box.max_x + kBgBlockMarginM &&
              y0 + kBgCellM >= pc.box.min_y - kBgBlockMarginM &&
              y0 <= pc.box.max_y + kBgBlockMarginM) {
            blocked = true;
            break;
          }
        }
        if (!blocked) open_cells.push_back(iy * nx + ix);
      }
    }
    if (open_cells.size() < params.background_poles) {
      throw std::invalid_argument(
          "infeasible layout: territory has room for only " +
          std::to_string(open_cells.size()) + " background poles, " +
          std::to_string(params.background_poles) + " requested");
    }
    // Partial Fisher-Yates: the first background_poles entries end up a
    // uniform sample of the open cells.
    for (std::size_t i = 0; i < params.background_poles; ++i) {
      const std::size_t j = i + rng.index(open_cells.size() - i);
      std::swap(open_cells[i], open_cells[j]);
    }
    for (std::size_t i = 0; i < params.background_poles; ++i) {
      const std::size_t cell = open_cells[i];
      const double x0 = static_cast<double>(cell % nx) * kBgCellM;
      const double y0 = static_cast<double>(cell / nx) * kBgCellM;
      model::Pole pole;
      pole.pole_id = "B-P" + pad_number(i, 6);
      pole.location = {rng.uniform(x0 + kBgCellInsetM, x0 + kBgCellM - kBgCellInsetM),
                       rng.uniform(y0 + kBgCellInsetM, y0 + kBgCellM - kBgCellInsetM)};
      pole.metadata["kind"] = "background";

      const double heading = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const Point2D dir{std::cos(heading), std::sin(heading)};
      const double offset = rng.uniform(5.0, 15.0);
      const Point2D center{pole.location.x - dir.y * offset,
                           pole.location.y + dir.x * offset};
      const double half = kBgWireLengthM / 2.0;
      const Point2D a{center.x - dir.x * half + rng.jitter(params.jitter_sigma_m),
                      center.y - dir.y * half + rng.jitter(params.jitter_sigma_m)};
      const Point2D b{center.x + dir.x * half + rng.jitter(params.jitter_sigma_m),
                      center.y + dir.y * half + rng.jitter(params.jitter_sigma_m)};
      result.poles.add(std::move(pole));
      result.wires.add({"B-W" + pad_number(i, 6),
                        "BGC-" + pad_number(rng.index(params.background_circuits), 3),
                        geom::Polyline({a, b}), geom::euclidean_distance(a, b),
                        std::nullopt, {}});
    }
  }

  return result;
}

std::vector<std::string> write_outputs(const SynthResult& result, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::string base = out_dir + "/";
  std::vector<std::string> paths;

  ingest::write_poles_geojson(result.poles, base + "poles.geojson", kGeoOrigin);
  paths.push_back(base + "poles.geojson");
  ingest::write_wires_geojson(result.wires, base + "wires.geojson", kGeoOrigin);
  paths.push_back(base + "wires.geojson");
  ingest::write_poles_csv(result.poles, base + "poles.csv");
  paths.push_back(base + "poles.csv");
  ingest::write_wires_csv(result.wires, base + "wires.csv");
  paths.push_back(base + "wires.csv");

  nlohmann::json corridors = nlohmann::json::array();
  for (const CorridorTruth& t : result.truth.corridors) {
    corridors.push_back({{"circuits", t.circuits},
                         {"pole_ids", t.pole_ids},
                         {"pole_count", t.pole_count},
                         {"expected_extent_m", t.expected_extent_m}});
  }
  const nlohmann::json truth = {{"generator", "mt19937_64"},
                                {"seed", result.truth.seed},
                                {"corridors", corridors}};
  io::write_file(base + "ground_truth.json", truth.dump(2) + "\n");
  paths.push_back(base + "ground_truth.json");
  return paths;
}

}  // namespace mcpzone::synth
