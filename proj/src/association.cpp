#include "mcpzone/association.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "mcpzone/geometry.hpp"
#include "mcpzone/io_util.hpp"
#include "mcpzone/spatial_index.hpp"

namespace mcpzone::assoc {

namespace {

using geom::Point2D;

struct Bbox {
  double min_x = 0.0, min_y = 0.0, max_x = 0.0, max_y = 0.0;
};

Bbox polyline_bbox(const geom::Polyline& line) {
  Bbox b{line.vertices()[0].x, line.vertices()[0].y, line.vertices()[0].x,
         line.vertices()[0].y};
  for (const Point2D& v : line.vertices()) {
    b.min_x = std::min(b.min_x, v.x);
    b.min_y = std::min(b.min_y, v.y);
    b.max_x = std::max(b.max_x, v.x);
    b.max_y = std::max(b.max_y, v.y);
  }
  return b;
}

}  // namespace

AssociationResult associate(const model::PoleSet& poles, const model::WireSet& wires,
                            const AssociationParams& params) {
  if (params.k < 1) throw std::invalid_argument("association k must be >= 1");
  if (!(params.d_max_m > 0.0)) throw std::invalid_argument("association d_max must be > 0");
  if (poles.empty()) throw std::invalid_argument("association needs a non-empty pole set");
  if (wires.empty()) throw std::invalid_argument("association needs a non-empty wire set");

  // Tie-break rank is position in wire_id order, so results depend only on
  // data values, never on source record order.
  std::vector<std::size_t> rank_to_ordinal(wires.size());
  std::iota(rank_to_ordinal.begin(), rank_to_ordinal.end(), std::size_t{0});
  std::sort(rank_to_ordinal.begin(), rank_to_ordinal.end(),
            [&](std::size_t a, std::size_t b) {
              return wires.at(a).wire_id < wires.at(b).wire_id;
            });

  AssociationResult result;
  result.entries.resize(poles.size());

  auto emit = [&](std::size_t pole, std::size_t rank, double distance) {
    const model::WireSegment& wire = wires.at(rank_to_ordinal[rank]);
    result.entries[pole].push_back({rank_to_ordinal[rank], wire.circuit_id, distance});
  };

  if (params.distance == DistanceMode::kCentroid) {
    std::vector<Point2D> centroids;
    centroids.reserve(wires.size());
    for (std::size_t rank = 0; rank < wires.size(); ++rank) {
      centroids.push_back(geom::polyline_midpoint(wires.at(rank_to_ordinal[rank]).geometry));
    }
    const spatial::KdTree tree(std::move(centroids));
    for (std::size_t i = 0; i < poles.size(); ++i) {
      for (const spatial::Neighbor& hit :
           tree.knn(poles.at(i).location, params.k, params.d_max_m)) {
        emit(i, hit.point_index, hit.distance_m);
      }
    }
  } else {
    // Nearest-point mode scans every wire per pole (with a bounding-box
    // reject); meant for small experiments, not the full-territory path.
    std::vector<Bbox> boxes;
    boxes.reserve(wires.size());
    for (std::size_t rank = 0; rank < wires.size(); ++rank) {
      boxes.push_back(polyline_bbox(wires.at(rank_to_ordinal[rank]).geometry));
    }
    for (std::size_t i = 0; i < poles.size(); ++i) {
      const Point2D loc = poles.at(i).location;
      std::vector<std::pair<double, std::size_t>> hits;  // (distance, rank)
      for (std::size_t rank = 0; rank < wires.size(); ++rank) {
        const Bbox& b = boxes[rank];
        if (loc.x < b.min_x - params.d_max_m || loc.x > b.max_x + params.d_max_m ||
            loc.y < b.min_y - params.d_max_m || loc.y > b.max_y + params.d_max_m) {
          continue;
        }
        const double d =
            geom::point_polyline_distance(loc, wires.at(rank_to_ordinal[rank]).geometry);
        if (d <= params.d_max_m) hits.emplace_back(d, rank);
      }
      std::sort(hits.begin(), hits.end());
      if (hits.size() > params.k) hits.resize(params.k);
      for (const auto& [d, rank] : hits) emit(i, rank, d);
    }
  }

  if (params.trust_declared) {
    // Declared attachments are unioned in on top of the spatial result; they
    // are exempt from both the k cap and the distance cutoff.
    std::vector<std::size_t> ordinal_to_rank(wires.size());
    for (std::size_t rank = 0; rank < wires.size(); ++rank) {
      ordinal_to_rank[rank_to_ordinal[rank]] = rank;
    }
    for (std::size_t rank = 0; rank < wires.size(); ++rank) {
      const std::size_t ordinal = rank_to_ordinal[rank];
      const model::WireSegment& wire = wires.at(ordinal);
      for (const std::string& pole_id : wire.declared_pole_ids) {
        const auto pole_ordinal = poles.ordinal_of(pole_id);
        if (!pole_ordinal) {
          throw std::invalid_argument("wire_id '" + wire.wire_id +
                                      "' declares unknown pole_id '" + pole_id + "'");
        }
        auto& list = result.entries[*pole_ordinal];
        const bool present = std::any_of(list.begin(), list.end(),
                                         [&](const AssociationEntry& e) {
                                           return e.wire_ordinal == ordinal;
                                         });
        if (present) continue;
        const Point2D loc = poles.at(*pole_ordinal).location;
        const double d = params.distance == DistanceMode::kCentroid
                             ? geom::euclidean_distance(
                                   loc, geom::polyline_midpoint(wire.geometry))
                             : geom::point_polyline_distance(loc, wire.geometry);
        list.push_back({ordinal, wire.circuit_id, d});
      }
    }
    for (auto& list : result.entries) {
      std::sort(list.begin(), list.end(),
                [&](const AssociationEntry& a, const AssociationEntry& b) {
                  if (a.distance_m != b.distance_m) return a.distance_m < b.distance_m;
                  return ordinal_to_rank[a.wire_ordinal] < ordinal_to_rank[b.wire_ordinal];
                });
    }
  }

  return result;
}

void write_associations_csv(const model::PoleSet& poles, const model::WireSet& wires,
                            const AssociationResult& result, const std::string& path) {
  if (result.entries.size() != poles.size()) {
    throw std::invalid_argument("association table does not match the pole set");
  }
  std::string out = "pole_id,wire_id,circuit_id,distance_m\n";
  for (std::size_t i = 0; i < poles.size(); ++i) {
    for (const AssociationEntry& e : result.entries[i]) {
      out += io::csv_escape(poles.at(i).pole_id);
      out += ',';
      out += io::csv_escape(wires.at(e.wire_ordinal).wire_id);
      out += ',';
      out += io::csv_escape(e.circuit_id);
      out += ',';
      out += io::format_double(e.distance_m);
      out += '\n';
    }
  }
  io::write_file(path, out);
}

}  // namespace mcpzone::assoc
