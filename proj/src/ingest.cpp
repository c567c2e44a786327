#include "mcpzone/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "mcpzone/io_util.hpp"

namespace mcpzone::ingest {

namespace {

using geom::Point2D;
using geom::Polyline;
using model::Pole;
using model::WireSegment;
using nlohmann::json;

constexpr double kLengthMismatchTolerance = 0.01;  // 1% of geometry length

double parse_double(std::string_view text, const std::string& what) {
  const std::string_view t = io::trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size() || !std::isfinite(value)) {
    throw std::runtime_error(what + ": bad number '" + std::string(text) + "'");
  }
  return value;
}

Crs resolve_crs(Format format, Crs crs) {
  if (crs != Crs::kAuto) return crs;
  return format == Format::kGeoJson ? Crs::kWgs84 : Crs::kPlanar;
}

std::string json_property_to_string(const json& value) {
  if (value.is_string()) return value.get<std::string>();
  return value.dump();
}

/// Feature-level parse of a pole layer before any projection.
struct RawPole {
  std::string pole_id;
  double x = 0.0;
  double y = 0.0;
  std::map<std::string, std::string> metadata;
};

struct RawWire {
  std::string wire_id;
  std::string circuit_id;
  std::vector<Point2D> vertices;  // planar or lon/lat depending on crs
  std::optional<double> stated_length_m;
  std::optional<double> ampacity_a;
  std::vector<std::string> declared_pole_ids;
};

json parse_json_file(const std::string& path) {
  const std::string text = io::read_file(path);
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) {
    throw std::runtime_error("'" + path + "': not valid JSON");
  }
  return doc;
}

const json& feature_collection(const json& doc, const std::string& path) {
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
      !doc.contains("features") || !doc["features"].is_array()) {
    throw std::runtime_error("'" + path + "': expected a GeoJSON FeatureCollection");
  }
  return doc["features"];
}

std::string record_label(const json& props, const char* id_key, std::size_t index) {
  if (props.is_object() && props.contains(id_key)) {
    return std::string(id_key) + " '" + json_property_to_string(props[id_key]) + "'";
  }
  return "feature #" + std::to_string(index);
}

std::vector<RawPole> parse_geojson_poles(const json& doc, const std::string& path,
                                         bool lenient,
                                         std::vector<std::string>& skipped) {
  std::vector<RawPole> raw;
  const json& features = feature_collection(doc, path);
  for (std::size_t i = 0; i < features.size(); ++i) {
    const json& f = features[i];
    const json props = f.value("properties", json::object());
    const std::string label = record_label(props, "pole_id", i);
    try {
      if (!f.contains("geometry") || !f["geometry"].is_object()) {
        throw std::runtime_error(label + ": missing geometry");
      }
      const json& g = f["geometry"];
      if (g.value("type", "") != "Point") {
        throw std::runtime_error(label + ": unsupported geometry type '" +
                                 g.value("type", "") + "' (expected Point)");
      }
      const json& coords = g.at("coordinates");
      if (!coords.is_array() || coords.size() < 2 || !coords[0].is_number() ||
          !coords[1].is_number()) {
        throw std::runtime_error(label + ": missing or non-numeric coordinates");
      }
      if (!props.contains("pole_id")) {
        throw std::runtime_error(label + ": missing pole_id property");
      }
      RawPole p;
      p.pole_id = json_property_to_string(props["pole_id"]);
      p.x = coords[0].get<double>();
      p.y = coords[1].get<double>();
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        throw std::runtime_error(label + ": non-finite coordinates");
      }
      for (const auto& [key, value] : props.items()) {
        if (key != "pole_id") p.metadata[key] = json_property_to_string(value);
      }
      raw.push_back(std::move(p));
    } catch (const std::exception& e) {
      if (!lenient) throw;
      skipped.push_back(e.what());
    }
  }
  return raw;
}

std::vector<RawPole> parse_csv_poles(const std::string& path, bool lenient,
                                     std::vector<std::string>& skipped) {
  const std::string text = io::read_file(path);
  std::istringstream lines(text);
  std::string line;
  if (!std::getline(lines, line)) {
    throw std::runtime_error("'" + path + "': empty CSV");
  }
  const std::vector<std::string> header = io::csv_split(line);
  if (header.size() < 3 || io::trim(header[0]) != "pole_id" ||
      io::trim(header[1]) != "x" || io::trim(header[2]) != "y") {
    throw std::runtime_error("'" + path + "': pole CSV header must start with pole_id,x,y");
  }
  std::vector<RawPole> raw;
  std::size_t line_no = 1;
  while (std::getline(lines, line)) {
    ++line_no;
    if (io::trim(line).empty()) continue;
    try {
      const std::vector<std::string> fields = io::csv_split(line);
      if (fields.size() < 3) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": expected at least 3 fields");
      }
      RawPole p;
      p.pole_id = std::string(io::trim(fields[0]));
      if (p.pole_id.empty()) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": empty pole_id");
      }
      p.x = parse_double(fields[1], "pole_id '" + p.pole_id + "' x");
      p.y = parse_double(fields[2], "pole_id '" + p.pole_id + "' y");
      for (std::size_t c = 3; c < fields.size() && c < header.size(); ++c) {
        p.metadata[std::string(io::trim(header[c]))] = fields[c];
      }
      raw.push_back(std::move(p));
    } catch (const std::exception& e) {
      if (!lenient) throw;
      skipped.push_back(e.what());
    }
  }
  return raw;
}

std::vector<Point2D> parse_wkt_linestring(std::string_view wkt, const std::string& label) {
  std::string_view s = io::trim(wkt);
  constexpr std::string_view kTag = "LINESTRING";
  if (s.size() < kTag.size() ||
      !std::equal(kTag.begin(), kTag.end(), s.begin(),
                  [](char a, char b) { return a == std::toupper(static_cast<unsigned char>(b)); })) {
    throw std::runtime_error(label + ": geometry_wkt is not a LINESTRING");
  }
  s.remove_prefix(kTag.size());
  s = io::trim(s);
  if (s.size() < 2 || s.front() != '(' || s.back() != ')') {
    throw std::runtime_error(label + ": malformed WKT coordinate list");
  }
  s = s.substr(1, s.size() - 2);
  std::vector<Point2D> vertices;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t comma = s.find(',', start);
    std::string_view pair = s.substr(start, comma == std::string_view::npos
                                                ? std::string_view::npos
                                                : comma - start);
    pair = io::trim(pair);
    if (pair.empty()) {
      throw std::runtime_error(label + ": empty WKT coordinate pair");
    }
    const std::size_t space = pair.find_first_of(" \t");
    if (space == std::string_view::npos) {
      throw std::runtime_error(label + ": WKT coordinate pair missing a space");
    }
    vertices.push_back({parse_double(pair.substr(0, space), label + " x"),
                        parse_double(pair.substr(space + 1), label + " y")});
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return vertices;
}

std::vector<RawWire> parse_geojson_wires(const json& doc, const std::string& path,
                                         bool lenient,
                                         std::vector<std::string>& skipped) {
  std::vector<RawWire> raw;
  const json& features = feature_collection(doc, path);
  for (std::size_t i = 0; i < features.size(); ++i) {
    const json& f = features[i];
    const json props = f.value("properties", json::object());
    const std::string label = record_label(props, "wire_id", i);
    try {
      if (!f.contains("geometry") || !f["geometry"].is_object()) {
        throw std::runtime_error(label + ": missing geometry");
      }
      const json& g = f["geometry"];
      if (g.value("type", "") != "LineString") {
        throw std::runtime_error(label + ": unsupported geometry type '" +
                                 g.value("type", "") + "' (expected LineString)");
      }
      RawWire w;
      if (!props.contains("wire_id")) {
        throw std::runtime_error(label + ": missing wire_id property");
      }
      w.wire_id = json_property_to_string(props["wire_id"]);
      if (!props.contains("circuit_id") ||
          io::trim(json_property_to_string(props["circuit_id"])).empty()) {
        throw std::runtime_error(label + ": missing circuit_id property");
      }
      w.circuit_id = std::string(io::trim(json_property_to_string(props["circuit_id"])));
      const json& coords = g.at("coordinates");
      if (!coords.is_array() || coords.size() < 2) {
        throw std::runtime_error(label + ": degenerate geometry (< 2 vertices)");
      }
      for (const json& pair : coords) {
        if (!pair.is_array() || pair.size() < 2 || !pair[0].is_number() ||
            !pair[1].is_number()) {
          throw std::runtime_error(label + ": non-numeric coordinate");
        }
        w.vertices.push_back({pair[0].get<double>(), pair[1].get<double>()});
      }
      if (props.contains("length_m") && props["length_m"].is_number()) {
        w.stated_length_m = props["length_m"].get<double>();
      }
      if (props.contains("ampacity_a") && props["ampacity_a"].is_number()) {
        w.ampacity_a = props["ampacity_a"].get<double>();
      }
      if (props.contains("declared_pole_ids") && props["declared_pole_ids"].is_array()) {
        for (const json& id : props["declared_pole_ids"]) {
          w.declared_pole_ids.push_back(json_property_to_string(id));
        }
      }
      raw.push_back(std::move(w));
    } catch (const std::exception& e) {
      if (!lenient) throw;
      skipped.push_back(e.what());
    }
  }
  return raw;
}

std::vector<RawWire> parse_csv_wires(const std::string& path, bool lenient,
                                     std::vector<std::string>& skipped) {
  const std::string text = io::read_file(path);
  std::istringstream lines(text);
  std::string line;
  if (!std::getline(lines, line)) {
    throw std::runtime_error("'" + path + "': empty CSV");
  }
  const std::vector<std::string> header = io::csv_split(line);
  if (header.size() < 3 || io::trim(header[0]) != "wire_id" ||
      io::trim(header[1]) != "circuit_id" || io::trim(header[2]) != "geometry_wkt") {
    throw std::runtime_error(
        "'" + path + "': wire CSV header must start with wire_id,circuit_id,geometry_wkt");
  }
  int length_col = -1;
  int ampacity_col = -1;
  for (std::size_t c = 3; c < header.size(); ++c) {
    const std::string_view name = io::trim(header[c]);
    if (name == "length_m") length_col = static_cast<int>(c);
    if (name == "ampacity_a") ampacity_col = static_cast<int>(c);
  }
  std::vector<RawWire> raw;
  std::size_t line_no = 1;
  while (std::getline(lines, line)) {
    ++line_no;
    if (io::trim(line).empty()) continue;
    try {
      const std::vector<std::string> fields = io::csv_split(line);
      if (fields.size() < 3) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": expected at least 3 fields");
      }
      RawWire w;
      w.wire_id = std::string(io::trim(fields[0]));
      if (w.wire_id.empty()) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": empty wire_id");
      }
      const std::string label = "wire_id '" + w.wire_id + "'";
      w.circuit_id = std::string(io::trim(fields[1]));
      if (w.circuit_id.empty()) {
        throw std::runtime_error(label + ": missing circuit_id");
      }
      w.vertices = parse_wkt_linestring(fields[2], label);
      if (length_col >= 0 && static_cast<std::size_t>(length_col) < fields.size() &&
          !io::trim(fields[static_cast<std::size_t>(length_col)]).empty()) {
        w.stated_length_m =
            parse_double(fields[static_cast<std::size_t>(length_col)], label + " length_m");
      }
      if (ampacity_col >= 0 && static_cast<std::size_t>(ampacity_col) < fields.size() &&
          !io::trim(fields[static_cast<std::size_t>(ampacity_col)]).empty()) {
        w.ampacity_a =
            parse_double(fields[static_cast<std::size_t>(ampacity_col)], label + " ampacity_a");
      }
      raw.push_back(std::move(w));
    } catch (const std::exception& e) {
      if (!lenient) throw;
      skipped.push_back(e.what());
    }
  }
  return raw;
}

GeoPoint centroid_of(const std::vector<RawPole>& poles,
                     const std::vector<RawWire>& wires) {
  double lon = 0.0;
  double lat = 0.0;
  std::size_t n = 0;
  for (const RawPole& p : poles) {
    lon += p.x;
    lat += p.y;
    ++n;
  }
  for (const RawWire& w : wires) {
    for (const Point2D& v : w.vertices) {
      lon += v.x;
      lat += v.y;
      ++n;
    }
  }
  if (n == 0) {
    throw std::runtime_error("cannot derive a projection origin from an empty source");
  }
  return {lon / static_cast<double>(n), lat / static_cast<double>(n)};
}

PoleLoadResult assemble_poles(std::vector<RawPole> raw, Crs crs,
                              std::optional<GeoPoint> origin, bool lenient,
                              std::vector<std::string> skipped) {
  PoleLoadResult result;
  result.skipped = std::move(skipped);
  if (crs == Crs::kWgs84) {
    if (!origin) origin = centroid_of(raw, {});
    result.origin = origin;
  }
  for (RawPole& r : raw) {
    try {
      Pole pole;
      pole.pole_id = std::move(r.pole_id);
      pole.metadata = std::move(r.metadata);
      if (crs == Crs::kWgs84) {
        pole.location = geom::project_to_plane({r.x, r.y}, *origin);
      } else {
        pole.location = {r.x, r.y};
      }
      result.poles.add(std::move(pole));
    } catch (const std::exception& e) {
      if (!lenient) throw;
      result.skipped.push_back(e.what());
    }
  }
  return result;
}

WireLoadResult assemble_wires(std::vector<RawWire> raw, Crs crs,
                              std::optional<GeoPoint> origin, bool lenient,
                              std::vector<std::string> skipped) {
  WireLoadResult result;
  result.skipped = std::move(skipped);
  if (crs == Crs::kWgs84) {
    if (!origin) origin = centroid_of({}, raw);
    result.origin = origin;
  }
  for (RawWire& r : raw) {
    const std::string label = "wire_id '" + r.wire_id + "'";
    try {
      std::vector<Point2D> vertices;
      vertices.reserve(r.vertices.size());
      for (const Point2D& v : r.vertices) {
        vertices.push_back(crs == Crs::kWgs84
                               ? geom::project_to_plane({v.x, v.y}, *origin)
                               : v);
      }
      // Collapse exact consecutive duplicates rather than rejecting them;
      // dirty exports repeat vertices routinely.
      vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
      if (vertices.size() < 2) {
        throw std::runtime_error(label + ": degenerate geometry (< 2 distinct vertices)");
      }
      Polyline geometry(std::move(vertices));
      const double derived = geom::polyline_arc_length(geometry);
      double length = derived;
      if (r.stated_length_m && *r.stated_length_m > 0.0 &&
          std::abs(*r.stated_length_m - derived) <= kLengthMismatchTolerance * derived) {
        length = *r.stated_length_m;
      } else if (r.stated_length_m) {
        result.warnings.push_back(
            label + ": stated length " + io::format_double(*r.stated_length_m) +
            " m disagrees with geometry (" + io::format_double(derived) +
            " m) by more than 1%; using geometry-derived length");
      }
      result.wires.add({std::move(r.wire_id), std::move(r.circuit_id),
                        std::move(geometry), length, r.ampacity_a,
                        std::move(r.declared_pole_ids)});
    } catch (const std::exception& e) {
      if (!lenient) throw;
      result.skipped.push_back(e.what());
    }
  }
  return result;
}

json point_coordinates(const Point2D& p, const std::optional<GeoPoint>& origin) {
  if (origin) {
    const GeoPoint g = geom::inverse_project(p, *origin);
    return json::array({g.lon, g.lat});
  }
  return json::array({p.x, p.y});
}

}  // namespace

Format detect_format(const std::string& path) {
  const auto dot = path.find_last_of('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == "json" || ext == "geojson") return Format::kGeoJson;
  if (ext == "csv") return Format::kCsv;
  throw std::runtime_error("'" + path + "': cannot infer format from extension (use .geojson/.json/.csv)");
}

PoleLoadResult load_poles(const std::string& path, const LoadOptions& opts) {
  const Format format = opts.format == Format::kAuto ? detect_format(path) : opts.format;
  const Crs crs = resolve_crs(format, opts.crs);
  std::vector<std::string> skipped;
  std::vector<RawPole> raw =
      format == Format::kGeoJson
          ? parse_geojson_poles(parse_json_file(path), path, opts.lenient, skipped)
          : parse_csv_poles(path, opts.lenient, skipped);
  return assemble_poles(std::move(raw), crs, opts.origin, opts.lenient, std::move(skipped));
}

WireLoadResult load_wires(const std::string& path, const LoadOptions& opts) {
  const Format format = opts.format == Format::kAuto ? detect_format(path) : opts.format;
  const Crs crs = resolve_crs(format, opts.crs);
  std::vector<std::string> skipped;
  std::vector<RawWire> raw =
      format == Format::kGeoJson
          ? parse_geojson_wires(parse_json_file(path), path, opts.lenient, skipped)
          : parse_csv_wires(path, opts.lenient, skipped);
  return assemble_wires(std::move(raw), crs, opts.origin, opts.lenient, std::move(skipped));
}

PairLoadResult load_pair(const std::string& poles_path, const std::string& wires_path,
                         const LoadOptions& opts) {
  const Format poles_format =
      opts.format == Format::kAuto ? detect_format(poles_path) : opts.format;
  const Format wires_format =
      opts.format == Format::kAuto ? detect_format(wires_path) : opts.format;
  const Crs poles_crs = resolve_crs(poles_format, opts.crs);
  const Crs wires_crs = resolve_crs(wires_format, opts.crs);

  std::vector<std::string> pole_skipped;
  std::vector<std::string> wire_skipped;
  std::vector<RawPole> raw_poles =
      poles_format == Format::kGeoJson
          ? parse_geojson_poles(parse_json_file(poles_path), poles_path, opts.lenient,
                                pole_skipped)
          : parse_csv_poles(poles_path, opts.lenient, pole_skipped);
  std::vector<RawWire> raw_wires =
      wires_format == Format::kGeoJson
          ? parse_geojson_wires(parse_json_file(wires_path), wires_path, opts.lenient,
                                wire_skipped)
          : parse_csv_wires(wires_path, opts.lenient, wire_skipped);

  PairLoadResult result;
  std::optional<GeoPoint> origin = opts.origin;
  // Both geographic layers must share one origin or cross-layer distances
  // would not be comparable.
  if ((poles_crs == Crs::kWgs84 || wires_crs == Crs::kWgs84) && !origin) {
    origin = centroid_of(poles_crs == Crs::kWgs84 ? raw_poles : std::vector<RawPole>{},
                         wires_crs == Crs::kWgs84 ? raw_wires : std::vector<RawWire>{});
  }
  result.poles = assemble_poles(std::move(raw_poles), poles_crs, origin, opts.lenient,
                                std::move(pole_skipped));
  result.wires = assemble_wires(std::move(raw_wires), wires_crs, origin, opts.lenient,
                                std::move(wire_skipped));
  result.origin = result.poles.origin ? result.poles.origin : result.wires.origin;
  return result;
}

void write_poles_geojson(const PoleSet& poles, const std::string& path,
                         const std::optional<GeoPoint>& origin) {
  json features = json::array();
  for (const Pole& p : poles.items()) {
    json props;
    props["pole_id"] = p.pole_id;
    for (const auto& [key, value] : p.metadata) props[key] = value;
    features.push_back({{"type", "Feature"},
                        {"geometry",
                         {{"type", "Point"},
                          {"coordinates", point_coordinates(p.location, origin)}}},
                        {"properties", props}});
  }
  const json doc = {{"type", "FeatureCollection"}, {"features", features}};
  io::write_file(path, doc.dump(2) + "\n");
}

void write_wires_geojson(const WireSet& wires, const std::string& path,
                         const std::optional<GeoPoint>& origin) {
  json features = json::array();
  for (const WireSegment& w : wires.items()) {
    json coords = json::array();
    for (const Point2D& v : w.geometry.vertices()) {
      coords.push_back(point_coordinates(v, origin));
    }
    json props;
    props["wire_id"] = w.wire_id;
    props["circuit_id"] = w.circuit_id;
    props["length_m"] = w.length_m;
    if (w.ampacity_a) props["ampacity_a"] = *w.ampacity_a;
    if (!w.declared_pole_ids.empty()) props["declared_pole_ids"] = w.declared_pole_ids;
    features.push_back({{"type", "Feature"},
                        {"geometry", {{"type", "LineString"}, {"coordinates", coords}}},
                        {"properties", props}});
  }
  const json doc = {{"type", "FeatureCollection"}, {"features", features}};
  io::write_file(path, doc.dump(2) + "\n");
}

void write_poles_csv(const PoleSet& poles, const std::string& path) {
  std::string out = "pole_id,x,y\n";
  for (const Pole& p : poles.items()) {
    out += io::csv_escape(p.pole_id);
    out += ',';
    out += io::format_double(p.location.x);
    out += ',';
    out += io::format_double(p.location.y);
    out += '\n';
  }
  io::write_file(path, out);
}

void write_wires_csv(const WireSet& wires, const std::string& path) {
  std::string out = "wire_id,circuit_id,geometry_wkt,length_m,ampacity_a\n";
  for (const WireSegment& w : wires.items()) {
    std::string wkt = "LINESTRING (";
    const auto& vertices = w.geometry.vertices();
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      if (i > 0) wkt += ", ";
      wkt += io::format_double(vertices[i].x);
      wkt += ' ';
      wkt += io::format_double(vertices[i].y);
    }
    wkt += ')';
    out += io::csv_escape(w.wire_id);
    out += ',';
    out += io::csv_escape(w.circuit_id);
    out += ',';
    out += io::csv_escape(wkt);
    out += ',';
    out += io::format_double(w.length_m);
    out += ',';
    if (w.ampacity_a) out += io::format_double(*w.ampacity_a);
    out += '\n';
  }
  io::write_file(path, out);
}

}  // namespace mcpzone::ingest
