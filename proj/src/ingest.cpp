#include "ucp/ingest.hpp"

#include "ucp/errors.hpp"
#include "ucp/geometry.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ucp {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 6> kClassNames = {"building", "green", "industrial",
                                                         "road",     "water", "other"};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string_view to_string(SurfaceClass c) { return kClassNames[static_cast<std::size_t>(c)]; }

SurfaceClass parse_surface_class(std::string_view name) {
  const std::string key = lower(name);
  for (std::size_t i = 0; i < kClassNames.size(); ++i)
    if (kClassNames[i] == key) return kSurfaceClasses[i];
  throw ConfigError("unknown surface class '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// GeoJSON

namespace {

struct FeatureContext {
  int index;
  const LoadOptions& options;
  VectorLayer& layer;

  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError("feature " + std::to_string(index) + ": " + why);
  }
  // Strict mode raises, lenient mode records a warning.
  void problem(const std::string& why) const {
    if (options.strict) fail(why);
    layer.warnings.push_back("feature " + std::to_string(index) + ": " + why);
  }
};

Point2 parse_position(const json& pos, const FeatureContext& ctx) {
  if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() || !pos[1].is_number())
    ctx.fail("malformed coordinate position");
  const Point2 p(pos[0].get<double>(), pos[1].get<double>());
  if (!p.allFinite()) ctx.fail("non-finite coordinate");
  return p;
}

// Returns false when the ring is unusable (already reported).
bool parse_ring(const json& coords, const FeatureContext& ctx, int ring_no, Ring& ring) {
  if (!coords.is_array()) ctx.fail("ring " + std::to_string(ring_no) + " is not an array");
  std::vector<Point2> pts;
  pts.reserve(coords.size());
  for (const json& pos : coords) pts.push_back(parse_position(pos, ctx));
  if (pts.size() >= 2 && pts.front() == pts.back()) {
    pts.pop_back();
  } else if (!pts.empty()) {
    ctx.problem("ring " + std::to_string(ring_no) + " is not closed; closing it");
  }
  ring.clear();
  for (const Point2& p : pts)
    if (ring.empty() || ring.back() != p) ring.push_back(p);
  while (ring.size() > 1 && ring.front() == ring.back()) ring.pop_back();
  if (ring.size() < 3 || signed_area(ring) == 0.0) {
    ctx.problem("ring " + std::to_string(ring_no) + " is degenerate; feature skipped");
    return false;
  }
  if (!ring_is_simple(ring)) {
    ctx.problem("ring " + std::to_string(ring_no) + " self-intersects; feature skipped");
    return false;
  }
  return true;
}

bool parse_polygon(const json& coords, const FeatureContext& ctx, Polygon& poly) {
  if (!coords.is_array() || coords.empty()) ctx.fail("polygon without rings");
  for (std::size_t r = 0; r < coords.size(); ++r) {
    Ring ring;
    if (!parse_ring(coords[r], ctx, static_cast<int>(r), ring)) return false;
    if (r == 0)
      poly.exterior = std::move(ring);
    else
      poly.holes.push_back(std::move(ring));
  }
  normalize_orientation(poly);
  return true;
}

bool parse_line(const json& coords, const FeatureContext& ctx, Polyline& line) {
  if (!coords.is_array()) ctx.fail("line coordinates are not an array");
  bool duplicate = false;
  for (const json& pos : coords) {
    const Point2 p = parse_position(pos, ctx);
    if (!line.vertices.empty() && line.vertices.back() == p) {
      duplicate = true;
      continue;
    }
    line.vertices.push_back(p);
  }
  if (duplicate) ctx.problem("consecutive duplicate vertices removed");
  if (line.vertices.size() < 2) {
    ctx.problem("line has fewer than two distinct vertices; feature skipped");
    return false;
  }
  return true;
}

Attributes parse_properties(const json& props) {
  Attributes attrs;
  if (!props.is_object()) return attrs;
  for (const auto& [key, value] : props.items()) {
    if (value.is_null()) continue;
    if (value.is_string())
      attrs[key] = value.get<std::string>();
    else if (value.is_boolean())
      attrs[key] = value.get<bool>() ? "true" : "false";
    else
      attrs[key] = value.dump();
  }
  return attrs;
}

void check_crs(const json& doc) {
  const auto crs = doc.find("crs");
  if (crs == doc.end() || !crs->is_object()) return;
  const auto props = crs->find("properties");
  if (props == crs->end() || !props->is_object()) return;
  const auto name = props->find("name");
  if (name == props->end() || !name->is_string()) return;
  const std::string n = name->get<std::string>();
  if (n.find("4326") != std::string::npos || n.find("CRS84") != std::string::npos ||
      n.find("4258") != std::string::npos)
    throw CrsError("layer declares geographic coordinates (" + n +
                   "); reproject to planar meters first");
}

}  // namespace

VectorLayer parse_vector_layer(std::string_view text, const LoadOptions& options, std::string name) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection")
    throw ParseError("not a GeoJSON FeatureCollection");
  check_crs(doc);
  const auto features = doc.find("features");
  if (features == doc.end() || !features->is_array())
    throw ParseError("FeatureCollection without a features array");

  VectorLayer layer;
  layer.name = std::move(name);
  for (std::size_t i = 0; i < features->size(); ++i) {
    const json& f = (*features)[i];
    const FeatureContext ctx{static_cast<int>(i), options, layer};
    if (!f.is_object() || f.value("type", "") != "Feature") ctx.fail("not a Feature object");
    const auto geom = f.find("geometry");
    if (geom == f.end() || geom->is_null()) {
      layer.warnings.push_back("feature " + std::to_string(i) + ": no geometry; skipped");
      continue;
    }
    if (!geom->is_object()) ctx.fail("geometry is not an object");
    const std::string type = geom->value("type", "");
    const json coords = geom->value("coordinates", json());
    const Attributes attrs = parse_properties(f.value("properties", json()));

    auto emit = [&](Geometry g) {
      layer.features.push_back(Feature{std::move(g), attrs, static_cast<int>(i)});
    };
    if (type == "Polygon") {
      Polygon poly;
      if (parse_polygon(coords, ctx, poly)) emit(std::move(poly));
    } else if (type == "MultiPolygon") {
      if (!coords.is_array()) ctx.fail("MultiPolygon coordinates are not an array");
      for (const json& part : coords) {
        Polygon poly;
        if (parse_polygon(part, ctx, poly)) emit(std::move(poly));
      }
    } else if (type == "LineString") {
      Polyline line;
      if (parse_line(coords, ctx, line)) emit(std::move(line));
    } else if (type == "MultiLineString") {
      if (!coords.is_array()) ctx.fail("MultiLineString coordinates are not an array");
      for (const json& part : coords) {
        Polyline line;
        if (parse_line(part, ctx, line)) emit(std::move(line));
      }
    } else if (type == "Point" || type == "MultiPoint" || type == "GeometryCollection") {
      layer.warnings.push_back("feature " + std::to_string(i) + ": unsupported geometry " + type +
                               "; skipped");
    } else {
      ctx.fail("unknown geometry type '" + type + "'");
    }
  }
  return layer;
}

VectorLayer load_vector_layer(const std::filesystem::path& path, const LoadOptions& options,
                              std::string name) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (name.empty()) name = path.stem().string();
  try {
    return parse_vector_layer(ss.str(), options, std::move(name));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Reclassification

namespace {

bool matches_pattern(std::string_view pattern, std::string_view value) {
  if (pattern == "*") return true;
  std::size_t start = 0;
  while (start <= pattern.size()) {
    const std::size_t bar = pattern.find('|', start);
    const std::string_view alt =
        pattern.substr(start, bar == std::string_view::npos ? std::string_view::npos : bar - start);
    if (alt == value) return true;
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  return false;
}

}  // namespace

SurfaceClass ClassMapping::classify(std::string_view layer, const Attributes& attrs) const {
  for (const ClassRule& rule : rules) {
    if (rule.layer != "*" && rule.layer != layer) continue;
    if (rule.key.empty() || rule.key == "*") return rule.cls;
    const auto it = attrs.find(rule.key);
    if (it == attrs.end()) continue;
    if (matches_pattern(rule.value, it->second)) return rule.cls;
  }
  return SurfaceClass::Other;
}

ClassMapping ClassMapping::defaults() {
  using C = SurfaceClass;
  ClassMapping m;
  m.rules = {
      {"buildings", "*", "*", C::Building},
      {"*", "building", "*", C::Building},
      {"water", "*", "*", C::Water},
      {"*", "natural", "water|bay|wetland", C::Water},
      {"*", "waterway", "riverbank|dock|canal|river", C::Water},
      {"*", "landuse", "reservoir|basin", C::Water},
      // City squares share the industrial hard/soft split.
      {"*", "place", "square", C::Industrial},
      {"*", "area:highway", "*", C::Industrial},
      {"*", "landuse",
       "industrial|railway|garages|construction|brownfield|port|depot|commercial|retail",
       C::Industrial},
      {"*", "man_made", "works|wastewater_plant", C::Industrial},
      {"roads", "*", "*", C::Road},
      {"*", "highway", "*", C::Road},
      // Every vegetated area is treated as tree cover.
      {"*", "landuse",
       "forest|grass|meadow|recreation_ground|village_green|allotments|orchard|cemetery|"
       "greenfield|plant_nursery",
       C::Green},
      {"*", "leisure", "park|garden|nature_reserve|golf_course|common", C::Green},
      {"*", "natural", "wood|scrub|grassland|heath|tree_row", C::Green},
      {"green", "*", "*", C::Green},
  };
  return m;
}

std::vector<ClassifiedFeature> reclassify(std::span<const VectorLayer> layers,
                                          const ClassMapping& mapping) {
  std::vector<ClassifiedFeature> out;
  for (const VectorLayer& layer : layers)
    for (const Feature& f : layer.features)
      out.push_back(ClassifiedFeature{&f, layer.name, mapping.classify(layer.name, f.attributes)});
  return out;
}

namespace {

std::optional<double> leading_number(const std::string& s) {
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(*begin))) ++begin;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr == begin || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace

double building_height(const Attributes& attrs, const BuildingHeightRule& rule) {
  if (const auto it = attrs.find(rule.height_key); it != attrs.end())
    if (const auto h = leading_number(it->second); h && *h > 0.0) return *h;
  if (const auto it = attrs.find(rule.levels_key); it != attrs.end())
    if (const auto n = leading_number(it->second); n && *n > 0.0) return *n * rule.floor_height;
  return rule.default_height;
}

std::vector<BuildingFeature> extract_buildings(std::span<const ClassifiedFeature> features,
                                               const BuildingHeightRule& rule) {
  std::vector<BuildingFeature> out;
  for (const ClassifiedFeature& cf : features) {
    if (cf.cls != SurfaceClass::Building || !cf.feature->is_polygon()) continue;
    out.push_back(BuildingFeature{cf.feature->polygon(), building_height(cf.feature->attributes, rule)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// ESRI ASCII grid

HeightRaster parse_ascii_grid(std::istream& in) {
  std::map<std::string, double> header;
  std::string token;
  std::vector<double> values;
  static const std::array<std::string, 8> known = {"ncols",     "nrows",     "xllcorner",
                                                    "yllcorner", "cellsize",  "nodata_value",
                                                    "xllcenter", "yllcenter"};
  while (in >> token) {
    const std::string key = lower(token);
    if (std::find(known.begin(), known.end(), key) == known.end()) break;
    double v;
    if (!(in >> v)) throw ParseError("ASCII grid: bad value for header key " + token);
    header[key] = v;
    token.clear();
  }
  for (const char* required : {"ncols", "nrows", "cellsize"})
    if (!header.count(required)) throw ParseError(std::string("ASCII grid: missing ") + required);

  GridGeometry g;
  g.ncols = static_cast<int>(header["ncols"]);
  g.nrows = static_cast<int>(header["nrows"]);
  g.cell_size = header["cellsize"];
  if (g.ncols <= 0 || g.nrows <= 0 || !(g.cell_size > 0.0))
    throw ParseError("ASCII grid: non-positive dimensions or cell size");
  if (header.count("xllcorner") && header.count("yllcorner")) {
    g.origin = Point2(header["xllcorner"], header["yllcorner"]);
  } else if (header.count("xllcenter") && header.count("yllcenter")) {
    g.origin = Point2(header["xllcenter"] - 0.5 * g.cell_size, header["yllcenter"] - 0.5 * g.cell_size);
  } else {
    throw ParseError("ASCII grid: missing lower-left corner");
  }
  const double nodata = header.count("nodata_value") ? header["nodata_value"] : -9999.0;

  auto push = [&](const std::string& t) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size())
      throw ParseError("ASCII grid: bad value '" + t + "'");
    if (!std::isfinite(v)) throw ParseError("ASCII grid: non-finite value");
    values.push_back(v);
  };
  if (!token.empty()) push(token);
  while (in >> token) push(token);

  const std::size_t expected = static_cast<std::size_t>(g.ncols) * g.nrows;
  if (values.size() != expected)
    throw HeaderMismatch("ASCII grid: header promises " + std::to_string(expected) + " values, found " +
                         std::to_string(values.size()));
  HeightRaster r(g, 0.0, nodata);
  std::copy(values.begin(), values.end(), r.values.data());
  return r;
}

namespace {

json ring_json(const Ring& ring) {
  json out = json::array();
  for (const Point2& p : ring) out.push_back({p.x(), p.y()});
  if (!ring.empty()) out.push_back({ring.front().x(), ring.front().y()});
  return out;
}

}  // namespace

void write_vector_layer(const VectorLayer& layer, const std::filesystem::path& path) {
  json features = json::array();
  for (const Feature& f : layer.features) {
    json geom;
    if (f.is_polygon()) {
      json rings = json::array({ring_json(f.polygon().exterior)});
      for (const Ring& h : f.polygon().holes) rings.push_back(ring_json(h));
      geom = {{"type", "Polygon"}, {"coordinates", rings}};
    } else {
      json coords = json::array();
      for (const Point2& p : f.polyline().vertices) coords.push_back({p.x(), p.y()});
      geom = {{"type", "LineString"}, {"coordinates", coords}};
    }
    json props = json::object();
    for (const auto& [k, v] : f.attributes) props[k] = v;
    features.push_back({{"type", "Feature"}, {"properties", props}, {"geometry", geom}});
  }
  const json doc = {{"type", "FeatureCollection"}, {"name", layer.name}, {"features", features}};
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << doc.dump() << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

HeightRaster load_dem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return parse_ascii_grid(in);
  } catch (const HeaderMismatch& e) {
    throw HeaderMismatch(path.string() + ": " + e.what());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

namespace {

std::string shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

void write_ascii_grid(const HeightRaster& r, std::ostream& out) {
  const GridGeometry& g = r.geometry;
  out << "ncols " << g.ncols << '\n'
      << "nrows " << g.nrows << '\n'
      << "xllcorner " << shortest(g.origin.x()) << '\n'
      << "yllcorner " << shortest(g.origin.y()) << '\n'
      << "cellsize " << shortest(g.cell_size) << '\n'
      << "NODATA_value " << shortest(r.nodata.value_or(-9999.0)) << '\n';
  for (int row = 0; row < g.nrows; ++row) {
    for (int col = 0; col < g.ncols; ++col) {
      if (col) out << ' ';
      out << shortest(r(row, col));
    }
    out << '\n';
  }
}

void write_ascii_grid(const HeightRaster& r, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_ascii_grid(r, out);
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace ucp
