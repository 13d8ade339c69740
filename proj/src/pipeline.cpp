#include "ucp/pipeline.hpp"

#include "ucp/direction.hpp"
#include "ucp/errors.hpp"
#include "ucp/geometry.hpp"
#include "ucp/parallel.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>

namespace ucp {

using nlohmann::json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Config

namespace {

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

template <class T>
T get(const json& obj, const char* key, T fallback, const char* section) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config: bad value for ") + section + key);
  }
}

Ring ring_from_json(const json& j, const char* what) {
  Ring r;
  if (!j.is_array()) throw ConfigError(std::string("config: ") + what + " must be a list of [x, y]");
  for (const json& p : j) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
      throw ConfigError(std::string("config: ") + what + " must be a list of [x, y]");
    r.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  if (r.size() > 1 && r.front() == r.back()) r.pop_back();
  return r;
}

const std::set<std::string> kTopLevelKeys = {
    "layers", "dem", "class_mapping", "resolutions", "aoi", "mask", "grid_snap", "svf", "landcover",
    "heights", "canyon", "projection", "direction", "output_dir", "outputs", "workers", "strict"};

}  // namespace

RunConfig config_from_json(const json& doc, const fs::path& base) {
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  RunConfig c;
  const auto layers = doc.find("layers");
  if (layers != doc.end()) {
    if (!layers->is_array()) throw ConfigError("config: layers must be a list");
    for (const json& l : *layers) {
      if (!l.is_object() || !l.contains("path")) throw ConfigError("config: every layer needs a path");
      LayerInput in;
      in.path = resolve(base, get<std::string>(l, "path", "", "layers."));
      in.name = get<std::string>(l, "name", in.path.stem().string(), "layers.");
      c.layers.push_back(in);
    }
  }
  if (const auto dem = doc.find("dem"); dem != doc.end() && !dem->is_null())
    c.dem = resolve(base, get<std::string>(doc, "dem", "", ""));

  if (const auto cm = doc.find("class_mapping"); cm != doc.end()) {
    ClassMapping m;
    for (const json& r : cm->value("rules", json::array())) {
      ClassRule rule;
      rule.layer = get<std::string>(r, "layer", "*", "class_mapping.rules.");
      rule.key = get<std::string>(r, "key", "", "class_mapping.rules.");
      rule.value = get<std::string>(r, "value", "*", "class_mapping.rules.");
      rule.cls = parse_surface_class(get<std::string>(r, "class", "other", "class_mapping.rules."));
      m.rules.push_back(rule);
    }
    if (get<bool>(*cm, "use_defaults", true, "class_mapping.")) {
      const ClassMapping d = ClassMapping::defaults();
      m.rules.insert(m.rules.end(), d.rules.begin(), d.rules.end());
    }
    c.mapping = m;
  }

  c.resolutions = get<std::vector<double>>(doc, "resolutions", c.resolutions, "");
  if (const auto aoi = doc.find("aoi"); aoi != doc.end() && !aoi->is_null()) {
    const auto v = get<std::vector<double>>(doc, "aoi", {}, "");
    if (v.size() != 4) throw ConfigError("config: aoi must be [xmin, ymin, xmax, ymax]");
    c.aoi = make_box(v[0], v[1], v[2], v[3]);
  }
  if (const auto mask = doc.find("mask"); mask != doc.end() && !mask->is_null()) {
    Polygon p{ring_from_json(*mask, "mask"), {}};
    normalize_orientation(p);
    c.mask = p;
  }
  c.grid_snap = get<double>(doc, "grid_snap", c.grid_snap, "");

  if (const auto s = doc.find("svf"); s != doc.end()) {
    c.svf.n_sectors = get<int>(*s, "n_sectors", c.svf.n_sectors, "svf.");
    c.svf.radius = get<double>(*s, "radius", c.svf.radius, "svf.");
    c.svf.svf_res = get<double>(*s, "res", c.svf.svf_res, "svf.");
  }
  if (const auto l = doc.find("landcover"); l != doc.end()) {
    c.landcover.landcover_res = get<double>(*l, "res", c.landcover.landcover_res, "landcover.");
    if (const auto pr = l->find("priority"); pr != l->end()) {
      c.landcover.priority.clear();
      for (const json& name : *pr) c.landcover.priority.push_back(parse_surface_class(name.get<std::string>()));
    }
    if (const auto rw = l->find("road_widths"); rw != l->end()) {
      RoadWidthTable t;
      t.key = get<std::string>(*rw, "key", t.key, "landcover.road_widths.");
      t.default_half_width = get<double>(*rw, "default_half_width", t.default_half_width, "landcover.road_widths.");
      if (const auto rules = rw->find("rules"); rules != rw->end()) {
        t.rules.clear();
        for (const json& r : *rules)
          t.rules.push_back({get<std::string>(r, "values", "", "landcover.road_widths.rules."),
                             get<double>(r, "half_width", 5.0, "landcover.road_widths.rules.")});
      }
      c.landcover.roads = t;
    }
  }
  if (const auto h = doc.find("heights"); h != doc.end()) {
    c.heights.height_key = get<std::string>(*h, "height_key", c.heights.height_key, "heights.");
    c.heights.levels_key = get<std::string>(*h, "levels_key", c.heights.levels_key, "heights.");
    c.heights.floor_height = get<double>(*h, "floor_height", c.heights.floor_height, "heights.");
    c.heights.default_height = get<double>(*h, "default_height", c.heights.default_height, "heights.");
  }
  if (const auto cy = doc.find("canyon"); cy != doc.end()) {
    const std::string adj = get<std::string>(*cy, "role_adjacency", "vertex", "canyon.");
    if (adj == "vertex")
      c.canyon.adjacency = RoleAdjacency::SharedVertex;
    else if (adj == "edge")
      c.canyon.adjacency = RoleAdjacency::SharedEdge;
    else
      throw ConfigError("config: canyon.role_adjacency must be \"vertex\" or \"edge\"");
    c.canyon.cdt.snap = get<double>(*cy, "snap", c.canyon.cdt.snap, "canyon.");
  }
  if (const auto p = doc.find("projection"); p != doc.end()) {
    c.projection.a = get<double>(*p, "a", c.projection.a, "projection.");
    c.projection.inv_f = get<double>(*p, "inv_f", c.projection.inv_f, "projection.");
    c.projection.central_meridian = get<double>(*p, "central_meridian", c.projection.central_meridian, "projection.");
    c.projection.scale = get<double>(*p, "scale", c.projection.scale, "projection.");
    c.projection.false_easting = get<double>(*p, "false_easting", c.projection.false_easting, "projection.");
    c.projection.false_northing = get<double>(*p, "false_northing", c.projection.false_northing, "projection.");
  }
  if (const auto d = doc.find("direction"); d != doc.end())
    c.direction_highways = get<std::vector<std::string>>(*d, "highways", {}, "direction.");
  c.output_dir = resolve(base, get<std::string>(doc, "output_dir", "out", ""));
  if (const auto o = doc.find("outputs"); o != doc.end()) {
    c.outputs.geojson_grid = get<bool>(*o, "geojson_grid", false, "outputs.");
    c.outputs.svf_raster = get<bool>(*o, "svf_raster", false, "outputs.");
    c.outputs.triangles = get<bool>(*o, "triangles", false, "outputs.");
    c.outputs.precision = get<int>(*o, "precision", 6, "outputs.");
  }
  c.workers = get<int>(doc, "workers", 0, "");
  c.strict = get<bool>(doc, "strict", false, "");
  return c;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  RunConfig c = config_from_json(doc, fs::absolute(path).parent_path());
  std::vector<std::string> unknown;
  for (const auto& [key, _] : doc.items())
    if (!kTopLevelKeys.count(key)) unknown.push_back(key);
  if (!unknown.empty()) {
    std::string list;
    for (const auto& k : unknown) list += (list.empty() ? "" : ", ") + k;
    throw ConfigError("config: unknown keys: " + list);
  }
  return c;
}

json config_to_json(const RunConfig& c) {
  json doc;
  doc["layers"] = json::array();
  for (const LayerInput& l : c.layers) doc["layers"].push_back({{"name", l.name}, {"path", l.path.generic_string()}});
  doc["dem"] = c.dem ? json(c.dem->generic_string()) : json(nullptr);
  json rules = json::array();
  for (const ClassRule& r : c.mapping.rules)
    rules.push_back({{"layer", r.layer}, {"key", r.key}, {"value", r.value}, {"class", std::string(to_string(r.cls))}});
  doc["class_mapping"] = {{"use_defaults", false}, {"rules", rules}};
  doc["resolutions"] = c.resolutions;
  doc["aoi"] = c.aoi ? json({c.aoi->min().x(), c.aoi->min().y(), c.aoi->max().x(), c.aoi->max().y()}) : json(nullptr);
  if (c.mask) {
    json ring = json::array();
    for (const Point2& p : c.mask->exterior) ring.push_back({p.x(), p.y()});
    doc["mask"] = ring;
  } else {
    doc["mask"] = nullptr;
  }
  doc["grid_snap"] = c.grid_snap;
  doc["svf"] = {{"n_sectors", c.svf.n_sectors}, {"radius", c.svf.radius}, {"res", c.svf.svf_res}};
  json prio = json::array();
  for (SurfaceClass s : c.landcover.priority) prio.push_back(std::string(to_string(s)));
  json widths = json::array();
  for (const auto& r : c.landcover.roads.rules) widths.push_back({{"values", r.values}, {"half_width", r.half_width}});
  doc["landcover"] = {{"res", c.landcover.landcover_res},
                      {"priority", prio},
                      {"road_widths",
                       {{"key", c.landcover.roads.key},
                        {"rules", widths},
                        {"default_half_width", c.landcover.roads.default_half_width}}}};
  doc["heights"] = {{"height_key", c.heights.height_key},
                    {"levels_key", c.heights.levels_key},
                    {"floor_height", c.heights.floor_height},
                    {"default_height", c.heights.default_height}};
  doc["canyon"] = {{"role_adjacency", c.canyon.adjacency == RoleAdjacency::SharedVertex ? "vertex" : "edge"},
                   {"snap", c.canyon.cdt.snap}};
  doc["projection"] = {{"a", c.projection.a},
                       {"inv_f", c.projection.inv_f},
                       {"central_meridian", c.projection.central_meridian},
                       {"scale", c.projection.scale},
                       {"false_easting", c.projection.false_easting},
                       {"false_northing", c.projection.false_northing}};
  doc["direction"] = {{"highways", c.direction_highways}};
  doc["output_dir"] = c.output_dir.generic_string();
  doc["outputs"] = {{"geojson_grid", c.outputs.geojson_grid},
                    {"svf_raster", c.outputs.svf_raster},
                    {"triangles", c.outputs.triangles},
                    {"precision", c.outputs.precision}};
  doc["workers"] = c.workers;
  doc["strict"] = c.strict;
  return doc;
}

namespace {

void check_static(const RunConfig& c) {
  if (c.resolutions.empty()) throw ConfigError("config: resolutions must not be empty");
  for (double r : c.resolutions)
    if (!(r > 0.0)) throw ConfigError("config: resolutions must be positive");
  if (!(c.grid_snap > 0.0)) throw ConfigError("config: grid_snap must be positive");
  if (c.aoi && (c.aoi->isEmpty() || c.aoi->sizes().minCoeff() <= 0.0))
    throw ConfigError("config: aoi must have positive extent");
  validate(c.svf);
  if (!(c.landcover.landcover_res > 0.0)) throw ConfigError("config: landcover.res must be positive");
  for (double r : c.resolutions) {
    const double k = r / c.landcover.landcover_res;
    if (std::abs(k - std::round(k)) > 1e-9 * k)
      throw ConfigError("config: landcover.res must divide every resolution");
  }
  validate(c.projection);
  if (c.outputs.precision < 1 || c.outputs.precision > 17)
    throw ConfigError("config: outputs.precision must be in 1..17");
  if (c.workers < 0) throw ConfigError("config: workers must be >= 0");
  if (c.mask && c.mask->exterior.size() < 3) throw ConfigError("config: mask needs at least 3 vertices");
  std::set<double> seen;
  for (double r : c.resolutions)
    if (!seen.insert(r).second) throw ConfigError("config: duplicate resolution");
}

}  // namespace

std::vector<std::string> validate(const RunConfig& c) {
  check_static(c);
  std::vector<std::string> warnings;
  for (double r : c.resolutions)
    if (std::fmod(c.grid_snap, r) != 0.0)
      warnings.push_back("resolution " + format_value(r) + " m does not divide grid_snap; grids will not nest");
  for (const LayerInput& l : c.layers) {
    if (!fs::exists(l.path)) throw ConfigError("layer '" + l.name + "': file not found: " + l.path.string());
    const VectorLayer layer = load_vector_layer(l.path, LoadOptions{c.strict}, l.name);
    for (const std::string& w : layer.warnings) warnings.push_back(l.name + ": " + w);
  }
  if (c.dem) {
    if (!fs::exists(*c.dem)) throw ConfigError("dem: file not found: " + c.dem->string());
    const HeightRaster dem = load_dem(*c.dem);
    if (fully_void(dem)) warnings.push_back("dem: every cell is NODATA");
  }
  if (c.layers.empty()) warnings.push_back("no vector layers configured");
  return warnings;
}

// ---------------------------------------------------------------------------
// Run

std::string csv_name(double resolution) { return "params_" + format_value(resolution, 15) + "m.csv"; }

namespace {

using Clock = std::chrono::steady_clock;

template <class F>
void stage(const char* name, RunReport& report, std::ostream* log, F&& body) {
  const auto t0 = Clock::now();
  if (log) *log << "[" << name << "] start\n";
  try {
    body();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(std::string("stage '") + name + "': " + e.what());
  }
  const double s = std::chrono::duration<double>(Clock::now() - t0).count();
  report.stage_seconds.emplace_back(name, s);
  if (log) *log << "[" << name << "] done in " << s << " s\n";
}

bool highway_selected(const RunConfig& c, const Feature& f) {
  if (c.direction_highways.empty()) return true;
  const auto it = f.attributes.find(c.landcover.roads.key);
  if (it == f.attributes.end()) return false;
  return std::find(c.direction_highways.begin(), c.direction_highways.end(), it->second) !=
         c.direction_highways.end();
}

void set_maybe(CellRecord& r, Field f, const Maybe& v) { r[f] = v; }

}  // namespace

Computed compute(const RunConfig& c, RunReport& report, std::ostream* log) {
  stage("config", report, log, [&] { check_static(c); });

  std::vector<VectorLayer> layers;
  std::vector<ClassifiedFeature> classified;
  std::vector<BuildingFeature> buildings;
  std::vector<Polygon> green;
  std::vector<Polyline> roads, street_lines;
  std::optional<HeightRaster> dem;
  stage("ingest", report, log, [&] {
    layers.resize(c.layers.size());
    for (std::size_t i = 0; i < c.layers.size(); ++i) {
      layers[i] = load_vector_layer(c.layers[i].path, LoadOptions{c.strict}, c.layers[i].name);
      for (const std::string& w : layers[i].warnings) report.warnings.push_back(layers[i].name + ": " + w);
    }
    if (c.dem) dem = load_dem(*c.dem);
  });
  stage("reclassify", report, log, [&] {
    classified = reclassify(layers, c.mapping);
    buildings = extract_buildings(classified, c.heights);
    for (const ClassifiedFeature& cf : classified) {
      if (cf.cls == SurfaceClass::Green && cf.feature->is_polygon()) green.push_back(cf.feature->polygon());
      if (cf.cls == SurfaceClass::Road && !cf.feature->is_polygon()) {
        roads.push_back(cf.feature->polyline());
        if (highway_selected(c, *cf.feature)) street_lines.push_back(cf.feature->polyline());
      }
    }
    report.features = classified.size();
    report.buildings = buildings.size();
  });

  Computed out;
  Box2 aoi;
  stage("grid", report, log, [&] {
    if (c.aoi) {
      aoi = *c.aoi;
    } else {
      for (const ClassifiedFeature& cf : classified)
        aoi.extend(cf.feature->is_polygon() ? bounds(cf.feature->polygon()) : bounds(cf.feature->polyline()));
      if (aoi.isEmpty() && dem) aoi = dem->geometry.extent();
      if (aoi.isEmpty() || aoi.sizes().minCoeff() <= 0.0)
        throw ConfigError("no aoi configured and none can be inferred from the inputs");
    }
    for (double r : c.resolutions) out.grids.push_back(make_grid(aoi, r, c.grid_snap));
  });

  LandcoverIndex landcover;
  stage("landcover-index", report, log, [&] {
    const Point2 pixel_origin(std::floor(aoi.min().x() / c.grid_snap) * c.grid_snap,
                              std::floor(aoi.min().y() / c.grid_snap) * c.grid_snap);
    landcover = LandcoverIndex(classified, c.landcover, pixel_origin);
  });

  SurfaceModel surface;
  stage("svf", report, log, [&] {
    Box2 extent;
    for (const GridSpec& g : out.grids) extent.extend(g.extent());
    GridGeometry sg;
    sg.origin = extent.min();
    sg.cell_size = c.svf.svf_res;
    sg.ncols = static_cast<int>(std::ceil(extent.sizes().x() / sg.cell_size - 1e-9));
    sg.nrows = static_cast<int>(std::ceil(extent.sizes().y() / sg.cell_size - 1e-9));
    HeightRaster terrain = dem ? prepare_terrain(*dem, sg) : HeightRaster(sg, 0.0, -9999.0);
    surface = make_surface_model(std::move(terrain), buildings);
    out.svf = svf_field(surface, c.svf, c.workers);
  });

  stage("canyon", report, log, [&] {
    out.canyon = build_canyon_model(buildings, green, roads, c.canyon);
    report.triangles = out.canyon->triangles.size();
  });

  for (std::size_t gi = 0; gi < out.grids.size(); ++gi) {
    const GridSpec& grid = out.grids[gi];
    const std::string res = format_value(grid.resolution, 15);
    const auto res_start = Clock::now();
    std::vector<std::vector<StreetSegment>> by_cell(grid.cell_count());
    stage(("direction-split " + res + " m").c_str(), report, log, [&] {
      for (StreetSegment& s : split_segments_by_grid(street_lines, grid)) by_cell[s.cell].push_back(s);
    });

    std::vector<CellRecord> records(grid.cell_count());
    const std::string name = "cells " + res + " m";
    stage(name.c_str(), report, log, [&] {
      parallel_for(records.size(), c.workers, [&](std::size_t id) {
        try {
          const Box2 rect = grid.cell_rect(static_cast<int>(id));
          CellRecord& r = records[id];
          r[Field::OBJECTID] = static_cast<double>(id);

          const ClassAreas la = classify_cell(rect, landcover);
          for (int k = 0; k < 6; ++k) {
            r.values[1 + 2 * k] = la.area[k];
            r.values[2 + 2 * k] = la.ratio[k];
          }

          const SvfCellStats sv = svf_cell_stats(rect, out.svf, surface.building_mask);
          set_maybe(r, Field::SVF_MEAN, sv.mean);
          set_maybe(r, Field::SVF_NOBLD_MEAN, sv.nobld_mean);

          const CanyonCellStats cs = canyon_cell_stats(*out.canyon, rect);
          set_maybe(r, Field::BLD_MEAN_HEIGHT, cs.bld_mean_height);
          set_maybe(r, Field::MDC_WIDTH, cs.mdc_width);
          r[Field::MDC_AREA] = cs.mdc_area;
          set_maybe(r, Field::MDC_RATIO, cs.mdc_ratio);
          set_maybe(r, Field::MUC_WIDTH, cs.muc_width);
          r[Field::MUC_AREA] = cs.muc_area;
          set_maybe(r, Field::MUC_RATIO, cs.muc_ratio);
          set_maybe(r, Field::BLDC_RATIO, cs.bldc_ratio);
          set_maybe(r, Field::BLDUC_RATIO, cs.blduc_ratio);
          set_maybe(r, Field::BLUC_RATIO, cs.bluc_ratio);
          set_maybe(r, Field::FRONT_INDEX, cs.front_index);

          const auto dirs = direction_params(by_cell[id]);
          for (int k = 0; k < 3; ++k) {
            const int base = static_cast<int>(Field::DIR1_6) + 3 * k;
            r.values[base] = dirs[k].dir1;
            r.values[base + 1] = dirs[k].dir2;
            r.values[base + 2] = dirs[k].ratio;
          }

          const CellMeta meta = cell_meta(rect, dem ? &*dem : nullptr, c.projection);
          r[Field::X] = meta.x;
          r[Field::Y] = meta.y;
          r[Field::LAT] = meta.lat;
          r[Field::LONG] = meta.lon;
          set_maybe(r, Field::Z_MEAN, meta.z_mean);
          r[Field::SHAPE_Length] = meta.shape_length;
          r[Field::SHAPE_Area] = meta.shape_area;
        } catch (const std::exception& e) {
          throw StageError("stage '" + name + "', cell " + std::to_string(id) + ": " + e.what());
        }
      });
    });

    ResolutionReport rr;
    rr.resolution = grid.resolution;
    rr.cells = grid.cell_count();
    rr.seconds = std::chrono::duration<double>(Clock::now() - res_start).count();
    std::vector<ClassAreas> masked;
    for (int id = 0; id < grid.cell_count(); ++id) {
      if (c.mask && !point_in_polygon(grid.cell_center(id), *c.mask)) continue;
      ClassAreas a;
      for (int k = 0; k < 6; ++k) a.ratio[k] = *records[id].values[2 + 2 * k];
      masked.push_back(a);
    }
    rr.mean_cells = static_cast<int>(masked.size());
    if (masked.empty())
      report.warnings.push_back("resolution " + res + " m: no cells inside the mask; city means omitted");
    else
      rr.city_means = aggregate_city_means(masked);
    report.resolutions.push_back(rr);
    out.records.push_back(std::move(records));
  }
  return out;
}

namespace {

void write_json(const json& doc, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

RunReport run(const RunConfig& c, std::ostream* log) {
  RunReport report;
  const auto t0 = Clock::now();
  Computed comp = compute(c, report, log);

  stage("write", report, log, [&] {
    fs::create_directories(c.output_dir);
    for (std::size_t i = 0; i < comp.grids.size(); ++i) {
      const fs::path csv = c.output_dir / csv_name(comp.grids[i].resolution);
      write_csv(comp.records[i], csv, c.outputs.precision);
      report.resolutions[i].csv = csv;
      if (c.outputs.geojson_grid)
        write_geojson_grid(comp.records[i], comp.grids[i],
                           c.output_dir / ("grid_" + format_value(comp.grids[i].resolution, 15) + "m.geojson"));
    }
    if (c.outputs.svf_raster) write_ascii_grid(comp.svf, c.output_dir / "svf.asc");
    if (c.outputs.triangles && comp.canyon) write_canyon_geojson(*comp.canyon, c.output_dir / "canyon.geojson");

    json legend = json::object();
    json classes = json::array();
    for (SurfaceClass s : kSurfaceClasses) classes.push_back(std::string(to_string(s)));
    legend["classes"] = classes;
    legend["industrial"] = {{"natural_fraction", 0.5}, {"paved_fraction", 0.5}};
    legend["green"] = "tree cover";
    legend["undefined_value"] = "empty field";
    write_json(legend, c.output_dir / "legend.json");

    json rep = json::object();
    rep["features"] = report.features;
    rep["buildings"] = report.buildings;
    rep["triangles"] = report.triangles;
    rep["warnings"] = report.warnings;
    json res = json::array();
    for (const ResolutionReport& r : report.resolutions) {
      json means = json::object();
      if (r.mean_cells > 0)
        for (SurfaceClass s : kSurfaceClasses) means[std::string(to_string(s))] = r.city_means[static_cast<int>(s)];
      res.push_back({{"resolution", r.resolution},
                     {"cells", r.cells},
                     {"csv", r.csv.filename().string()},
                     {"mean_cells", r.mean_cells},
                     {"seconds", r.seconds},
                     {"city_mean_ratios", means}});
    }
    rep["resolutions"] = res;
    json stages = json::object();
    for (const auto& [name, s] : report.stage_seconds) stages[name] = s;
    rep["stage_seconds"] = stages;
    rep["total_seconds"] = std::chrono::duration<double>(Clock::now() - t0).count();
    write_json(rep, c.output_dir / "run_report.json");
  });
  return report;
}

}  // namespace ucp
