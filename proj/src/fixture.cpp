#include "ucp/fixture.hpp"

#include "ucp/errors.hpp"
#include "ucp/geometry.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

namespace ucp {

using nlohmann::json;
namespace fs = std::filesystem;

FixtureVariant parse_fixture_variant(std::string_view name) {
  if (name == "town") return FixtureVariant::Town;
  if (name == "park") return FixtureVariant::Park;
  if (name == "courtyard") return FixtureVariant::Courtyard;
  if (name == "dense") return FixtureVariant::Dense;
  if (name == "parallel") return FixtureVariant::Parallel;
  throw ConfigError("unknown fixture variant '" + std::string(name) + "'");
}

std::string_view to_string(FixtureVariant v) {
  switch (v) {
    case FixtureVariant::Town: return "town";
    case FixtureVariant::Park: return "park";
    case FixtureVariant::Courtyard: return "courtyard";
    case FixtureVariant::Dense: return "dense";
    case FixtureVariant::Parallel: return "parallel";
  }
  return "town";
}

FixtureSpec fixture_preset(FixtureVariant v) {
  FixtureSpec s;
  s.variant = v;
  if (v == FixtureVariant::Dense) {
    s.block = 120.0;
    s.street = 60.0;
    s.min_height = 11.0;
    s.max_height = 23.0;
    s.park_fraction = 0.0;
    s.river = false;
  }
  return s;
}

Box2 Fixture::extent() const {
  return Box2(spec.origin, spec.origin + Point2(spec.extent, spec.extent));
}

namespace {

// std distributions are implementation-defined; draw bits directly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  bool chance(double p) { return uniform() < p; }
  int below(int n) { return static_cast<int>(uniform() * n); }

 private:
  std::mt19937_64 gen_;
};

std::string number(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 1);
  return std::string(buf, ptr);
}

Polygon rect(double x0, double y0, double x1, double y1) {
  return Polygon{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}, {}};
}

// Rectangle of size w x h rotated by `angle` about `c`, shrunk so it stays
// inside its axis-aligned w x h box.
Polygon rotated_rect(const Point2& c, double w, double h, double angle) {
  const double cs = std::cos(angle), sn = std::abs(std::sin(angle));
  const double k = std::min(w / (w * cs + h * sn), h / (w * sn + h * cs));
  const double hw = 0.5 * w * k, hh = 0.5 * h * k;
  Polygon p;
  const double ca = std::cos(angle), sa = std::sin(angle);
  for (const auto& [u, v] : {std::pair{-hw, -hh}, {hw, -hh}, {hw, hh}, {-hw, hh}})
    p.exterior.emplace_back(c.x() + u * ca - v * sa, c.y() + u * sa + v * ca);
  return p;
}

Polyline line(const Point2& a, const Point2& b) { return Polyline{{a, b}}; }

struct Builder {
  Fixture f;
  Rng rng;

  Builder(std::uint64_t seed, const FixtureSpec& spec) : rng(seed) {
    f.spec = spec;
    f.buildings.name = "buildings";
    f.roads.name = "roads";
    f.landuse.name = "landuse";
  }

  Point2 at(double x, double y) const { return f.spec.origin + Point2(x, y); }

  Polygon local(Polygon p) const {
    for (Point2& q : p.exterior) q += f.spec.origin;
    for (Ring& h : p.holes)
      for (Point2& q : h) q += f.spec.origin;
    normalize_orientation(p);
    return p;
  }

  void building(const Polygon& p, double height) {
    Attributes a{{"building", "yes"}};
    // Every fifth building carries levels instead of a height.
    if (f.buildings.features.size() % 5 == 4) {
      a["building:levels"] = std::to_string(std::max(1, static_cast<int>(std::lround(height / 3.0))));
    } else {
      a["height"] = number(height);
    }
    f.buildings.features.push_back({local(p), a, static_cast<int>(f.buildings.features.size())});
  }

  void road(const Point2& a, const Point2& b, const std::string& kind) {
    f.roads.features.push_back({line(at(a.x(), a.y()), at(b.x(), b.y())), {{"highway", kind}},
                                static_cast<int>(f.roads.features.size())});
  }

  void area(const Polygon& p, const std::string& key, const std::string& value) {
    f.landuse.features.push_back({local(p), {{key, value}}, static_cast<int>(f.landuse.features.size())});
  }

  double height() { return rng.uniform(f.spec.min_height, f.spec.max_height); }

  // Street centre lines on multiples of the block pitch across the extent.
  std::vector<double> street_grid(const std::string& kind) {
    const FixtureSpec& s = f.spec;
    const double pitch = s.block + s.street;
    std::vector<double> lines;
    for (double t = 0.0; t <= s.extent + 1e-9; t += pitch) lines.push_back(t);
    for (double t : lines) {
      road({t, 0.0}, {t, s.extent}, kind);
      road({0.0, t}, {s.extent, t}, kind);
    }
    return lines;
  }

  void town() {
    const FixtureSpec& s = f.spec;
    const double pitch = s.block + s.street;
    const std::vector<double> lines = street_grid("secondary");
    const int nblocks = static_cast<int>(lines.size()) - 1;
    int river_row = -1;
    if (s.river && nblocks >= 3) {
      river_row = 1 + rng.below(nblocks - 2);
      const double y0 = river_row * pitch + s.street / 2, y1 = y0 + s.block;
      area(rect(0.0, y0, s.extent, y1), "natural", "water");
    }
    const int industrial = rng.below(std::max(1, nblocks * nblocks));
    for (int j = 0; j < nblocks; ++j) {
      for (int i = 0; i < nblocks; ++i) {
        if (j == river_row) continue;
        const double x0 = i * pitch + s.street / 2, y0 = j * pitch + s.street / 2;
        const Polygon block = rect(x0, y0, x0 + s.block, y0 + s.block);
        if (rng.chance(s.park_fraction)) {
          area(block, "leisure", "park");
          continue;
        }
        if (j * nblocks + i == industrial) area(block, "landuse", "industrial");
        const double q = s.block / 2;
        for (int k = 0; k < 4; ++k) {
          if (!rng.chance(0.8)) continue;
          const double qx = x0 + (k % 2) * q, qy = y0 + (k / 2) * q;
          const double l = rng.uniform(2, 8), r = rng.uniform(2, 8);
          const double b = rng.uniform(2, 8), t = rng.uniform(2, 8);
          const double w = q - l - r, h = q - b - t;
          const double angle = rng.chance(0.3) ? rng.uniform(-0.26, 0.26) : 0.0;
          const Polygon p = angle == 0.0 ? rect(qx + l, qy + b, qx + l + w, qy + b + h)
                                         : rotated_rect({qx + l + w / 2, qy + b + h / 2}, w, h, angle);
          building(p, height());
        }
      }
    }
  }

  void dense() {
    const FixtureSpec& s = f.spec;
    const double pitch = s.block + s.street;
    const std::vector<double> lines = street_grid("primary");
    const double depth = 14.0;
    for (std::size_t j = 0; j + 1 < lines.size(); ++j) {
      for (std::size_t i = 0; i + 1 < lines.size(); ++i) {
        const double x0 = i * pitch + s.street / 2, y0 = j * pitch + s.street / 2;
        const double x1 = x0 + s.block, y1 = y0 + s.block;
        // Perimeter block: two long wings and two short ones.
        const Polygon wings[4] = {rect(x0, y0, x1, y0 + depth), rect(x0, y1 - depth, x1, y1),
                                  rect(x0, y0 + depth + 4, x0 + depth, y1 - depth - 4),
                                  rect(x1 - depth, y0 + depth + 4, x1, y1 - depth - 4)};
        for (const Polygon& w : wings)
          if (rng.chance(0.9)) building(w, height());
      }
    }
  }

  void courtyard() {
    Polygon ring = rect(340, 340, 660, 660);
    Ring hole = rect(380, 380, 620, 620).exterior;
    ring.holes.push_back(hole);
    building(ring, 20.0);
    for (double t : {300.0, 700.0}) {
      road({t, 0.0}, {t, f.spec.extent}, "secondary");
      road({0.0, t}, {f.spec.extent, t}, "secondary");
    }
  }

  void parallel() {
    building(rect(400, 300, 440, 700), 15.0);
    building(rect(460, 300, 500, 700), 15.0);
    road({450, 250}, {450, 750}, "residential");
  }

  void park() { area(rect(-50, -50, f.spec.extent + 50, f.spec.extent + 50), "leisure", "park"); }

  void make_dem() {
    const FixtureSpec& s = f.spec;
    GridGeometry g;
    g.origin = s.origin;
    g.cell_size = s.dem_cell;
    g.ncols = g.nrows = static_cast<int>(std::ceil(s.extent / s.dem_cell));
    f.dem = HeightRaster(g, s.ground, -9999.0);
    for (int k = 0; k < s.nodata_cells; ++k) f.dem(rng.below(g.nrows), rng.below(g.ncols)) = -9999.0;
  }

  void truth(std::uint64_t seed) {
    const FixtureSpec& s = f.spec;
    json t;
    t["seed"] = seed;
    t["variant"] = std::string(to_string(s.variant));
    t["extent"] = {s.origin.x(), s.origin.y(), s.origin.x() + s.extent, s.origin.y() + s.extent};
    double footprint = 0.0;
    for (const Feature& b : f.buildings.features) footprint += clipped_area(b.polygon(), f.extent());
    t["building_footprint_area"] = footprint;
    t["z_mean"] = s.ground;
    if (s.variant == FixtureVariant::Town || s.variant == FixtureVariant::Dense) {
      // Streets run at 0 and 90 degrees: DIR1 is the midpoint of the class
      // holding 0 or 90.
      json cand = json::object();
      for (int n : {6, 7, 8}) {
        const double h = 180.0 / n;
        cand[std::to_string(n)] = {h / 2, (std::floor(90.0 / h) + 0.5) * h};
      }
      t["dir1_candidates"] = cand;
    }
    if (s.variant == FixtureVariant::Park) {
      // 200 m cells not touching the extent border.
      json ids = json::array();
      const int n = static_cast<int>(std::round(s.extent / 200.0));
      for (int r = 1; r + 1 < n; ++r)
        for (int c = 1; c + 1 < n; ++c) ids.push_back(r * n + c);
      t["green_ratio_one_cells_200m"] = ids;
    }
    if (s.variant == FixtureVariant::Courtyard) {
      // Cell [400, 600]^2 of the 200 m grid: row 2 from the north, column 2.
      t["front_index_undefined_cell_200m"] = 12;
    }
    f.ground_truth = t;
  }
};

}  // namespace

Fixture make_fixture(std::uint64_t seed, const FixtureSpec& spec) {
  if (!(spec.extent > 0.0) || !(spec.block > 0.0) || !(spec.street > 0.0) || !(spec.dem_cell > 0.0) ||
      spec.min_height > spec.max_height)
    throw ConfigError("fixture: invalid spec");
  Builder b(seed, spec);
  switch (spec.variant) {
    case FixtureVariant::Town: b.town(); break;
    case FixtureVariant::Park: b.park(); break;
    case FixtureVariant::Courtyard: b.courtyard(); break;
    case FixtureVariant::Dense: b.dense(); break;
    case FixtureVariant::Parallel: b.parallel(); break;
  }
  b.make_dem();
  b.truth(seed);
  return std::move(b.f);
}

void write_fixture(const Fixture& f, const fs::path& dir) {
  fs::create_directories(dir);
  write_vector_layer(f.buildings, dir / "buildings.geojson");
  write_vector_layer(f.roads, dir / "roads.geojson");
  write_vector_layer(f.landuse, dir / "landuse.geojson");
  write_ascii_grid(f.dem, dir / "dem.asc");
  const Box2 e = f.extent();
  const json config = {
      {"layers",
       {{{"name", "buildings"}, {"path", "buildings.geojson"}},
        {{"name", "roads"}, {"path", "roads.geojson"}},
        {{"name", "landuse"}, {"path", "landuse.geojson"}}}},
      {"dem", "dem.asc"},
      {"aoi", {e.min().x(), e.min().y(), e.max().x(), e.max().y()}},
      {"resolutions", {200, 500, 1000}},
      {"output_dir", "out"},
      {"outputs", {{"geojson_grid", true}, {"svf_raster", true}, {"triangles", false}, {"precision", 6}}},
  };
  for (const auto& [name, doc] : {std::pair{"config.json", config}, {"ground_truth.json", f.ground_truth}}) {
    std::ofstream out(dir / name);
    if (!out) throw IoError("cannot write " + (dir / name).string());
    out << doc.dump(2) << '\n';
  }
}

Fixture make_fixture_town(std::uint64_t seed, const FixtureSpec& spec, const fs::path& dir) {
  Fixture f = make_fixture(seed, spec);
  write_fixture(f, dir);
  return f;
}

}  // namespace ucp
