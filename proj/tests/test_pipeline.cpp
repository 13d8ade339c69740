#include "doctest.h"

#include "ucp/errors.hpp"
#include "ucp/fixture.hpp"
#include "ucp/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ucp;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("ucp_pipeline_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) row.push_back(field);
    if (!line.empty() && line.back() == ',') row.emplace_back();
    rows.push_back(row);
  }
  return rows;
}

int column(Field f) { return static_cast<int>(f); }

RunConfig fixture_config(const fs::path& dir, std::uint64_t seed, FixtureVariant v) {
  make_fixture_town(seed, fixture_preset(v), dir);
  return load_config(dir / "config.json");
}

}  // namespace

TEST_CASE("fixture town produces 25 + 4 + 1 records") {
  const fs::path dir = scratch("town");
  RunConfig c = fixture_config(dir, 7, FixtureVariant::Town);
  const RunReport rep = run(c);
  REQUIRE(rep.resolutions.size() == 3);
  const std::pair<const char*, std::size_t> expect[] = {
      {"params_200m.csv", 25}, {"params_500m.csv", 4}, {"params_1000m.csv", 1}};
  for (const auto& [name, n] : expect) {
    const auto rows = read_csv(dir / "out" / name);
    REQUIRE(rows.size() == n + 1);
    CHECK(slurp(dir / "out" / name).substr(0, csv_header().size()) == csv_header());
    for (std::size_t i = 1; i < rows.size(); ++i) {
      REQUIRE(rows[i].size() == kFieldCount);
      CHECK(rows[i][0] == std::to_string(i - 1));
    }
  }
  CHECK(fs::exists(dir / "out" / "run_report.json"));
  CHECK(fs::exists(dir / "out" / "legend.json"));
  CHECK(fs::exists(dir / "out" / "svf.asc"));
}

TEST_CASE("fixture town ground truth") {
  const fs::path dir = scratch("truth");
  const Fixture f = make_fixture(11, fixture_preset(FixtureVariant::Town));
  write_fixture(f, dir);
  RunConfig c = load_config(dir / "config.json");
  RunReport rep;
  const Computed out = compute(c, rep);
  const auto& cells = out.records[0];
  int with_dir = 0;
  for (const CellRecord& r : cells) {
    REQUIRE(r[Field::Z_MEAN].has_value());
    CHECK(*r[Field::Z_MEAN] == doctest::Approx(150.0).epsilon(1e-12));
    for (int n : {6, 7, 8}) {
      const int base = column(Field::DIR1_6) + 3 * (n - 6);
      if (!r.values[base]) continue;
      ++with_dir;
      const auto& cand = f.ground_truth["dir1_candidates"][std::to_string(n)];
      const double d = *r.values[base];
      CHECK((std::abs(d - cand[0].get<double>()) < 1e-9 || std::abs(d - cand[1].get<double>()) < 1e-9));
    }
  }
  CHECK(with_dir == 75);
}

TEST_CASE("park fixture is all green inside") {
  const fs::path dir = scratch("park");
  const Fixture f = make_fixture(3, fixture_preset(FixtureVariant::Park));
  write_fixture(f, dir);
  RunReport rep;
  const Computed out = compute(load_config(dir / "config.json"), rep);
  for (int id : f.ground_truth["green_ratio_one_cells_200m"])
    CHECK(*out.records[0][id][Field::GREEN_RATIO] == 1.0);
}

TEST_CASE("courtyard fixture leaves FRONT_INDEX undefined in the yard") {
  const fs::path dir = scratch("courtyard");
  const Fixture f = make_fixture(3, fixture_preset(FixtureVariant::Courtyard));
  write_fixture(f, dir);
  RunReport rep;
  const Computed out = compute(load_config(dir / "config.json"), rep);
  const int id = f.ground_truth["front_index_undefined_cell_200m"];
  CHECK_FALSE(out.records[0][id][Field::FRONT_INDEX].has_value());
  // The yard itself is open ground between walls.
  CHECK(*out.records[0][id][Field::OTHER_RATIO] == 1.0);
  CHECK(*out.records[0][id][Field::SVF_MEAN] < 1.0);
}

TEST_CASE("empty AOI composes the empty cases of every module") {
  RunConfig c;
  c.aoi = make_box(410000, 6170000, 411000, 6171000);
  c.resolutions = {500};
  RunReport rep;
  const Computed out = compute(c, rep);
  REQUIRE(out.records[0].size() == 4);
  for (const CellRecord& r : out.records[0]) {
    CHECK(*r[Field::OTHER_RATIO] == 1.0);
    CHECK(*r[Field::SVF_MEAN] == 1.0);
    CHECK(*r[Field::SVF_NOBLD_MEAN] == 1.0);
    for (Field f : {Field::BLD_MEAN_HEIGHT, Field::MDC_WIDTH, Field::MUC_WIDTH, Field::FRONT_INDEX,
                    Field::DIR1_6, Field::DIR2_8, Field::DIRRATIO_7, Field::Z_MEAN})
      CHECK_FALSE(r[f].has_value());
    CHECK(*r[Field::SHAPE_Area] == 250000.0);
  }
}

TEST_CASE("reruns are byte-identical across worker counts") {
  const fs::path dir = scratch("determinism");
  RunConfig c = fixture_config(dir, 5, FixtureVariant::Town);
  c.workers = 1;
  c.output_dir = dir / "a";
  run(c);
  c.workers = 3;
  c.output_dir = dir / "b";
  run(c);
  for (const char* name : {"params_200m.csv", "params_500m.csv", "params_1000m.csv"})
    CHECK(slurp(dir / "a" / name) == slurp(dir / "b" / name));
}

TEST_CASE("GeoJSON grid round-trips every property") {
  const fs::path dir = scratch("geojson");
  RunConfig c = fixture_config(dir, 2, FixtureVariant::Town);
  run(c);
  RunReport rep;
  const Computed out = compute(c, rep);
  const auto back = read_geojson_grid(dir / "out" / "grid_500m.geojson");
  REQUIRE(back.size() == out.records[1].size());
  for (std::size_t i = 0; i < back.size(); ++i)
    for (int k = 0; k < kFieldCount; ++k) CHECK(back[i].values[k] == out.records[1][i].values[k]);
}

TEST_CASE("CSV writer details") {
  CellRecord r;
  r[Field::OBJECTID] = 0.0;
  r[Field::BLD_RATIO] = 0.25;
  std::ostringstream s;
  write_csv(std::vector<CellRecord>{r}, s);
  const std::string text = s.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
  const std::string row = text.substr(text.find('\n') + 1);
  CHECK(std::count(row.begin(), row.end(), ',') == kFieldCount - 1);
  CHECK(row.rfind("0,,0.25,", 0) == 0);
}

TEST_CASE("config parsing") {
  const fs::path dir = scratch("config");
  SUBCASE("relative paths resolve against the config file") {
    std::ofstream(dir / "c.json") << R"({"layers": [{"name": "b", "path": "data/b.geojson"}],
      "dem": "dem.asc", "resolutions": [250], "svf": {"n_sectors": 8, "radius": 100, "res": 2},
      "landcover": {"res": 0.5}, "workers": 2, "outputs": {"precision": 8}})";
    const RunConfig c = load_config(dir / "c.json");
    CHECK(c.layers.at(0).path == fs::absolute(dir) / "data/b.geojson");
    CHECK(*c.dem == fs::absolute(dir) / "dem.asc");
    CHECK(c.resolutions == std::vector<double>{250});
    CHECK(c.svf.n_sectors == 8);
    CHECK(c.svf.radius == 100);
    CHECK(c.svf.svf_res == 2);
    CHECK(c.landcover.landcover_res == 0.5);
    CHECK(c.workers == 2);
    CHECK(c.outputs.precision == 8);
    CHECK(c.output_dir == fs::absolute(dir) / "out");
  }
  SUBCASE("unknown keys and bad values are rejected") {
    std::ofstream(dir / "u.json") << R"({"resolutionz": [200]})";
    CHECK_THROWS_AS(load_config(dir / "u.json"), ConfigError);
    std::ofstream(dir / "v.json") << R"({"svf": {"n_sectors": "many"}})";
    CHECK_THROWS_AS(load_config(dir / "v.json"), ConfigError);
  }
  SUBCASE("to_json and back is a fixed point") {
    RunConfig c;
    c.aoi = make_box(0, 0, 1000, 1000);
    c.direction_highways = {"primary", "secondary"};
    c.output_dir = dir / "out";
    const auto j = config_to_json(c);
    CHECK(config_to_json(config_from_json(j, dir)) == j);
  }
  SUBCASE("validate reports missing inputs") {
    RunConfig c;
    c.layers.push_back({"x", dir / "missing.geojson"});
    CHECK_THROWS_AS(validate(c), ConfigError);
    c.layers.clear();
    c.resolutions = {300};
    const auto warnings = validate(c);
    CHECK(std::any_of(warnings.begin(), warnings.end(),
                      [](const std::string& w) { return w.find("nest") != std::string::npos; }));
  }
}

TEST_CASE("errors name the failing stage") {
  RunConfig c;
  c.layers.push_back({"ghost", fs::temp_directory_path() / "ucp_no_such_file.geojson"});
  c.aoi = make_box(0, 0, 1000, 1000);
  RunReport rep;
  try {
    compute(c, rep);
    FAIL("expected a StageError");
  } catch (const StageError& e) {
    CHECK(std::string(e.what()).find("'ingest'") != std::string::npos);
  }
}
