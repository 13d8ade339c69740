#pragma once

#include "ucp/canyon.hpp"
#include "ucp/cellmeta.hpp"
#include "ucp/ingest.hpp"
#include "ucp/landcover.hpp"
#include "ucp/record.hpp"
#include "ucp/svf.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ucp {

struct LayerInput {
  std::string name;  // layer name seen by the class mapping
  std::filesystem::path path;
};

struct OutputOptions {
  bool geojson_grid = false;
  bool svf_raster = false;
  bool triangles = false;
  int precision = 6;
};

struct RunConfig {
  std::vector<LayerInput> layers;
  std::optional<std::filesystem::path> dem;
  ClassMapping mapping = ClassMapping::defaults();
  std::vector<double> resolutions{200.0, 500.0, 1000.0};
  std::optional<Box2> aoi;  // default: extent of all features
  std::optional<Polygon> mask;
  double grid_snap = kGridSnap;
  SvfParams svf;
  LandcoverParams landcover;
  BuildingHeightRule heights;
  CanyonOptions canyon;
  ProjectionSpec projection;
  /// highway values used for street directions; empty means every road.
  std::vector<std::string> direction_highways;
  std::filesystem::path output_dir = "out";
  OutputOptions outputs;
  int workers = 0;
  bool strict = false;
};

/// Reads a JSON config; relative paths resolve against the file's directory.
RunConfig load_config(const std::filesystem::path& path);
RunConfig config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir);
/// Every field, defaults included.
nlohmann::json config_to_json(const RunConfig& config);

/// Static checks plus existence and readability of every input. Returns
/// warnings; throws ConfigError (or the loader's error) on failure.
std::vector<std::string> validate(const RunConfig& config);

struct ResolutionReport {
  double resolution = 0.0;
  int cells = 0;
  std::filesystem::path csv;
  std::array<double, 6> city_means{};  // per SurfaceClass, over masked cells
  int mean_cells = 0;
  double seconds = 0.0;
};

struct RunReport {
  std::vector<ResolutionReport> resolutions;
  std::vector<std::string> warnings;
  std::vector<std::pair<std::string, double>> stage_seconds;
  std::size_t features = 0, buildings = 0, triangles = 0;
};

/// Everything computed for a run, before any file is written.
struct Computed {
  std::vector<GridSpec> grids;                    // one per resolution
  std::vector<std::vector<CellRecord>> records;  // ordered by OBJECTID
  HeightRaster svf;
  std::optional<CanyonModel> canyon;
};

/// Runs every stage in memory. Errors are rethrown as StageError naming the
/// stage (and the cell for per-cell stages).
Computed compute(const RunConfig& config, RunReport& report, std::ostream* log = nullptr);

/// compute() followed by params_<res>m.csv per resolution, legend.json,
/// run_report.json and the optional outputs in config.output_dir.
RunReport run(const RunConfig& config, std::ostream* log = nullptr);

/// Output file name for one resolution, e.g. "params_200m.csv".
std::string csv_name(double resolution);

}  // namespace ucp
