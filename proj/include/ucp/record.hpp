#pragma once

#include "ucp/landcover.hpp"
#include "ucp/types.hpp"

#include <array>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ucp {

enum class Field : int {
  OBJECTID, BLD_AREA, BLD_RATIO, GREEN_AREA, GREEN_RATIO, INDUSTR_AREA, INDUSTR_RATIO,
  ROAD_AREA, ROAD_RATIO, WATER_AREA, WATER_RATIO, OTHER_AREA, OTHER_RATIO,
  SVF_MEAN, SVF_NOBLD_MEAN, BLD_MEAN_HEIGHT,
  MDC_WIDTH, MDC_AREA, MDC_RATIO, MUC_WIDTH, MUC_AREA, MUC_RATIO,
  BLDC_RATIO, BLDUC_RATIO, BLUC_RATIO, FRONT_INDEX,
  DIR1_6, DIR2_6, DIRRATIO_6, DIR1_7, DIR2_7, DIRRATIO_7, DIR1_8, DIR2_8, DIRRATIO_8,
  X, Y, LAT, LONG, Z_MEAN, SHAPE_Length, SHAPE_Area,
};

inline constexpr int kFieldCount = 42;

inline constexpr std::array<std::string_view, kFieldCount> kFieldNames = {
    "OBJECTID",     "BLD_AREA",    "BLD_RATIO",   "GREEN_AREA",     "GREEN_RATIO", "INDUSTR_AREA",
    "INDUSTR_RATIO", "ROAD_AREA",  "ROAD_RATIO",  "WATER_AREA",     "WATER_RATIO", "OTHER_AREA",
    "OTHER_RATIO",  "SVF_MEAN",    "SVF_NOBLD_MEAN", "BLD_MEAN_HEIGHT", "MDC_WIDTH", "MDC_AREA",
    "MDC_RATIO",    "MUC_WIDTH",   "MUC_AREA",    "MUC_RATIO",      "BLDC_RATIO",  "BLDUC_RATIO",
    "BLUC_RATIO",   "FRONT_INDEX", "DIR1_6",      "DIR2_6",         "DIRRATIO_6",  "DIR1_7",
    "DIR2_7",       "DIRRATIO_7",  "DIR1_8",      "DIR2_8",         "DIRRATIO_8",  "X",
    "Y",            "LAT",         "LONG",        "Z_MEAN",         "SHAPE_Length", "SHAPE_Area"};

/// Fields whose values are fractions in [0, 1].
bool is_ratio_field(Field f);

/// One output row; undefined values are empty optionals.
struct CellRecord {
  std::array<Maybe, kFieldCount> values{};

  Maybe& operator[](Field f) { return values[static_cast<int>(f)]; }
  const Maybe& operator[](Field f) const { return values[static_cast<int>(f)]; }
};

/// Shortest "%.*g"-style rendering with `digits` significant digits; an
/// undefined value renders as an empty string.
std::string format_value(const Maybe& v, int digits = 6);

void write_csv(std::span<const CellRecord> records, std::ostream& out, int digits = 6);
void write_csv(std::span<const CellRecord> records, const std::filesystem::path& path, int digits = 6);

/// The header line (without newline).
std::string csv_header();

/// Cell squares with every field as a property (null when undefined).
void write_geojson_grid(std::span<const CellRecord> records, const GridSpec& grid,
                        const std::filesystem::path& path);
std::vector<CellRecord> read_geojson_grid(const std::filesystem::path& path);

}  // namespace ucp
