#pragma once

#include "ucp/ingest.hpp"
#include "ucp/raster.hpp"

#include <cstdint>
#include <filesystem>
#include <string_view>

#include <json.hpp>

namespace ucp {

/// Synthetic test towns in a planar meter CRS.
enum class FixtureVariant {
  Town,       // regular blocks at 0/90 degrees, parks, an industrial block, a river
  Park,       // a single park covering the whole extent
  Courtyard,  // one closed building ring with an enclosed yard
  Dense,      // perimeter blocks with wide streets and mid-rise heights
  Parallel,   // two parallel slabs with a street between them
};

FixtureVariant parse_fixture_variant(std::string_view name);
std::string_view to_string(FixtureVariant v);

struct FixtureSpec {
  FixtureVariant variant = FixtureVariant::Town;
  Point2 origin{410000.0, 6170000.0};  // south-west corner
  double extent = 1000.0;
  double block = 80.0;   // block edge length
  double street = 20.0;  // street width between blocks
  double min_height = 9.0;
  double max_height = 45.0;
  double park_fraction = 0.1;
  bool river = true;
  double ground = 150.0;  // flat DEM elevation
  double dem_cell = 10.0;
  int nodata_cells = 6;
};

/// Block and street sizes for each variant; Dense uses 120 m blocks, 60 m
/// streets and 11-23 m heights.
FixtureSpec fixture_preset(FixtureVariant v);

struct Fixture {
  FixtureSpec spec;
  VectorLayer buildings;
  VectorLayer roads;
  VectorLayer landuse;
  HeightRaster dem;
  nlohmann::json ground_truth;

  std::vector<VectorLayer> layers() const { return {buildings, roads, landuse}; }
  Box2 extent() const;
};

/// Deterministic for a given seed and spec on every platform.
Fixture make_fixture(std::uint64_t seed, const FixtureSpec& spec);

/// Writes buildings/roads/landuse GeoJSON, dem.asc, config.json and
/// ground_truth.json into `dir`.
void write_fixture(const Fixture& fixture, const std::filesystem::path& dir);

Fixture make_fixture_town(std::uint64_t seed, const FixtureSpec& spec, const std::filesystem::path& dir);

}  // namespace ucp
