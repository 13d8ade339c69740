#pragma once

#include "ucp/raster.hpp"
#include "ucp/types.hpp"

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ucp {

enum class SurfaceClass : std::uint8_t { Building, Green, Industrial, Road, Water, Other };

inline constexpr std::array<SurfaceClass, 6> kSurfaceClasses = {
    SurfaceClass::Building, SurfaceClass::Green, SurfaceClass::Industrial,
    SurfaceClass::Road,     SurfaceClass::Water, SurfaceClass::Other};

std::string_view to_string(SurfaceClass c);
/// Case-insensitive; throws ConfigError on unknown names.
SurfaceClass parse_surface_class(std::string_view name);

using Attributes = std::map<std::string, std::string>;
using Geometry = std::variant<Polygon, Polyline>;

struct Feature {
  Geometry geometry;
  Attributes attributes;
  int source_index = 0;  // index of the feature in its source file

  bool is_polygon() const { return std::holds_alternative<Polygon>(geometry); }
  const Polygon& polygon() const { return std::get<Polygon>(geometry); }
  const Polyline& polyline() const { return std::get<Polyline>(geometry); }
};

struct VectorLayer {
  std::string name;
  std::vector<Feature> features;
  std::vector<std::string> warnings;
};

struct LoadOptions {
  /// Reject the whole file on the first invalid feature instead of skipping it.
  bool strict = false;
};

/// Reads a GeoJSON FeatureCollection in planar meter coordinates. Multi
/// geometries are exploded into one feature per part.
VectorLayer load_vector_layer(const std::filesystem::path& path, const LoadOptions& options = {},
                              std::string name = {});
VectorLayer parse_vector_layer(std::string_view text, const LoadOptions& options = {},
                               std::string name = {});

/// Writes polygons and polylines as a GeoJSON FeatureCollection; attributes
/// become string properties.
void write_vector_layer(const VectorLayer& layer, const std::filesystem::path& path);

/// One reclassification rule. `layer` and `value` accept "*" (anything) and
/// `value` accepts "a|b|c" alternatives. An empty or "*" key matches any
/// feature of the layer.
struct ClassRule {
  std::string layer = "*";
  std::string key;
  std::string value = "*";
  SurfaceClass cls = SurfaceClass::Other;
};

/// Ordered rules; the first match wins and unmatched features are Other.
struct ClassMapping {
  std::vector<ClassRule> rules;

  SurfaceClass classify(std::string_view layer, const Attributes& attrs) const;

  /// Built-in OSM-oriented table (user-overridable).
  static ClassMapping defaults();
};

struct ClassifiedFeature {
  const Feature* feature = nullptr;
  std::string_view layer;
  SurfaceClass cls = SurfaceClass::Other;
};

/// Labels every feature of every layer with exactly one class.
std::vector<ClassifiedFeature> reclassify(std::span<const VectorLayer> layers,
                                          const ClassMapping& mapping);

struct BuildingFeature {
  Polygon footprint;
  double height = 0.0;
};

struct BuildingHeightRule {
  std::string height_key = "height";
  std::string levels_key = "building:levels";
  double floor_height = 3.0;
  double default_height = 12.0;
};

/// Explicit height if parseable, else levels x floor height, else the default.
double building_height(const Attributes& attrs, const BuildingHeightRule& rule);

/// Building-class polygons with their heights.
std::vector<BuildingFeature> extract_buildings(std::span<const ClassifiedFeature> features,
                                               const BuildingHeightRule& rule);

/// ESRI ASCII grid. Rows are stored top-down as in the file.
HeightRaster load_dem(const std::filesystem::path& path);
HeightRaster parse_ascii_grid(std::istream& in);
void write_ascii_grid(const HeightRaster& r, const std::filesystem::path& path);
void write_ascii_grid(const HeightRaster& r, std::ostream& out);

}  // namespace ucp
