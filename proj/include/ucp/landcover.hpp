#pragma once

#include "ucp/ingest.hpp"
#include "ucp/spatial_index.hpp"
#include "ucp/types.hpp"

#include <array>
#include <span>
#include <string>
#include <vector>

namespace ucp {

/// Regular analysis grid. Cells are numbered row-major from the north-west
/// corner, so row 0 is the northern row.
struct GridSpec {
  Point2 origin = Point2::Zero();  // lower-left corner
  double resolution = 0.0;
  int ncols = 0;
  int nrows = 0;

  int cell_count() const { return ncols * nrows; }
  Box2 cell_rect(int row, int col) const {
    const double x0 = origin.x() + col * resolution;
    const double y0 = origin.y() + (nrows - 1 - row) * resolution;
    return Box2(Point2(x0, y0), Point2(x0 + resolution, y0 + resolution));
  }
  Box2 cell_rect(int id) const { return cell_rect(id / ncols, id % ncols); }
  Point2 cell_center(int id) const { return cell_rect(id).center(); }
  Box2 extent() const {
    return Box2(origin, origin + Point2(ncols * resolution, nrows * resolution));
  }
};

inline constexpr double kGridSnap = 1000.0;

/// Grid covering `aoi` whose corners are snapped outwards to multiples of
/// `snap`, so grids of resolutions dividing `snap` nest exactly.
GridSpec make_grid(const Box2& aoi, double resolution, double snap = kGridSnap);

struct ClassAreas {
  std::array<double, 6> area{};   // m^2, indexed by SurfaceClass
  std::array<double, 6> ratio{};  // sums to exactly 1

  double area_of(SurfaceClass c) const { return area[static_cast<int>(c)]; }
  double ratio_of(SurfaceClass c) const { return ratio[static_cast<int>(c)]; }
};

/// Half-width (m) by highway tag; the first matching pattern wins.
struct RoadWidthTable {
  struct Rule {
    std::string values;  // "a|b|c"
    double half_width;
  };
  std::string key = "highway";
  std::vector<Rule> rules{
      {"motorway|motorway_link|trunk|trunk_link|primary|primary_link", 15.0},
      {"secondary|secondary_link|tertiary|tertiary_link", 10.0},
      {"residential|living_street|unclassified", 7.0},
  };
  double default_half_width = 5.0;

  double half_width(const Attributes& attrs) const;
};

/// Road centreline buffered into overlapping pieces: one rectangle per segment
/// plus a 16-gon at every vertex. The union of the pieces is the buffer.
std::vector<Polygon> buffer_polyline(const Polyline& line, double half_width);

struct LandcoverParams {
  double landcover_res = 1.0;
  /// Highest priority first; classes not listed are never painted.
  std::vector<SurfaceClass> priority{SurfaceClass::Building, SurfaceClass::Water,
                                     SurfaceClass::Road,     SurfaceClass::Industrial,
                                     SurfaceClass::Green,    SurfaceClass::Other};
  RoadWidthTable roads;
};

/// Immutable paint list behind a spatial index. Subpixels are anchored to
/// `pixel_origin`, shared by every resolution of a run.
class LandcoverIndex {
 public:
  LandcoverIndex() = default;
  LandcoverIndex(std::span<const ClassifiedFeature> features, const LandcoverParams& params,
                 const Point2& pixel_origin);

  bool built() const { return built_; }
  const LandcoverParams& params() const { return params_; }
  const Point2& pixel_origin() const { return origin_; }

  struct Item {
    Polygon poly;
    Box2 box;
    std::uint8_t rank;  // larger paints over smaller
    SurfaceClass cls;
  };
  const std::vector<Item>& items() const { return items_; }
  const SpatialIndex& index() const { return index_; }

 private:
  bool built_ = false;
  LandcoverParams params_;
  Point2 origin_ = Point2::Zero();
  std::vector<Item> items_;
  SpatialIndex index_;
};

/// Rasterizes the cell at landcover_res and paints every subpixel with the
/// highest-priority class covering its centre. Throws IndexMissing when the
/// index was never built and ConfigError when landcover_res does not divide
/// the cell side.
ClassAreas classify_cell(const Box2& cell, const LandcoverIndex& index);

/// Per-class means of the ratios. Throws EmptyInput on an empty list.
std::array<double, 6> aggregate_city_means(std::span<const ClassAreas> cells);

}  // namespace ucp
