#pragma once

#include "ucp/landcover.hpp"
#include "ucp/types.hpp"

#include <array>
#include <span>
#include <vector>

namespace ucp {

struct StreetSegment {
  Segment seg;
  double length = 0.0;
  double azimuth = 0.0;  // degrees clockwise from north, folded to [0, 180)
  int cell = -1;
};

/// Undirected line orientation of ab in [0, 180), quantized to 1e-9 degrees;
/// identical for ab and ba.
double line_azimuth(const Point2& a, const Point2& b);

/// Cuts every polyline at the grid lines and tags each two-vertex piece with
/// the cell holding its midpoint. Pieces outside the grid are dropped.
std::vector<StreetSegment> split_segments_by_grid(std::span<const Polyline> roads, const GridSpec& grid);

struct AzimuthHistogram {
  int n = 0;
  double h = 0.0;         // class width, degrees
  std::vector<double> L;  // summed length per class
};

/// Class i covers [i h, (i + 1) h).
AzimuthHistogram azimuth_histogram(std::span<const StreetSegment> segments, int n);

struct DirectionResult {
  Maybe dir1;
  Maybe dir2;
  Maybe ratio;
};

/// Interpolated main and secondary modes of a circular histogram.
DirectionResult find_modes(const AzimuthHistogram& hist);

inline constexpr std::array<int, 3> kDirectionClasses = {6, 7, 8};

/// find_modes for N = 6, 7 and 8, in that order.
std::array<DirectionResult, 3> direction_params(std::span<const StreetSegment> segments);

}  // namespace ucp
