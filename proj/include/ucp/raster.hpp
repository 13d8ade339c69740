#pragma once

#include "ucp/types.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <optional>

namespace ucp {

/// Placement of a north-up regular grid. Row 0 is the northern (top) row.
struct GridGeometry {
  Point2 origin = Point2::Zero();  // lower-left corner
  double cell_size = 1.0;
  int ncols = 0;
  int nrows = 0;

  double top() const { return origin.y() + nrows * cell_size; }
  Point2 center(int row, int col) const {
    return {origin.x() + (col + 0.5) * cell_size, origin.y() + (nrows - row - 0.5) * cell_size};
  }
  Box2 extent() const {
    return Box2(origin, origin + Point2(ncols * cell_size, nrows * cell_size));
  }
  bool contains(int row, int col) const { return row >= 0 && col >= 0 && row < nrows && col < ncols; }
  bool operator==(const GridGeometry& o) const {
    return origin == o.origin && cell_size == o.cell_size && ncols == o.ncols && nrows == o.nrows;
  }
};

/// Dense raster over a GridGeometry, row-major with row 0 at the top.
template <class Scalar>
struct Raster {
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  GridGeometry geometry;
  Array values;
  std::optional<Scalar> nodata;

  Raster() = default;
  Raster(const GridGeometry& g, Scalar fill, std::optional<Scalar> nodata_value = std::nullopt)
      : geometry(g), values(Array::Constant(g.nrows, g.ncols, fill)), nodata(nodata_value) {}

  int rows() const { return geometry.nrows; }
  int cols() const { return geometry.ncols; }
  Scalar operator()(int r, int c) const { return values(r, c); }
  Scalar& operator()(int r, int c) { return values(r, c); }

  bool is_nodata(int r, int c) const { return nodata && values(r, c) == *nodata; }
};

using HeightRaster = Raster<double>;
using MaskRaster = Raster<std::uint8_t>;

/// Half-open row/column ranges of the cells whose centres lie in
/// [min, max) of a box.
struct PixelWindow {
  int row_begin = 0, row_end = 0;
  int col_begin = 0, col_end = 0;
};
PixelWindow centers_in(const GridGeometry& g, const Box2& box);

/// True when every cell is NODATA (or the raster is empty).
bool fully_void(const HeightRaster& r);

/// Bilinear interpolation between the four nearest cell centres; positions
/// beyond the outer centres clamp to the edge. NODATA when any contributing
/// cell with non-zero weight is NODATA, or when p is outside the extent.
std::optional<double> sample_bilinear(const HeightRaster& r, const Point2& p);

/// Samples r at every cell centre of `target`; cells off the source extent
/// are NODATA.
HeightRaster resample_to(const HeightRaster& r, const GridGeometry& target);

/// Resamples to a new cell size over the same extent (same lower-left origin).
HeightRaster resample_bilinear(const HeightRaster& r, double target_cell);

/// Replaces NODATA cells with the value of the nearest valid cell (8-connected
/// breadth-first distance, ties broken by scan order). A fully void raster is
/// returned unchanged.
HeightRaster fill_nodata_nearest(const HeightRaster& r);

}  // namespace ucp
