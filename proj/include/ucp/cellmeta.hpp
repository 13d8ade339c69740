#pragma once

#include "ucp/raster.hpp"
#include "ucp/types.hpp"

namespace ucp {

struct ProjectionSpec {
  double a = 6378137.0;
  double inv_f = 298.257223563;
  double central_meridian = 39.0;  // degrees east
  double scale = 0.9996;
  double false_easting = 500000.0;
  double false_northing = 0.0;

  double flattening() const { return 1.0 / inv_f; }
};

/// Validates the ellipsoid and projection constants; throws ConfigError.
void validate(const ProjectionSpec& spec);

struct GeoPoint {
  double lat = 0.0;  // degrees
  double lon = 0.0;  // degrees
  bool in_zone = true;  // within 3.5 degrees of the central meridian
};

/// Ellipsoidal transverse Mercator inverse (sixth-order series in the third
/// flattening, Newton iteration for the geodetic latitude). Throws
/// OutOfDomain when the point is too far from the central meridian for the
/// series to hold.
GeoPoint inverse_transverse_mercator(double x, double y, const ProjectionSpec& spec = {});

/// Mean of valid DEM cells whose centres fall in the half-open cell.
Maybe cell_mean_elevation(const Box2& cell, const HeightRaster& dem);

struct CellMeta {
  double x = 0.0, y = 0.0;
  double lat = 0.0, lon = 0.0;
  Maybe z_mean;
  double shape_length = 0.0;
  double shape_area = 0.0;
};

CellMeta cell_meta(const Box2& cell, const HeightRaster* dem, const ProjectionSpec& spec);

}  // namespace ucp
