#pragma once

#include "ucp/ingest.hpp"
#include "ucp/raster.hpp"
#include "ucp/types.hpp"

#include <span>
#include <vector>

namespace ucp {

struct SvfParams {
  int n_sectors = 16;
  double radius = 200.0;
  double svf_res = 5.0;
};

/// Checks n_sectors >= 4, radius > 0, svf_res > 0 and radius >= svf_res.
void validate(const SvfParams& p);

struct BuildingRaster {
  HeightRaster height;  // 0 off buildings
  MaskRaster mask;      // 1 under buildings
};

/// Each pixel takes the height of the tallest building covering its centre.
BuildingRaster rasterize_buildings(std::span<const BuildingFeature> buildings,
                                   const GridGeometry& grid);

struct SurfaceModel {
  HeightRaster terrain;
  MaskRaster building_mask;
  HeightRaster merged;  // terrain + building heights
};

/// `terrain` must already be on the target grid.
SurfaceModel make_surface_model(HeightRaster terrain, std::span<const BuildingFeature> buildings);

/// Terrain for the SVF grid: NODATA filled from the nearest valid cell, then
/// resampled bilinearly onto `grid` and filled again at the margins.
HeightRaster prepare_terrain(const HeightRaster& dem, const GridGeometry& grid);

/// Pixel offsets within the search radius, grouped by azimuth sector.
/// Azimuth is measured clockwise from north; sector k covers
/// [k, k+1) * 360/n degrees.
struct SvfKernel {
  struct Offset {
    int drow;
    int dcol;
    double dist;
  };
  int n_sectors = 0;
  std::vector<std::vector<Offset>> sectors;
};

SvfKernel make_kernel(const SvfParams& p, double cell_size);

/// Sector index of the direction (dx east, dy north).
int sector_of(double dx, double dy, int n_sectors);

/// Mean over sectors of cos of the highest elevation angle seen from the
/// pixel (angles below the horizon count as 0). Pixels off the raster or
/// NODATA are ignored. Throws NoDataUnderObserver if the observer is NODATA.
double svf_at(const SurfaceModel& model, int row, int col, const SvfKernel& kernel);

HeightRaster svf_field(const SurfaceModel& model, const SvfParams& p, int workers = 0);

struct SvfCellStats {
  Maybe mean;
  Maybe nobld_mean;  // ground pixels only
};

/// Statistics over pixels whose centres fall in [min, max) of the cell.
SvfCellStats svf_cell_stats(const Box2& cell, const HeightRaster& svf, const MaskRaster& mask);

}  // namespace ucp
