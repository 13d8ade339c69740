#include "ucp/svf.hpp"

#include "ucp/errors.hpp"
#include "ucp/geometry.hpp"
#include "ucp/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ucp {

void validate(const SvfParams& p) {
  if (p.n_sectors < 4) throw ConfigError("svf n_sectors must be at least 4");
  if (!(p.svf_res > 0.0)) throw ConfigError("svf_res must be positive");
  if (!(p.radius >= p.svf_res)) throw ConfigError("svf radius must be at least svf_res");
}

namespace {

void crossings(const Ring& ring, double y, std::vector<double>& xs) {
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = ring[i];
    const Point2& b = ring[(i + 1) % n];
    if ((a.y() <= y) == (b.y() <= y)) continue;
    xs.push_back(a.x() + (y - a.y()) * (b.x() - a.x()) / (b.y() - a.y()));
  }
}

}  // namespace

BuildingRaster rasterize_buildings(std::span<const BuildingFeature> buildings,
                                   const GridGeometry& grid) {
  BuildingRaster out{HeightRaster(grid, 0.0), MaskRaster(grid, 0)};
  const double cs = grid.cell_size;
  std::vector<double> xs;
  for (const BuildingFeature& b : buildings) {
    const Box2 box = bounds(b.footprint);
    // Rows whose centre y lies within the footprint's vertical span.
    const int r_first = std::max(0, static_cast<int>(std::floor((grid.top() - box.max().y()) / cs - 0.5)));
    const int r_last = std::min(grid.nrows - 1, static_cast<int>(std::ceil((grid.top() - box.min().y()) / cs - 0.5)));
    for (int r = r_first; r <= r_last; ++r) {
      const double y = grid.top() - (r + 0.5) * cs;
      xs.clear();
      crossings(b.footprint.exterior, y, xs);
      for (const Ring& h : b.footprint.holes) crossings(h, y, xs);
      std::sort(xs.begin(), xs.end());
      for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
        const int c_lo = std::max(0, static_cast<int>(std::ceil((xs[k] - grid.origin.x()) / cs - 0.5)));
        const int c_hi = std::min(grid.ncols, static_cast<int>(std::ceil((xs[k + 1] - grid.origin.x()) / cs - 0.5)));
        for (int c = c_lo; c < c_hi; ++c) {
          out.height(r, c) = std::max(out.height(r, c), b.height);
          out.mask(r, c) = 1;
        }
      }
    }
  }
  return out;
}

SurfaceModel make_surface_model(HeightRaster terrain, std::span<const BuildingFeature> buildings) {
  BuildingRaster b = rasterize_buildings(buildings, terrain.geometry);
  SurfaceModel m;
  m.merged = terrain;
  for (int r = 0; r < terrain.rows(); ++r)
    for (int c = 0; c < terrain.cols(); ++c)
      if (b.mask(r, c) && !terrain.is_nodata(r, c)) m.merged(r, c) += b.height(r, c);
  m.terrain = std::move(terrain);
  m.building_mask = std::move(b.mask);
  return m;
}

HeightRaster prepare_terrain(const HeightRaster& dem, const GridGeometry& grid) {
  const HeightRaster filled = fill_nodata_nearest(dem);
  return fill_nodata_nearest(resample_to(filled, grid));
}

int sector_of(double dx, double dy, int n_sectors) {
  double az = std::atan2(dx, dy);
  if (az < 0.0) az += 2.0 * std::numbers::pi;
  const int s = static_cast<int>(az * n_sectors / (2.0 * std::numbers::pi));
  return std::min(s, n_sectors - 1);
}

SvfKernel make_kernel(const SvfParams& p, double cell_size) {
  validate(SvfParams{p.n_sectors, p.radius, cell_size});
  SvfKernel k;
  k.n_sectors = p.n_sectors;
  k.sectors.resize(p.n_sectors);
  const int reach = static_cast<int>(std::floor(p.radius / cell_size));
  for (int dr = -reach; dr <= reach; ++dr)
    for (int dc = -reach; dc <= reach; ++dc) {
      if (dr == 0 && dc == 0) continue;
      const double dx = dc * cell_size;
      const double dy = -dr * cell_size;
      const double dist = std::hypot(dx, dy);
      if (dist > p.radius) continue;
      k.sectors[sector_of(dx, dy, p.n_sectors)].push_back({dr, dc, dist});
    }
  return k;
}

double svf_at(const SurfaceModel& model, int row, int col, const SvfKernel& kernel) {
  const HeightRaster& z = model.merged;
  if (!z.geometry.contains(row, col)) throw OutOfDomain("observer pixel outside the raster");
  if (z.is_nodata(row, col))
    throw NoDataUnderObserver("no elevation under observer at row " + std::to_string(row) +
                              ", col " + std::to_string(col));
  const double z0 = z(row, col);
  const int nr = z.rows(), nc = z.cols();
  double sum = 0.0;
  for (const auto& sector : kernel.sectors) {
    double best = 0.0;  // tangent of the elevation angle, clamped at the horizon
    for (const auto& o : sector) {
      const int r = row + o.drow, c = col + o.dcol;
      if (r < 0 || c < 0 || r >= nr || c >= nc || z.is_nodata(r, c)) continue;
      const double t = (z(r, c) - z0) / o.dist;
      if (t > best) best = t;
    }
    sum += std::cos(std::atan(best));
  }
  return sum / kernel.n_sectors;
}

HeightRaster svf_field(const SurfaceModel& model, const SvfParams& p, int workers) {
  validate(p);
  const SvfKernel kernel = make_kernel(p, model.merged.geometry.cell_size);
  HeightRaster out(model.merged.geometry, 1.0, -9999.0);
  const int nc = out.cols();
  parallel_for(static_cast<std::size_t>(out.rows()), workers, [&](std::size_t r) {
    for (int c = 0; c < nc; ++c) out(static_cast<int>(r), c) = svf_at(model, static_cast<int>(r), c, kernel);
  });
  return out;
}

SvfCellStats svf_cell_stats(const Box2& cell, const HeightRaster& svf, const MaskRaster& mask) {
  const PixelWindow w = centers_in(svf.geometry, cell);
  double all = 0.0, ground = 0.0;
  long n_all = 0, n_ground = 0;
  for (int r = w.row_begin; r < w.row_end; ++r)
    for (int c = w.col_begin; c < w.col_end; ++c) {
      if (svf.is_nodata(r, c)) continue;
      all += svf(r, c);
      ++n_all;
      if (!mask(r, c)) {
        ground += svf(r, c);
        ++n_ground;
      }
    }
  SvfCellStats s;
  if (n_all) s.mean = all / n_all;
  if (n_ground) s.nobld_mean = ground / n_ground;
  return s;
}

}  // namespace ucp
