#pragma once

#include "ucp/cdt.hpp"
#include "ucp/ingest.hpp"
#include "ucp/spatial_index.hpp"
#include "ucp/types.hpp"

#include <filesystem>
#include <span>
#include <vector>

namespace ucp {

enum class CanyonKind : std::uint8_t { Directed, Undirected, NonCanyon };

struct CanyonTriangle {
  Triangle tri;
  CanyonKind kind = CanyonKind::NonCanyon;
  double width = 0.0;  // canyon kinds only
  double area = 0.0;
  bool has_building_corner = false;
  bool crossed_by_road = false;
  int face = -1;  // face id in the triangulation
};

/// Altitude onto the shortest side, 2S / min(a, b, c). Throws
/// DegenerateGeometry for zero-area triangles.
double triangle_width(const Triangle& tri);

/// Kind from the two source flags.
CanyonKind classify_triangle(bool has_building_corner, bool crossed_by_road);

enum class RoleAdjacency { SharedVertex, SharedEdge };
enum class BuildingRole : std::uint8_t { None, DirectedOnly, Both, UndirectedOnly };

struct CanyonOptions {
  RoleAdjacency adjacency = RoleAdjacency::SharedVertex;
  CdtOptions cdt;
};

enum class EdgeRole : std::uint8_t { Wall, Gap };

struct BoundaryEdge {
  Segment segment;
  EdgeRole role;
};

/// Triangulation over building corners and green boundary vertices, with
/// walls and green boundaries as constraints, stripped of triangles inside
/// buildings and of slivers, and classified against the road lines.
struct CanyonModel {
  Cdt cdt;
  std::vector<CanyonTriangle> triangles;
  std::vector<int> triangle_of_face;  // -1 for removed faces
  std::vector<BuildingFeature> buildings;
  std::vector<BuildingRole> roles;  // per building
  std::vector<Segment> walls;
  SpatialIndex triangle_index;
  SpatialIndex building_index;
  SpatialIndex wall_index;
  std::vector<BoundaryEdge> boundary;  // directed_boundary(*this)
  SpatialIndex boundary_index;

  /// True when segment pq runs along a building wall within snap tolerance.
  bool on_wall(const Point2& p, const Point2& q) const;
};

CanyonModel build_canyon_model(std::span<const BuildingFeature> buildings,
                               std::span<const Polygon> green, std::span<const Polyline> roads,
                               const CanyonOptions& options = {});

/// Edges of Directed triangles whose neighbour across the edge is not a
/// Directed triangle.
std::vector<BoundaryEdge> directed_boundary(const CanyonModel& model);

struct CanyonCellStats {
  Maybe mdc_width, mdc_ratio, muc_width, muc_ratio;
  double mdc_area = 0.0, muc_area = 0.0;
  Maybe bld_mean_height;
  Maybe bldc_ratio, blduc_ratio, bluc_ratio;
  Maybe front_index;
};

/// Width means over triangles whose centroid lies in the half-open cell,
/// areas over triangles clipped to the cell.
void cell_canyon_stats(const Box2& cell, std::span<const CanyonTriangle> triangles,
                       CanyonCellStats& out);

/// Σ s h / Σ s; undefined when Σ s = 0.
Maybe weighted_building_height(std::span<const double> areas, std::span<const double> heights);

/// Ratios of the DirectedOnly / Both / UndirectedOnly areas.
void role_ratios(double directed, double both, double undirected, CanyonCellStats& out);

/// walls / gaps; undefined for zero gaps.
Maybe frontal_ratio(double wall_length, double gap_length);

/// All canyon statistics of one cell.
CanyonCellStats canyon_cell_stats(const CanyonModel& model, const Box2& cell);

/// Classified triangles and role-labelled buildings as GeoJSON.
void write_canyon_geojson(const CanyonModel& model, const std::filesystem::path& path);

}  // namespace ucp
