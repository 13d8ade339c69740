#include "ucp/canyon.hpp"

#include "ucp/errors.hpp"
#include "ucp/geometry.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

namespace ucp {

double triangle_width(const Triangle& tri) {
  const double s = triangle_area(tri);
  const auto sides = tri.sides();
  const double shortest = std::min({sides[0], sides[1], sides[2]});
  if (!(s > 0.0) || !(shortest > 0.0)) throw DegenerateGeometry("zero-area triangle has no width");
  return 2.0 * s / shortest;
}

CanyonKind classify_triangle(bool has_building_corner, bool crossed_by_road) {
  if (!has_building_corner) return CanyonKind::NonCanyon;
  return crossed_by_road ? CanyonKind::Directed : CanyonKind::Undirected;
}

bool CanyonModel::on_wall(const Point2& p, const Point2& q) const {
  const double tol = kSnapTolerance;
  Box2 box(p.cwiseMin(q), p.cwiseMax(q));
  box.extend(box.min() - Point2::Constant(tol));
  box.extend(box.max() + Point2::Constant(tol));
  for (const std::uint32_t id : wall_index.query(box)) {
    const Segment& w = walls[id];
    if (distance_to_segment(p, w.a, w.b) <= tol && distance_to_segment(q, w.a, w.b) <= tol) return true;
  }
  return false;
}

namespace {

void add_ring(const Ring& ring, std::vector<Point2>& pts, std::vector<EdgeIds>& edges) {
  const int base = static_cast<int>(pts.size());
  const int n = static_cast<int>(ring.size());
  for (const Point2& p : ring) pts.push_back(p);
  for (int i = 0; i < n; ++i) edges.push_back({base + i, base + (i + 1) % n});
}

std::vector<Box2> boxes_of(const std::vector<CanyonTriangle>& tris) {
  std::vector<Box2> out;
  out.reserve(tris.size());
  for (const auto& t : tris) out.push_back(bounds(t.tri));
  return out;
}

}  // namespace

CanyonModel build_canyon_model(std::span<const BuildingFeature> buildings,
                               std::span<const Polygon> green, std::span<const Polyline> roads,
                               const CanyonOptions& options) {
  CanyonModel m;
  m.buildings.assign(buildings.begin(), buildings.end());

  std::vector<Point2> pts;
  std::vector<EdgeIds> edges;
  std::vector<int> owner;  // building id per input point, -1 for green
  for (std::size_t b = 0; b < m.buildings.size(); ++b) {
    const Polygon& fp = m.buildings[b].footprint;
    add_ring(fp.exterior, pts, edges);
    for (const Ring& h : fp.holes) add_ring(h, pts, edges);
    owner.resize(pts.size(), static_cast<int>(b));
    auto push_walls = [&](const Ring& ring) {
      for (std::size_t i = 0; i < ring.size(); ++i)
        m.walls.push_back(Segment{ring[i], ring[(i + 1) % ring.size()]});
    };
    push_walls(fp.exterior);
    for (const Ring& h : fp.holes) push_walls(h);
  }
  for (const Polygon& g : green) {
    add_ring(g.exterior, pts, edges);
    for (const Ring& h : g.holes) add_ring(h, pts, edges);
  }
  owner.resize(pts.size(), -1);

  m.cdt = constrained_delaunay(pts, edges, options.cdt);
  const std::size_t nv = m.cdt.vertices.size();

  // vertex -> buildings with a corner there
  std::vector<std::vector<int>> corner_of(nv);
  for (std::size_t i = 0; i < owner.size(); ++i)
    if (owner[i] >= 0) {
      auto& list = corner_of[m.cdt.vertex_of_input[i]];
      if (list.empty() || list.back() != owner[i]) list.push_back(owner[i]);
    }

  std::vector<Box2> wall_boxes;
  for (const Segment& w : m.walls) wall_boxes.push_back(Box2(w.a.cwiseMin(w.b), w.a.cwiseMax(w.b)));
  m.wall_index = SpatialIndex(wall_boxes);

  std::vector<Box2> bld_boxes;
  for (const auto& b : m.buildings) bld_boxes.push_back(bounds(b.footprint));
  m.building_index = SpatialIndex(bld_boxes);

  std::vector<Segment> road_segs;
  std::vector<Box2> road_boxes;
  for (const Polyline& r : roads)
    for (std::size_t i = 0; i + 1 < r.vertices.size(); ++i) {
      road_segs.push_back(Segment{r.vertices[i], r.vertices[i + 1]});
      road_boxes.push_back(Box2(r.vertices[i].cwiseMin(r.vertices[i + 1]),
                                r.vertices[i].cwiseMax(r.vertices[i + 1])));
    }
  const SpatialIndex road_index(road_boxes);

  m.triangle_of_face.assign(m.cdt.faces.size(), -1);
  for (std::size_t f = 0; f < m.cdt.faces.size(); ++f) {
    const Triangle tri = m.cdt.triangle(f);
    const double area = triangle_area(tri);
    if (area < kSliverArea) continue;
    const Point2 c = tri.centroid();
    bool inside = false;
    for (const std::uint32_t b : m.building_index.query(Box2(c, c)))
      if (point_in_polygon(c, m.buildings[b].footprint)) {
        inside = true;
        break;
      }
    if (inside) continue;

    CanyonTriangle ct;
    ct.tri = tri;
    ct.area = area;
    ct.face = static_cast<int>(f);
    for (const int v : m.cdt.faces[f].v)
      if (!corner_of[v].empty()) ct.has_building_corner = true;
    for (const std::uint32_t s : road_index.query(bounds(tri)))
      if (segment_intersects_triangle(road_segs[s], tri)) {
        ct.crossed_by_road = true;
        break;
      }
    ct.kind = classify_triangle(ct.has_building_corner, ct.crossed_by_road);
    if (ct.kind != CanyonKind::NonCanyon) ct.width = triangle_width(tri);
    m.triangle_of_face[f] = static_cast<int>(m.triangles.size());
    m.triangles.push_back(ct);
  }
  m.triangle_index = SpatialIndex(boxes_of(m.triangles));

  // Building roles.
  std::vector<std::uint8_t> touches(m.buildings.size(), 0);  // bit 0 directed, bit 1 undirected
  for (const CanyonTriangle& ct : m.triangles) {
    if (ct.kind == CanyonKind::NonCanyon) continue;
    const std::uint8_t bit = ct.kind == CanyonKind::Directed ? 1 : 2;
    const auto& face = m.cdt.faces[ct.face];
    if (options.adjacency == RoleAdjacency::SharedVertex) {
      for (const int v : face.v)
        for (const int b : corner_of[v]) touches[b] |= bit;
    } else {
      for (int e = 0; e < 3; ++e) {
        if (!face.fixed[e]) continue;
        const Point2& p = m.cdt.vertices[face.v[e]];
        const Point2& q = m.cdt.vertices[face.v[(e + 1) % 3]];
        const Point2 mid = 0.5 * (p + q);
        for (const std::uint32_t b : m.building_index.query(Box2(mid, mid))) {
          const Polygon& fp = m.buildings[b].footprint;
          if (locate_in_ring(mid, fp.exterior) == Location::Boundary) {
            touches[b] |= bit;
            continue;
          }
          for (const Ring& h : fp.holes)
            if (locate_in_ring(mid, h) == Location::Boundary) touches[b] |= bit;
        }
      }
    }
  }
  m.roles.resize(m.buildings.size());
  for (std::size_t b = 0; b < m.buildings.size(); ++b) {
    switch (touches[b]) {
      case 1: m.roles[b] = BuildingRole::DirectedOnly; break;
      case 2: m.roles[b] = BuildingRole::UndirectedOnly; break;
      case 3: m.roles[b] = BuildingRole::Both; break;
      default: m.roles[b] = BuildingRole::None; break;
    }
  }
  m.boundary = directed_boundary(m);
  std::vector<Box2> edge_boxes;
  for (const BoundaryEdge& e : m.boundary)
    edge_boxes.push_back(Box2(e.segment.a.cwiseMin(e.segment.b), e.segment.a.cwiseMax(e.segment.b)));
  m.boundary_index = SpatialIndex(edge_boxes);
  return m;
}

std::vector<BoundaryEdge> directed_boundary(const CanyonModel& m) {
  std::vector<BoundaryEdge> out;
  auto directed = [&](int face) {
    if (face < 0) return false;
    const int t = m.triangle_of_face[face];
    return t >= 0 && m.triangles[t].kind == CanyonKind::Directed;
  };
  for (const CanyonTriangle& ct : m.triangles) {
    if (ct.kind != CanyonKind::Directed) continue;
    const auto& face = m.cdt.faces[ct.face];
    for (int e = 0; e < 3; ++e) {
      if (directed(face.nb[e])) continue;
      const Point2& p = m.cdt.vertices[face.v[e]];
      const Point2& q = m.cdt.vertices[face.v[(e + 1) % 3]];
      const bool wall = face.fixed[e] && m.on_wall(p, q);
      out.push_back(BoundaryEdge{Segment{p, q}, wall ? EdgeRole::Wall : EdgeRole::Gap});
    }
  }
  return out;
}

namespace {

bool centroid_in(const Box2& cell, const Point2& c) {
  return c.x() >= cell.min().x() && c.x() < cell.max().x() && c.y() >= cell.min().y() &&
         c.y() < cell.max().y();
}

Polygon as_polygon(const Triangle& t) { return Polygon{{t.a, t.b, t.c}, {}}; }

}  // namespace

void cell_canyon_stats(const Box2& cell, std::span<const CanyonTriangle> triangles,
                       CanyonCellStats& out) {
  double wsum[2] = {0, 0};
  int wn[2] = {0, 0};
  double area[2] = {0, 0};
  for (const CanyonTriangle& t : triangles) {
    if (t.kind == CanyonKind::NonCanyon) continue;
    const int k = t.kind == CanyonKind::Directed ? 0 : 1;
    if (centroid_in(cell, t.tri.centroid())) {
      wsum[k] += t.width;
      ++wn[k];
    }
    const Box2 tb = bounds(t.tri);
    if (cell.contains(tb))
      area[k] += t.area;
    else if (cell.intersects(tb))
      area[k] += clipped_area(as_polygon(t.tri), cell);
  }
  out.mdc_area = area[0];
  out.muc_area = area[1];
  const double total = area[0] + area[1];
  if (total > 0.0) {
    out.mdc_ratio = area[0] / total;
    out.muc_ratio = 1.0 - *out.mdc_ratio;
    if (wn[0]) out.mdc_width = wsum[0] / wn[0];
    if (wn[1]) out.muc_width = wsum[1] / wn[1];
  }
}

Maybe weighted_building_height(std::span<const double> areas, std::span<const double> heights) {
  double sh = 0.0, s = 0.0;
  for (std::size_t i = 0; i < areas.size(); ++i) {
    sh += areas[i] * heights[i];
    s += areas[i];
  }
  if (!(s > 0.0)) return std::nullopt;
  return sh / s;
}

void role_ratios(double directed, double both, double undirected, CanyonCellStats& out) {
  const double total = directed + both + undirected;
  if (!(total > 0.0)) return;
  out.bldc_ratio = directed / total;
  out.blduc_ratio = both / total;
  out.bluc_ratio = undirected / total;
}

Maybe frontal_ratio(double wall_length, double gap_length) {
  if (!(gap_length > 0.0)) return std::nullopt;
  return wall_length / gap_length;
}

CanyonCellStats canyon_cell_stats(const CanyonModel& m, const Box2& cell) {
  CanyonCellStats out;
  std::vector<CanyonTriangle> local;
  for (const std::uint32_t id : m.triangle_index.query(cell)) local.push_back(m.triangles[id]);
  cell_canyon_stats(cell, local, out);

  std::vector<double> areas, heights;
  double role_area[4] = {0, 0, 0, 0};
  for (const std::uint32_t b : m.building_index.query(cell)) {
    const double a = clipped_area(m.buildings[b].footprint, cell);
    if (!(a > 0.0)) continue;
    areas.push_back(a);
    heights.push_back(m.buildings[b].height);
    role_area[static_cast<int>(m.roles[b])] += a;
  }
  out.bld_mean_height = weighted_building_height(areas, heights);
  role_ratios(role_area[1], role_area[2], role_area[3], out);

  double wall = 0.0, gap = 0.0;
  for (const std::uint32_t id : m.boundary_index.query(cell)) {
    const BoundaryEdge& e = m.boundary[id];
    const auto clipped = clip_segment_to_rect(e.segment.a, e.segment.b, cell);
    if (!clipped) continue;
    const double len = (clipped->b - clipped->a).norm();
    (e.role == EdgeRole::Wall ? wall : gap) += len;
  }
  out.front_index = frontal_ratio(wall, gap);
  return out;
}

void write_canyon_geojson(const CanyonModel& m, const std::filesystem::path& path) {
  using nlohmann::json;
  static const char* kinds[] = {"directed", "undirected", "none"};
  static const char* roles[] = {"none", "directed", "both", "undirected"};
  json features = json::array();
  auto ring_json = [](const Ring& r) {
    json ring = json::array();
    for (const Point2& p : r) ring.push_back({p.x(), p.y()});
    ring.push_back({r.front().x(), r.front().y()});
    return ring;
  };
  for (const CanyonTriangle& t : m.triangles) {
    json props = {{"layer", "triangle"}, {"kind", kinds[static_cast<int>(t.kind)]}, {"area", t.area}};
    if (t.kind != CanyonKind::NonCanyon) props["width"] = t.width;
    features.push_back({{"type", "Feature"},
                        {"properties", props},
                        {"geometry",
                         {{"type", "Polygon"}, {"coordinates", {ring_json({t.tri.a, t.tri.b, t.tri.c})}}}}});
  }
  for (std::size_t b = 0; b < m.buildings.size(); ++b) {
    json coords = json::array({ring_json(m.buildings[b].footprint.exterior)});
    for (const Ring& h : m.buildings[b].footprint.holes) coords.push_back(ring_json(h));
    features.push_back({{"type", "Feature"},
                        {"properties",
                         {{"layer", "building"},
                          {"role", roles[static_cast<int>(m.roles[b])]},
                          {"height", m.buildings[b].height}}},
                        {"geometry", {{"type", "Polygon"}, {"coordinates", coords}}}});
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << json{{"type", "FeatureCollection"}, {"features", features}}.dump() << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace ucp
