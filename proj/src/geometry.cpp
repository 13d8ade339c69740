#include "ucp/geometry.hpp"

#include "ucp/errors.hpp"
#include "ucp/predicates.hpp"

#include <algorithm>
#include <cmath>

namespace ucp {

double signed_area(std::span<const Point2> ring) {
  const std::size_t n = ring.size();
  if (n < 3) return 0.0;
  // Shift to the first vertex to keep cancellation small at UTM magnitudes.
  const Point2 o = ring[0];
  double twice = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const Point2 p = ring[i] - o;
    const Point2 q = ring[i + 1] - o;
    twice += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * twice;
}

namespace {

std::size_t distinct_vertices(std::span<const Point2> ring) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Point2& next = ring[(i + 1) % ring.size()];
    if (ring[i] != next) ++count;
  }
  return count;
}

void check_ring(std::span<const Point2> ring, const char* what) {
  if (distinct_vertices(ring) < 3 || signed_area(ring) == 0.0)
    throw DegenerateGeometry(std::string("degenerate ") + what + " ring");
}

}  // namespace

double polygon_area(const Polygon& poly) {
  check_ring(poly.exterior, "exterior");
  double area = std::abs(signed_area(poly.exterior));
  for (const Ring& hole : poly.holes) {
    check_ring(hole, "hole");
    area -= std::abs(signed_area(hole));
  }
  if (!(area > 0.0)) throw DegenerateGeometry("polygon has no positive area");
  return area;
}

double triangle_area(const Triangle& tri) {
  const Point2 u = tri.b - tri.a;
  const Point2 v = tri.c - tri.a;
  return 0.5 * std::abs(u.x() * v.y() - u.y() * v.x());
}

void normalize_orientation(Polygon& poly) {
  if (signed_area(poly.exterior) < 0.0) std::reverse(poly.exterior.begin(), poly.exterior.end());
  for (Ring& hole : poly.holes)
    if (signed_area(hole) > 0.0) std::reverse(hole.begin(), hole.end());
}

bool ring_is_simple(std::span<const Point2> ring) {
  const std::size_t n = ring.size();
  if (n < 3) return false;
  std::vector<Box2> boxes(n);
  for (std::size_t i = 0; i < n; ++i) {
    boxes[i] = Box2(ring[i], ring[i]);
    boxes[i].extend(ring[(i + 1) % n]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = ring[i];
    const Point2& b = ring[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!boxes[i].intersects(boxes[j])) continue;
      const Point2& c = ring[j];
      const Point2& d = ring[(j + 1) % n];
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) {
        // Neighbouring edges may only share their common vertex; a fold-back
        // makes them overlap.
        const Point2& shared = (j == i + 1) ? b : a;
        const Point2& p = (j == i + 1) ? a : b;
        const Point2& q = (j == i + 1) ? d : c;
        if (orient2d(p, shared, q) == 0.0 && (p - shared).dot(q - shared) > 0.0) return false;
        continue;
      }
      if (segments_intersect(a, b, c, d)) return false;
    }
  }
  return true;
}

Box2 bounds(std::span<const Point2> pts) {
  Box2 box;
  for (const Point2& p : pts) box.extend(p);
  return box;
}

Box2 bounds(const Polygon& poly) { return bounds(poly.exterior); }

Box2 bounds(const Triangle& tri) {
  Box2 box(tri.a, tri.a);
  box.extend(tri.b);
  box.extend(tri.c);
  return box;
}

namespace {

bool on_segment(const Point2& p, const Point2& a, const Point2& b) {
  if (orient2d(a, b, p) != 0.0) return false;
  return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) &&
         std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
}

}  // namespace

Location locate_in_ring(const Point2& p, std::span<const Point2> ring) {
  const std::size_t n = ring.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2& a = ring[j];
    const Point2& b = ring[i];
    if (on_segment(p, a, b)) return Location::Boundary;
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      // Exact side test replaces the usual interpolated crossing abscissa.
      const double o = orient2d(a, b, p);
      if ((b.y() > a.y()) == (o > 0.0)) inside = !inside;
    }
  }
  return inside ? Location::Inside : Location::Outside;
}

bool point_in_polygon(const Point2& p, const Polygon& poly) {
  const Location outer = locate_in_ring(p, poly.exterior);
  if (outer == Location::Outside) return false;
  if (outer == Location::Boundary) return true;
  for (const Ring& hole : poly.holes) {
    const Location h = locate_in_ring(p, hole);
    if (h == Location::Inside) return false;
    if (h == Location::Boundary) return true;
  }
  return true;
}

bool point_in_triangle(const Point2& p, const Triangle& tri) {
  const double d1 = orient2d(tri.a, tri.b, p);
  const double d2 = orient2d(tri.b, tri.c, p);
  const double d3 = orient2d(tri.c, tri.a, p);
  const bool has_neg = d1 < 0 || d2 < 0 || d3 < 0;
  const bool has_pos = d1 > 0 || d2 > 0 || d3 > 0;
  return !(has_neg && has_pos);
}

bool segments_intersect(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
  const double o1 = orient2d(a, b, c);
  const double o2 = orient2d(a, b, d);
  const double o3 = orient2d(c, d, a);
  const double o4 = orient2d(c, d, b);
  if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0)))
    return true;
  if (o1 == 0.0 && on_segment(c, a, b)) return true;
  if (o2 == 0.0 && on_segment(d, a, b)) return true;
  if (o3 == 0.0 && on_segment(a, c, d)) return true;
  if (o4 == 0.0 && on_segment(b, c, d)) return true;
  return false;
}

bool segment_intersects_triangle(const Point2& a, const Point2& b, const Point2& c0,
                                 const Point2& c1, const Point2& c2) {
  const Triangle tri{c0, c1, c2};
  if (point_in_triangle(a, tri) || point_in_triangle(b, tri)) return true;
  return segments_intersect(a, b, c0, c1) || segments_intersect(a, b, c1, c2) ||
         segments_intersect(a, b, c2, c0);
}

std::optional<Segment> clip_segment_to_rect(const Point2& a, const Point2& b, const Box2& rect) {
  const Point2 d = b - a;
  double t0 = 0.0, t1 = 1.0;
  const double p[4] = {-d.x(), d.x(), -d.y(), d.y()};
  const double q[4] = {a.x() - rect.min().x(), rect.max().x() - a.x(), a.y() - rect.min().y(),
                       rect.max().y() - a.y()};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return std::nullopt;
      continue;
    }
    const double t = q[i] / p[i];
    if (p[i] < 0.0) {
      if (t > t1) return std::nullopt;
      t0 = std::max(t0, t);
    } else {
      if (t < t0) return std::nullopt;
      t1 = std::min(t1, t);
    }
  }
  auto at = [&](double t) -> Point2 {
    if (t == 0.0) return a;
    if (t == 1.0) return b;
    Point2 p = a + t * d;
    return p.cwiseMax(rect.min()).cwiseMin(rect.max());
  };
  return Segment{at(t0), at(t1)};
}

double polyline_length(const Polyline& line) {
  double len = 0.0;
  for (std::size_t i = 1; i < line.vertices.size(); ++i)
    len += (line.vertices[i] - line.vertices[i - 1]).norm();
  return len;
}

double distance_to_segment(const Point2& p, const Point2& a, const Point2& b) {
  const Point2 d = b - a;
  const double len2 = d.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(d) / len2, 0.0, 1.0);
  return (p - (a + t * d)).norm();
}

}  // namespace ucp
