#pragma once
// Independent reference computations used only by tests. Nothing here calls
// into the library code paths being checked.

#include "ucp/types.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace oracle {

using ucp::Point2;

inline bool inside_ring_sample(const Point2& p, const std::vector<Point2>& ring) {
  bool in = false;
  for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
    const Point2& a = ring[j];
    const Point2& b = ring[i];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < x) in = !in;
    }
  }
  return in;
}

inline bool inside_polygon_sample(const Point2& p, const ucp::Polygon& poly) {
  if (!inside_ring_sample(p, poly.exterior)) return false;
  for (const auto& h : poly.holes)
    if (inside_ring_sample(p, h)) return false;
  return true;
}

/// Area of poly inside rect by midpoint sampling at `step`.
inline double sampled_area(const ucp::Polygon& poly, const ucp::Box2& rect, double step) {
  long count = 0;
  const long nx = std::lround(rect.sizes().x() / step);
  const long ny = std::lround(rect.sizes().y() / step);
  for (long j = 0; j < ny; ++j) {
    const double y = rect.min().y() + (j + 0.5) * step;
    for (long i = 0; i < nx; ++i) {
      const double x = rect.min().x() + (i + 0.5) * step;
      if (inside_polygon_sample(Point2(x, y), poly)) ++count;
    }
  }
  return count * step * step;
}

/// Twice the signed area in long double.
inline long double cross(const Point2& o, const Point2& a, const Point2& b) {
  return (static_cast<long double>(a.x()) - o.x()) * (static_cast<long double>(b.y()) - o.y()) -
         (static_cast<long double>(a.y()) - o.y()) * (static_cast<long double>(b.x()) - o.x());
}

/// Number of input points on the convex hull boundary, collinear ones included.
inline int hull_boundary_count(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return static_cast<int>(pts.size());
  std::vector<Point2> h;
  for (int pass = 0; pass < 2; ++pass) {
    const std::size_t base = h.size();
    for (const Point2& p : pts) {
      while (h.size() >= base + 2 && cross(h[h.size() - 2], h.back(), p) < 0) h.pop_back();
      h.push_back(p);
    }
    h.pop_back();
    std::reverse(pts.begin(), pts.end());
  }
  return static_cast<int>(h.size());
}

/// True when p lies strictly inside the circumcircle of a, b, c (relative slack).
inline bool strictly_in_circumcircle(const Point2& a, const Point2& b, const Point2& c,
                                     const Point2& p) {
  using L = long double;
  // Work relative to a; squaring map-scale coordinates loses the slack.
  const L ax = 0, ay = 0;
  const L bx = L(b.x()) - a.x(), by = L(b.y()) - a.y(), cx = L(c.x()) - a.x(), cy = L(c.y()) - a.y();
  const L px = L(p.x()) - a.x(), py = L(p.y()) - a.y();
  const L d = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
  const L ux = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay) +
                (cx * cx + cy * cy) * (ay - by)) / d;
  const L uy = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx) +
                (cx * cx + cy * cy) * (bx - ax)) / d;
  const L r2 = (ax - ux) * (ax - ux) + (ay - uy) * (ay - uy);
  const L d2 = (px - ux) * (px - ux) + (py - uy) * (py - uy);
  return d2 < r2 * (1 - 1e-9L);
}

inline bool point_in_triangle_sample(const Point2& p, const Point2& a, const Point2& b,
                                     const Point2& c, long double slack) {
  const long double d1 = cross(a, b, p), d2 = cross(b, c, p), d3 = cross(c, a, p);
  const bool neg = d1 < -slack || d2 < -slack || d3 < -slack;
  const bool pos = d1 > slack || d2 > slack || d3 > slack;
  return !(neg && pos);
}

/// Dense sampling along a segment against a closed triangle.
inline bool segment_hits_triangle_sampled(const Point2& s0, const Point2& s1, const Point2& a,
                                          const Point2& b, const Point2& c, int samples = 20000) {
  for (int i = 0; i <= samples; ++i) {
    const double t = static_cast<double>(i) / samples;
    if (point_in_triangle_sample(s0 + t * (s1 - s0), a, b, c, 1e-9L)) return true;
  }
  return false;
}

}  // namespace oracle
