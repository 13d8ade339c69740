#pragma once

#include "ucp/types.hpp"

#include <optional>
#include <span>
#include <vector>

namespace ucp {

/// Shoelace area, positive for counter-clockwise rings.
double signed_area(std::span<const Point2> ring);

/// Area of the exterior minus the holes. Throws DegenerateGeometry for rings
/// with fewer than three distinct vertices or zero area.
double polygon_area(const Polygon& poly);

double triangle_area(const Triangle& tri);

/// Reorients rings in place: exterior counter-clockwise, holes clockwise.
void normalize_orientation(Polygon& poly);

/// True when no two non-adjacent edges of the ring touch.
bool ring_is_simple(std::span<const Point2> ring);

Box2 bounds(std::span<const Point2> pts);
Box2 bounds(const Polygon& poly);
inline Box2 bounds(const Polyline& line) { return bounds(line.vertices); }
Box2 bounds(const Triangle& tri);

enum class Location { Outside, Boundary, Inside };

Location locate_in_ring(const Point2& p, std::span<const Point2> ring);

/// Even-odd containment; points on any ring boundary count as inside.
bool point_in_polygon(const Point2& p, const Polygon& poly);

bool point_in_triangle(const Point2& p, const Triangle& tri);

/// Closed-segment intersection test (touching counts).
bool segments_intersect(const Point2& a, const Point2& b, const Point2& c, const Point2& d);

/// True iff segment ab touches the interior or boundary of tri.
bool segment_intersects_triangle(const Point2& a, const Point2& b, const Point2& c0,
                                 const Point2& c1, const Point2& c2);
inline bool segment_intersects_triangle(const Segment& s, const Triangle& tri) {
  return segment_intersects_triangle(s.a, s.b, tri.a, tri.b, tri.c);
}

/// Liang-Barsky clip of a segment against a closed rectangle.
std::optional<Segment> clip_segment_to_rect(const Point2& a, const Point2& b, const Box2& rect);

/// Polygon clipped to an axis-aligned rectangle. Pieces that would touch
/// themselves are returned as separate simple polygons; empty when disjoint.
std::vector<Polygon> clip_polygon_to_rect(const Polygon& poly, const Box2& rect);

/// Area of poly inside rect (sum of the clipped pieces).
double clipped_area(const Polygon& poly, const Box2& rect);

double polyline_length(const Polyline& line);

double distance_to_segment(const Point2& p, const Point2& a, const Point2& b);

}  // namespace ucp
