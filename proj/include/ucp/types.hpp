#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <optional>
#include <vector>

namespace ucp {

/// Projected easting/northing in meters.
using Point2 = Eigen::Vector2d;
using Box2 = Eigen::AlignedBox2d;

/// Closed ring stored without the repeated closing vertex.
using Ring = std::vector<Point2>;

/// Simple polygon; exterior counter-clockwise, holes clockwise.
struct Polygon {
  Ring exterior;
  std::vector<Ring> holes;
};

struct Polyline {
  std::vector<Point2> vertices;
};

struct Segment {
  Point2 a;
  Point2 b;
};

struct Triangle {
  Point2 a, b, c;

  std::array<double, 3> sides() const {
    return {(b - c).norm(), (c - a).norm(), (a - b).norm()};
  }
  Point2 centroid() const { return (a + b + c) / 3.0; }
};

/// Undefined numeric value (serialized as an empty CSV field).
using Maybe = std::optional<double>;

/// Snap tolerance for vertex deduplication and constraint matching, meters.
inline constexpr double kSnapTolerance = 1e-6;
/// Triangles below this area (m^2) are dropped from all statistics.
inline constexpr double kSliverArea = 1e-4;

inline Box2 make_box(double xmin, double ymin, double xmax, double ymax) {
  return Box2(Point2(xmin, ymin), Point2(xmax, ymax));
}

}  // namespace ucp
