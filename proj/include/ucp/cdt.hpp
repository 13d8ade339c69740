#pragma once

#include "ucp/types.hpp"

#include <array>
#include <span>
#include <vector>

namespace ucp {

using EdgeIds = std::array<int, 2>;

struct CdtOptions {
  /// Points closer than this merge into one vertex.
  double snap = kSnapTolerance;
  /// Split crossing or overlapping constraints at their intersections. When
  /// disabled, crossing constraints raise CrossingConstraints.
  bool prenode = true;
};

/// Constrained Delaunay triangulation of a point set.
///
/// Faces are counter-clockwise vertex triples. Edge `e` of a face runs from
/// `v[e]` to `v[(e + 1) % 3]`; `nb[e]` is the face across it (-1 on the hull)
/// and `fixed[e]` marks constrained edges.
struct Cdt {
  struct Face {
    std::array<int, 3> v{};
    std::array<int, 3> nb{-1, -1, -1};
    std::array<bool, 3> fixed{};
  };

  std::vector<Point2> vertices;
  std::vector<Face> faces;
  /// Input point index -> vertex id after snapping.
  std::vector<int> vertex_of_input;
  /// Constrained edges after pre-noding, as vertex id pairs.
  std::vector<EdgeIds> constraints;

  Triangle triangle(std::size_t f) const {
    const Face& face = faces[f];
    return {vertices[face.v[0]], vertices[face.v[1]], vertices[face.v[2]]};
  }
  std::vector<Triangle> triangles() const;
};

/// Triangulates the convex hull of `points` so that every constraint segment
/// is a union of triangle edges and every other edge is locally Delaunay.
/// Fewer than three non-collinear points yield no faces.
Cdt constrained_delaunay(std::span<const Point2> points, std::span<const EdgeIds> constraints,
                         const CdtOptions& options = {});

}  // namespace ucp
