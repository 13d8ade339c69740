#pragma once

#include "ucp/types.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace ucp {

/// Uniform-grid bucket index over bounding boxes. Built once, then queried
/// concurrently; queries return a superset of the items whose box intersects
/// the query box, sorted by id.
class SpatialIndex {
 public:
  SpatialIndex() = default;
  SpatialIndex(std::span<const Box2> boxes, double bucket_size = 0.0);

  std::vector<std::uint32_t> query(const Box2& box) const;

  std::size_t size() const { return boxes_.size(); }
  bool empty() const { return boxes_.empty(); }
  const Box2& box(std::uint32_t id) const { return boxes_[id]; }

 private:
  std::pair<long, long> bucket_of(const Point2& p) const;

  std::vector<Box2> boxes_;
  Point2 origin_ = Point2::Zero();
  double bucket_ = 1.0;
  long ncols_ = 0, nrows_ = 0;
  std::vector<std::uint32_t> offsets_;  // CSR layout: bucket -> [offsets_[b], offsets_[b+1])
  std::vector<std::uint32_t> items_;
};

}  // namespace ucp
