#include "ucp/spatial_index.hpp"

#include <algorithm>
#include <cmath>

namespace ucp {

SpatialIndex::SpatialIndex(std::span<const Box2> boxes, double bucket_size)
    : boxes_(boxes.begin(), boxes.end()) {
  if (boxes_.empty()) return;
  Box2 all;
  double mean_extent = 0.0;
  for (const Box2& b : boxes_) {
    all.extend(b);
    mean_extent += b.sizes().maxCoeff();
  }
  mean_extent /= static_cast<double>(boxes_.size());
  if (bucket_size <= 0.0) {
    // Aim for a few items per bucket without exploding the bucket count.
    const double area = std::max(all.sizes().prod(), 1.0);
    const double by_count = std::sqrt(area / static_cast<double>(boxes_.size()));
    bucket_size = std::max({mean_extent, by_count, 1e-3});
  }
  bucket_ = bucket_size;
  origin_ = all.min();
  ncols_ = static_cast<long>(std::floor(all.sizes().x() / bucket_)) + 1;
  nrows_ = static_cast<long>(std::floor(all.sizes().y() / bucket_)) + 1;
  while (ncols_ * nrows_ > 16'000'000) {
    bucket_ *= 2.0;
    ncols_ = static_cast<long>(std::floor(all.sizes().x() / bucket_)) + 1;
    nrows_ = static_cast<long>(std::floor(all.sizes().y() / bucket_)) + 1;
  }

  std::vector<std::uint32_t> counts(static_cast<std::size_t>(ncols_ * nrows_) + 1, 0);
  auto for_each_bucket = [&](const Box2& b, auto&& fn) {
    const auto [c0, r0] = bucket_of(b.min());
    const auto [c1, r1] = bucket_of(b.max());
    for (long r = r0; r <= r1; ++r)
      for (long c = c0; c <= c1; ++c) fn(static_cast<std::size_t>(r * ncols_ + c));
  };
  for (const Box2& b : boxes_) for_each_bucket(b, [&](std::size_t k) { ++counts[k + 1]; });
  for (std::size_t k = 1; k < counts.size(); ++k) counts[k] += counts[k - 1];
  offsets_ = counts;
  items_.resize(offsets_.back());
  std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::uint32_t id = 0; id < boxes_.size(); ++id)
    for_each_bucket(boxes_[id], [&](std::size_t k) { items_[fill[k]++] = id; });
}

std::pair<long, long> SpatialIndex::bucket_of(const Point2& p) const {
  const long c = static_cast<long>(std::floor((p.x() - origin_.x()) / bucket_));
  const long r = static_cast<long>(std::floor((p.y() - origin_.y()) / bucket_));
  return {std::clamp(c, 0L, ncols_ - 1), std::clamp(r, 0L, nrows_ - 1)};
}

std::vector<std::uint32_t> SpatialIndex::query(const Box2& box) const {
  std::vector<std::uint32_t> out;
  if (boxes_.empty() || box.isEmpty()) return out;
  const auto [c0, r0] = bucket_of(box.min());
  const auto [c1, r1] = bucket_of(box.max());
  for (long r = r0; r <= r1; ++r)
    for (long c = c0; c <= c1; ++c) {
      const std::size_t k = static_cast<std::size_t>(r * ncols_ + c);
      for (std::uint32_t i = offsets_[k]; i < offsets_[k + 1]; ++i) {
        const std::uint32_t id = items_[i];
        if (boxes_[id].intersects(box)) out.push_back(id);
      }
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace ucp
