#include "ucp/landcover.hpp"

#include "ucp/errors.hpp"
#include "ucp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ucp {

GridSpec make_grid(const Box2& aoi, double resolution, double snap) {
  if (!(resolution > 0.0)) throw ConfigError("grid resolution must be positive");
  if (aoi.isEmpty() || aoi.sizes().minCoeff() <= 0.0)
    throw ConfigError("area of interest must have positive extent");
  GridSpec g;
  g.resolution = resolution;
  g.origin = Point2(std::floor(aoi.min().x() / snap) * snap, std::floor(aoi.min().y() / snap) * snap);
  const double xmax = std::ceil(aoi.max().x() / snap) * snap;
  const double ymax = std::ceil(aoi.max().y() / snap) * snap;
  g.ncols = static_cast<int>(std::ceil((xmax - g.origin.x()) / resolution - 1e-9));
  g.nrows = static_cast<int>(std::ceil((ymax - g.origin.y()) / resolution - 1e-9));
  return g;
}

double RoadWidthTable::half_width(const Attributes& attrs) const {
  const auto it = attrs.find(key);
  if (it == attrs.end()) return default_half_width;
  for (const Rule& rule : rules) {
    std::size_t start = 0;
    while (true) {
      const std::size_t bar = rule.values.find('|', start);
      const std::string alt = rule.values.substr(start, bar == std::string::npos ? bar : bar - start);
      if (alt == it->second || alt == "*") return rule.half_width;
      if (bar == std::string::npos) break;
      start = bar + 1;
    }
  }
  return default_half_width;
}

std::vector<Polygon> buffer_polyline(const Polyline& line, double half_width) {
  std::vector<Polygon> out;
  if (!(half_width > 0.0)) return out;
  const auto& v = line.vertices;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const Point2 d = v[i + 1] - v[i];
    const double len = d.norm();
    if (len == 0.0) continue;
    const Point2 n = Point2(-d.y(), d.x()) * (half_width / len);
    out.push_back(Polygon{{v[i] - n, v[i + 1] - n, v[i + 1] + n, v[i] + n}, {}});
  }
  constexpr int kJoint = 16;
  for (const Point2& p : v) {
    Ring ring;
    ring.reserve(kJoint);
    for (int k = 0; k < kJoint; ++k) {
      const double a = 2.0 * std::numbers::pi * k / kJoint;
      ring.emplace_back(p.x() + half_width * std::cos(a), p.y() + half_width * std::sin(a));
    }
    out.push_back(Polygon{std::move(ring), {}});
  }
  return out;
}

LandcoverIndex::LandcoverIndex(std::span<const ClassifiedFeature> features,
                               const LandcoverParams& params, const Point2& pixel_origin)
    : built_(true), params_(params), origin_(pixel_origin) {
  if (!(params.landcover_res > 0.0)) throw ConfigError("landcover_res must be positive");
  std::array<int, 6> rank{};
  const int n = static_cast<int>(params.priority.size());
  for (int i = 0; i < n; ++i) rank[static_cast<int>(params.priority[i])] = n - i;

  auto add = [&](Polygon poly, SurfaceClass cls) {
    const int r = rank[static_cast<int>(cls)];
    if (r == 0 || cls == SurfaceClass::Other) return;  // Other is the background
    const Box2 box = bounds(poly);
    items_.push_back(Item{std::move(poly), box, static_cast<std::uint8_t>(r), cls});
  };
  for (const ClassifiedFeature& cf : features) {
    if (cf.feature->is_polygon()) {
      add(cf.feature->polygon(), cf.cls);
    } else if (cf.cls == SurfaceClass::Road) {
      const double hw = params.roads.half_width(cf.feature->attributes);
      for (Polygon& piece : buffer_polyline(cf.feature->polyline(), hw))
        add(std::move(piece), SurfaceClass::Road);
    }
  }
  std::vector<Box2> boxes;
  boxes.reserve(items_.size());
  for (const Item& it : items_) boxes.push_back(it.box);
  index_ = SpatialIndex(boxes);
}

namespace {

// Global subpixel index of the first centre at or after x.
long first_center_at_or_after(double x, double origin, double res) {
  return static_cast<long>(std::ceil((x - origin) / res - 0.5));
}

void collect_crossings(const Ring& ring, double y, std::vector<double>& xs) {
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = ring[i];
    const Point2& b = ring[(i + 1) % n];
    if ((a.y() <= y) == (b.y() <= y)) continue;
    xs.push_back(a.x() + (y - a.y()) * (b.x() - a.x()) / (b.y() - a.y()));
  }
}

}  // namespace

ClassAreas classify_cell(const Box2& cell, const LandcoverIndex& index) {
  if (!index.built()) throw IndexMissing("landcover index has not been built");
  const double res = index.params().landcover_res;
  const Point2& o = index.pixel_origin();
  const double side = cell.sizes().x();
  const long n = std::lround(side / res);
  if (n <= 0 || std::abs(n * res - side) > 1e-9 * side || std::abs(cell.sizes().y() - side) > 1e-9 * side)
    throw ConfigError("landcover_res must divide the cell side evenly");
  const long col0 = std::lround((cell.min().x() - o.x()) / res);
  const long row0 = std::lround((cell.min().y() - o.y()) / res);

  std::vector<std::uint8_t> paint(static_cast<std::size_t>(n * n), 0);
  std::vector<double> xs;
  for (const std::uint32_t id : index.index().query(cell)) {
    const auto& item = index.items()[id];
    const long r_lo = std::max(row0, first_center_at_or_after(item.box.min().y(), o.y(), res));
    const long r_hi = std::min(row0 + n, first_center_at_or_after(item.box.max().y(), o.y(), res) + 1);
    for (long r = r_lo; r < r_hi; ++r) {
      const double y = o.y() + (r + 0.5) * res;
      xs.clear();
      collect_crossings(item.poly.exterior, y, xs);
      for (const Ring& h : item.poly.holes) collect_crossings(h, y, xs);
      if (xs.size() < 2) continue;
      std::sort(xs.begin(), xs.end());
      std::uint8_t* row = paint.data() + (r - row0) * n;
      for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
        const long c_lo = std::max(col0, first_center_at_or_after(xs[k], o.x(), res));
        const long c_hi = std::min(col0 + n, first_center_at_or_after(xs[k + 1], o.x(), res));
        for (long c = c_lo; c < c_hi; ++c) row[c - col0] = std::max(row[c - col0], item.rank);
      }
    }
  }

  // rank -> class
  const auto& prio = index.params().priority;
  std::array<SurfaceClass, 256> cls_of{};
  cls_of[0] = SurfaceClass::Other;
  for (std::size_t i = 0; i < prio.size(); ++i) cls_of[prio.size() - i] = prio[i];
  std::array<std::int64_t, 256> hist{};
  for (const std::uint8_t p : paint) ++hist[p];
  std::array<std::int64_t, 6> count{};
  for (std::size_t r = 0; r <= prio.size(); ++r) count[static_cast<int>(cls_of[r])] += hist[r];

  ClassAreas out;
  const double px = res * res;
  const double total = static_cast<double>(n * n);
  double sum = 0.0;
  const int other = static_cast<int>(SurfaceClass::Other);
  for (int c = 0; c < 6; ++c) {
    out.area[c] = static_cast<double>(count[c]) * px;
    if (c == other) continue;
    out.ratio[c] = static_cast<double>(count[c]) / total;
    sum += out.ratio[c];
  }
  // Other takes whatever makes the ratios sum to exactly one.
  double rest = std::max(0.0, 1.0 - sum);
  for (int guard = 0; guard < 64 && sum + rest != 1.0; ++guard)
    rest = sum + rest < 1.0 ? std::nextafter(rest, 2.0) : std::nextafter(rest, -1.0);
  out.ratio[other] = rest;
  auto total_ratio = [&] {
    double s = 0.0;
    for (const double r : out.ratio) s += r;
    return s;
  };
  if (total_ratio() != 1.0) {
    // Five full classes can overshoot by an ulp; trim the largest one.
    const int big = static_cast<int>(std::max_element(out.ratio.begin(), out.ratio.end()) -
                                     out.ratio.begin());
    for (int guard = 0; guard < 64 && total_ratio() != 1.0; ++guard)
      out.ratio[big] = std::nextafter(out.ratio[big], total_ratio() < 1.0 ? 2.0 : -1.0);
  }
  return out;
}

std::array<double, 6> aggregate_city_means(std::span<const ClassAreas> cells) {
  if (cells.empty()) throw EmptyInput("no cells to aggregate");
  std::array<double, 6> mean{};
  for (const ClassAreas& c : cells)
    for (int k = 0; k < 6; ++k) mean[k] += c.ratio[k];
  for (double& m : mean) m /= static_cast<double>(cells.size());
  return mean;
}

}  // namespace ucp
