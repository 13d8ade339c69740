#include "ucp/direction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ucp {

double line_azimuth(const Point2& a, const Point2& b) {
  double dx = b.x() - a.x(), dy = b.y() - a.y();
  if (dx < 0.0 || (dx == 0.0 && dy < 0.0)) {
    dx = -dx;
    dy = -dy;
  }
  // Quantized to 1e-9 degrees: coordinate rounding (~1e-11 degrees over
  // street lengths) must not move a bearing lying on a class boundary.
  const double az = std::round(std::atan2(dx, dy) * (180.0 / std::numbers::pi) * 1e9) / 1e9;
  return az >= 180.0 ? 0.0 : az;
}

std::vector<StreetSegment> split_segments_by_grid(std::span<const Polyline> roads, const GridSpec& grid) {
  std::vector<StreetSegment> out;
  const double res = grid.resolution;
  const Point2& o = grid.origin;
  std::vector<double> ts;
  for (const Polyline& line : roads) {
    for (std::size_t i = 0; i + 1 < line.vertices.size(); ++i) {
      Point2 a = line.vertices[i], b = line.vertices[i + 1];
      if (b.x() < a.x() || (b.x() == a.x() && b.y() < a.y())) std::swap(a, b);
      const Point2 d = b - a;
      if (d.x() == 0.0 && d.y() == 0.0) continue;
      const double az = line_azimuth(a, b);
      ts.assign({0.0, 1.0});
      for (int axis = 0; axis < 2; ++axis) {
        if (d[axis] == 0.0) continue;
        const double lo = std::min(a[axis], b[axis]), hi = std::max(a[axis], b[axis]);
        for (double k = std::ceil((lo - o[axis]) / res); o[axis] + k * res < hi; ++k) {
          const double t = (o[axis] + k * res - a[axis]) / d[axis];
          if (t > 0.0 && t < 1.0) ts.push_back(t);
        }
      }
      std::sort(ts.begin(), ts.end());
      ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
      for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
        const Point2 p = ts[k] == 0.0 ? a : Point2(a + ts[k] * d);
        const Point2 q = ts[k + 1] == 1.0 ? b : Point2(a + ts[k + 1] * d);
        const double len = (q - p).norm();
        if (len == 0.0) continue;
        const Point2 mid = 0.5 * (p + q);
        const int col = static_cast<int>(std::floor((mid.x() - o.x()) / res));
        const int up = static_cast<int>(std::floor((mid.y() - o.y()) / res));
        if (col < 0 || up < 0 || col >= grid.ncols || up >= grid.nrows) continue;
        const int row = grid.nrows - 1 - up;
        out.push_back(StreetSegment{Segment{p, q}, len, az, row * grid.ncols + col});
      }
    }
  }
  return out;
}

AzimuthHistogram azimuth_histogram(std::span<const StreetSegment> segments, int n) {
  AzimuthHistogram hist;
  hist.n = n;
  hist.h = 180.0 / n;
  std::vector<std::vector<double>> bins(n);
  for (const StreetSegment& s : segments) {
    const int k = std::min(n - 1, static_cast<int>(std::floor(s.azimuth * n / 180.0)));
    bins[k].push_back(s.length);
  }
  // Summed in a fixed order so the result does not depend on input order.
  hist.L.assign(n, 0.0);
  for (int k = 0; k < n; ++k) {
    std::sort(bins[k].begin(), bins[k].end());
    for (const double l : bins[k]) hist.L[k] += l;
  }
  return hist;
}

namespace {

double mode_position(const AzimuthHistogram& hist, int i) {
  const int n = hist.n;
  const double li = hist.L[i], lp = hist.L[(i + n - 1) % n], ln = hist.L[(i + 1) % n];
  const double denom = 2.0 * li - lp - ln;
  double m = denom == 0.0 ? i * hist.h + 0.5 * hist.h : i * hist.h + hist.h * (li - lp) / denom;
  if (m >= 180.0) m -= 180.0;
  return m;
}

}  // namespace

DirectionResult find_modes(const AzimuthHistogram& hist) {
  DirectionResult r;
  const int n = hist.n;
  if (n == 0) return r;
  const int m = static_cast<int>(std::max_element(hist.L.begin(), hist.L.end()) - hist.L.begin());
  if (!(hist.L[m] > 0.0)) return r;
  r.dir1 = mode_position(hist, m);

  int second = -1;
  for (int i = 0; i < n; ++i) {
    if (i == m || i == (m + 1) % n || i == (m + n - 1) % n) continue;
    const double li = hist.L[i];
    if (!(li > 0.0) || li < hist.L[(i + n - 1) % n] || li < hist.L[(i + 1) % n]) continue;
    if (second < 0 || li > hist.L[second]) second = i;
  }
  if (second >= 0) {
    r.dir2 = mode_position(hist, second);
    r.ratio = hist.L[m] / hist.L[second];
  }
  return r;
}

std::array<DirectionResult, 3> direction_params(std::span<const StreetSegment> segments) {
  std::array<DirectionResult, 3> out;
  for (std::size_t k = 0; k < kDirectionClasses.size(); ++k)
    out[k] = find_modes(azimuth_histogram(segments, kDirectionClasses[k]));
  return out;
}

}  // namespace ucp
