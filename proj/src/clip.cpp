#include "ucp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ucp {
namespace {

// Pieces of a ring inside the window. Open chains start and end on the window
// boundary; closed chains never leave the window.
struct Chain {
  std::vector<Point2> pts;
  bool closed = false;
  double entry = 0.0;  // perimeter parameter of pts.front()
  double exit = 0.0;   // perimeter parameter of pts.back()
};

bool strictly_outside(const Point2& p, const Box2& r) {
  return p.x() < r.min().x() || p.x() > r.max().x() || p.y() < r.min().y() || p.y() > r.max().y();
}

// Counter-clockwise arc-length parameter of a boundary point, starting at the
// lower-left corner.
double perimeter_param(const Point2& p, const Box2& r) {
  const double w = r.sizes().x(), h = r.sizes().y();
  const double db = std::abs(p.y() - r.min().y());
  const double dr = std::abs(p.x() - r.max().x());
  const double dt = std::abs(p.y() - r.max().y());
  const double dl = std::abs(p.x() - r.min().x());
  const double m = std::min({db, dr, dt, dl});
  if (m == db) return std::clamp(p.x() - r.min().x(), 0.0, w);
  if (m == dr) return w + std::clamp(p.y() - r.min().y(), 0.0, h);
  if (m == dt) return w + h + std::clamp(r.max().x() - p.x(), 0.0, w);
  return 2.0 * w + h + std::clamp(r.max().y() - p.y(), 0.0, h);
}

void push_unique(std::vector<Point2>& pts, const Point2& p) {
  if (pts.empty() || pts.back() != p) pts.push_back(p);
}

void chains_of_ring(const Ring& ring, const Box2& rect, std::vector<Chain>& out) {
  const std::size_t n = ring.size();
  std::size_t start = n;
  for (std::size_t i = 0; i < n; ++i)
    if (strictly_outside(ring[i], rect)) {
      start = i;
      break;
    }
  if (start == n) {
    // Convex window: every vertex inside means every edge inside.
    out.push_back(Chain{ring, true});
    return;
  }
  Chain cur;
  bool open = false;
  for (std::size_t k = 0; k < n; ++k) {
    const Point2& a = ring[(start + k) % n];
    const Point2& b = ring[(start + k + 1) % n];
    const auto piece = clip_segment_to_rect(a, b, rect);
    if (!piece) continue;
    if (!open) {
      cur = Chain{};
      cur.pts.push_back(piece->a);
      open = true;
    }
    push_unique(cur.pts, piece->b);
    if (strictly_outside(b, rect)) {
      open = false;
      if (cur.pts.size() >= 2) out.push_back(std::move(cur));
    }
  }
}

double ccw_distance(double from, double to, double perimeter) {
  double d = to - from;
  if (d < 0.0) d += perimeter;
  return d;
}

}  // namespace

std::vector<Polygon> clip_polygon_to_rect(const Polygon& input, const Box2& rect) {
  std::vector<Polygon> result;
  if (input.exterior.size() < 3) return result;
  if (!bounds(input).intersects(rect)) return result;

  Polygon poly = input;
  normalize_orientation(poly);

  std::vector<Chain> chains;
  chains_of_ring(poly.exterior, rect, chains);
  for (const Ring& hole : poly.holes) chains_of_ring(hole, rect, chains);

  const double w = rect.sizes().x(), h = rect.sizes().y();
  const double perimeter = 2.0 * (w + h);
  const std::array<Point2, 4> corners = {rect.min(), Point2(rect.max().x(), rect.min().y()),
                                         rect.max(), Point2(rect.min().x(), rect.max().y())};
  const std::array<double, 4> corner_param = {0.0, w, w + h, 2.0 * w + h};

  std::vector<std::size_t> open_ids;
  for (std::size_t i = 0; i < chains.size(); ++i) {
    if (chains[i].closed) continue;
    chains[i].entry = perimeter_param(chains[i].pts.front(), rect);
    chains[i].exit = perimeter_param(chains[i].pts.back(), rect);
    open_ids.push_back(i);
  }

  std::vector<Ring> outers;
  std::vector<Ring> inner;

  // Stitch open chains: polygon interior is on the left of every chain, and the
  // window boundary walked counter-clockwise keeps the window on the left.
  std::vector<bool> used(chains.size(), false);
  for (std::size_t first : open_ids) {
    if (used[first]) continue;
    Ring ring;
    std::size_t cur = first;
    while (true) {
      used[cur] = true;
      for (const Point2& p : chains[cur].pts) push_unique(ring, p);
      const double from = chains[cur].exit;
      std::size_t next = first;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t id : open_ids) {
        if (used[id] && id != first) continue;
        const double d = ccw_distance(from, chains[id].entry, perimeter);
        if (d < best) {
          best = d;
          next = id;
        }
      }
      // Window corners passed on the way to the next entry.
      std::vector<std::pair<double, Point2>> passed;
      for (int c = 0; c < 4; ++c) {
        const double d = ccw_distance(from, corner_param[c], perimeter);
        if (d > 0.0 && d < best) passed.emplace_back(d, corners[c]);
      }
      std::sort(passed.begin(), passed.end(),
                [](const auto& l, const auto& r) { return l.first < r.first; });
      for (const auto& [d, p] : passed) push_unique(ring, p);
      if (next == first) break;
      cur = next;
    }
    while (ring.size() > 1 && ring.front() == ring.back()) ring.pop_back();
    if (ring.size() >= 3 && signed_area(ring) > 0.0) outers.push_back(std::move(ring));
  }

  for (const Chain& c : chains) {
    if (!c.closed) continue;
    const double a = signed_area(c.pts);
    if (a > 0.0)
      outers.push_back(c.pts);
    else if (a < 0.0)
      inner.push_back(c.pts);
  }

  if (open_ids.empty()) {
    // No ring crosses the window boundary: the whole window is either inside
    // or outside the polygon. Probe a boundary point that touches no edge.
    const std::array<Point2, 8> probes = {
        corners[0], corners[1], corners[2], corners[3],
        0.5 * (corners[0] + corners[1]), 0.5 * (corners[1] + corners[2]),
        0.5 * (corners[2] + corners[3]), 0.5 * (corners[3] + corners[0])};
    for (const Point2& p : probes) {
      bool touches = locate_in_ring(p, poly.exterior) == Location::Boundary;
      for (const Ring& hole : poly.holes)
        touches = touches || locate_in_ring(p, hole) == Location::Boundary;
      if (touches) continue;
      if (point_in_polygon(p, poly)) {
        outers.push_back(Ring(corners.begin(), corners.end()));
      }
      break;
    }
  }

  result.reserve(outers.size());
  std::vector<double> outer_area(outers.size());
  for (std::size_t i = 0; i < outers.size(); ++i) {
    outer_area[i] = signed_area(outers[i]);
    result.push_back(Polygon{std::move(outers[i]), {}});
  }
  for (Ring& hole : inner) {
    // Smallest containing piece takes the hole.
    std::size_t owner = result.size();
    for (std::size_t i = 0; i < result.size(); ++i) {
      bool contained = false;
      for (const Point2& p : hole) {
        const Location loc = locate_in_ring(p, result[i].exterior);
        if (loc == Location::Boundary) continue;
        contained = loc == Location::Inside;
        break;
      }
      if (contained && (owner == result.size() || outer_area[i] < outer_area[owner])) owner = i;
    }
    if (owner < result.size()) result[owner].holes.push_back(std::move(hole));
  }
  return result;
}

double clipped_area(const Polygon& poly, const Box2& rect) {
  double area = 0.0;
  for (const Polygon& piece : clip_polygon_to_rect(poly, rect)) {
    area += signed_area(piece.exterior);
    for (const Ring& hole : piece.holes) area += signed_area(hole);
  }
  return area;
}

}  // namespace ucp
