#include "ucp/cdt.hpp"

#include "ucp/errors.hpp"
#include "ucp/geometry.hpp"
#include "ucp/predicates.hpp"
#include "ucp/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>
#include <stdexcept>
#include <map>

namespace ucp {

std::vector<Triangle> Cdt::triangles() const {
  std::vector<Triangle> out;
  out.reserve(faces.size());
  for (std::size_t f = 0; f < faces.size(); ++f) out.push_back(triangle(f));
  return out;
}

namespace {

constexpr int kNone = -1;
using Face = Cdt::Face;

inline int ccw(int e) { return (e + 1) % 3; }
inline int cw(int e) { return (e + 2) % 3; }

bool opposite_strict(double a, double b) { return (a > 0 && b < 0) || (a < 0 && b > 0); }

class Mesh {
 public:
  explicit Mesh(const std::vector<Point2>& pts) : pts_(pts), vface_(pts.size(), kNone) {}

  void sweep();
  void legalize_all();
  void insert_constraint(int a, int b);

  std::vector<Face> take_faces() { return std::move(faces_); }

 private:
  int add_face(int a, int b, int c) {
    faces_.push_back(Face{{a, b, c}, {kNone, kNone, kNone}, {false, false, false}});
    const int f = static_cast<int>(faces_.size()) - 1;
    vface_[a] = vface_[b] = vface_[c] = f;
    return f;
  }

  void link(int f, int e, int g, int h) {
    faces_[f].nb[e] = g;
    if (g != kNone) faces_[g].nb[h] = f;
  }

  int edge_index(int f, int a, int b) const {
    const Face& F = faces_[f];
    for (int e = 0; e < 3; ++e)
      if (F.v[e] == a && F.v[ccw(e)] == b) return e;
    return kNone;
  }

  int vertex_index(int f, int v) const {
    const Face& F = faces_[f];
    for (int k = 0; k < 3; ++k)
      if (F.v[k] == v) return k;
    throw std::logic_error("cdt: vertex/face map out of sync");
  }

  void repoint(int n, int from, int to) {
    if (n == kNone) return;
    for (int k = 0; k < 3; ++k)
      if (faces_[n].nb[k] == from) {
        faces_[n].nb[k] = to;
        return;
      }
  }

  // Calls fn(face, index of v in face) for every face around v; stops early
  // when fn returns true.
  template <class Fn>
  bool around(int v, Fn&& fn) const {
    const int start = vface_[v];
    if (start == kNone) return false;
    int f = start;
    int guard = 0;
    while (true) {
      const int k = vertex_index(f, v);
      if (fn(f, k)) return true;
      const int g = faces_[f].nb[cw(k)];
      if (g == kNone) break;
      f = g;
      if (f == start) return false;
      if (++guard > static_cast<int>(faces_.size())) throw std::logic_error("cdt: vertex star loop");
    }
    f = start;
    while (true) {
      const int k = vertex_index(f, v);
      const int g = faces_[f].nb[k];
      if (g == kNone) return false;
      f = g;
      if (fn(f, vertex_index(f, v))) return true;
      if (++guard > static_cast<int>(faces_.size())) throw std::logic_error("cdt: vertex star loop");
    }
  }

  // Face and edge index holding the undirected edge {p, q}, or {kNone, kNone}.
  std::pair<int, int> find_edge(int p, int q) const {
    std::pair<int, int> found{kNone, kNone};
    around(p, [&](int f, int k) {
      const Face& F = faces_[f];
      if (F.v[ccw(k)] == q) {
        found = {f, k};
        return true;
      }
      if (F.v[cw(k)] == q) {
        found = {f, cw(k)};
        return true;
      }
      return false;
    });
    return found;
  }

  void flip(int f, int e);
  bool mark_edge(int a, int b);
  void crossings(int s, int t, std::vector<EdgeIds>& crossed, int& split) const;

  const std::vector<Point2>& pts_;
  std::vector<Face> faces_;
  std::vector<int> vface_;
};

void Mesh::sweep() {
  const int n = static_cast<int>(pts_.size());
  if (n < 3) return;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    return pts_[i].x() < pts_[j].x() || (pts_[i].x() == pts_[j].x() && pts_[i].y() < pts_[j].y());
  });

  int k = 2;
  while (k < n && orient2d(pts_[order[0]], pts_[order[1]], pts_[order[k]]) == 0.0) ++k;
  if (k == n) return;  // all collinear

  std::vector<int> next(n, kNone), prev(n, kNone);
  std::vector<std::pair<int, int>> hedge(n, {kNone, kNone});
  auto hull_link = [&](int u, int w, int f, int e) {
    next[u] = w;
    prev[w] = u;
    hedge[u] = {f, e};
  };

  const int apex = order[k];
  std::vector<int> fan;
  if (orient2d(pts_[order[0]], pts_[order[1]], pts_[apex]) > 0.0) {
    for (int i = 0; i + 1 < k; ++i) fan.push_back(add_face(order[i], order[i + 1], apex));
    for (std::size_t i = 0; i + 1 < fan.size(); ++i) link(fan[i], 1, fan[i + 1], 2);
    for (int i = 0; i + 1 < k; ++i) hull_link(order[i], order[i + 1], fan[i], 0);
    hull_link(order[k - 1], apex, fan.back(), 1);
    hull_link(apex, order[0], fan.front(), 2);
  } else {
    for (int i = 0; i + 1 < k; ++i) fan.push_back(add_face(order[i + 1], order[i], apex));
    for (std::size_t i = 0; i + 1 < fan.size(); ++i) link(fan[i], 2, fan[i + 1], 1);
    for (int i = 0; i + 1 < k; ++i) hull_link(order[i + 1], order[i], fan[i], 0);
    hull_link(order[0], apex, fan.front(), 1);
    hull_link(apex, order[k - 1], fan.back(), 2);
  }

  int last = apex;
  for (int j = k + 1; j < n; ++j) {
    const int p = order[j];
    auto visible = [&](int u) { return orient2d(pts_[u], pts_[next[u]], pts_[p]) < 0.0; };
    int lo = last, hi = last;
    int guard = 0;
    while (visible(hi) && ++guard <= n) hi = next[hi];
    while (visible(prev[lo]) && ++guard <= 2 * n) lo = prev[lo];
    if (lo == hi) {
      int u = last;
      do {
        if (visible(u)) break;
        u = next[u];
      } while (u != last);
      if (!visible(u)) throw std::logic_error("cdt: sweep found no visible hull edge");
      lo = hi = u;
      while (visible(hi)) hi = next[hi];
      while (visible(prev[lo])) lo = prev[lo];
    }
    int first_face = kNone, prev_face = kNone;
    for (int u = lo; u != hi;) {
      const int w = next[u];
      const auto [hf, he] = hedge[u];
      const int f = add_face(w, u, p);
      link(f, 0, hf, he);
      if (prev_face != kNone)
        link(prev_face, 2, f, 1);
      else
        first_face = f;
      prev_face = f;
      u = w;
    }
    hull_link(lo, p, first_face, 1);
    hull_link(p, hi, prev_face, 2);
    last = p;
  }
}

void Mesh::flip(int f, int e) {
  const Face F = faces_[f];
  const int g = F.nb[e];
  const Face G = faces_[g];
  const int a = F.v[e], b = F.v[ccw(e)], c = F.v[cw(e)];
  const int h = edge_index(g, b, a);
  const int d = G.v[cw(h)];

  const int n_bc = F.nb[ccw(e)], n_ca = F.nb[cw(e)];
  const bool x_bc = F.fixed[ccw(e)], x_ca = F.fixed[cw(e)];
  const int n_ad = G.nb[ccw(h)], n_db = G.nb[cw(h)];
  const bool x_ad = G.fixed[ccw(h)], x_db = G.fixed[cw(h)];

  faces_[f] = Face{{c, a, d}, {n_ca, n_ad, g}, {x_ca, x_ad, false}};
  faces_[g] = Face{{d, b, c}, {n_db, n_bc, f}, {x_db, x_bc, false}};
  repoint(n_ad, g, f);
  repoint(n_bc, f, g);
  vface_[a] = f;
  vface_[c] = f;
  vface_[d] = f;
  vface_[b] = g;
}

void Mesh::legalize_all() {
  std::vector<std::pair<int, int>> stack;
  stack.reserve(faces_.size() * 3);
  for (int f = 0; f < static_cast<int>(faces_.size()); ++f)
    for (int e = 0; e < 3; ++e) stack.emplace_back(f, e);
  while (!stack.empty()) {
    const auto [f, e] = stack.back();
    stack.pop_back();
    const Face& F = faces_[f];
    const int g = F.nb[e];
    if (g == kNone || F.fixed[e]) continue;
    const int a = F.v[e], b = F.v[ccw(e)], c = F.v[cw(e)];
    const int h = edge_index(g, b, a);
    const int d = faces_[g].v[cw(h)];
    if (incircle(pts_[a], pts_[b], pts_[c], pts_[d]) <= 0.0) continue;
    flip(f, e);
    stack.emplace_back(f, 0);
    stack.emplace_back(f, 1);
    stack.emplace_back(g, 0);
    stack.emplace_back(g, 1);
  }
}

bool Mesh::mark_edge(int a, int b) {
  const auto [f, e] = find_edge(a, b);
  if (f == kNone) return false;
  faces_[f].fixed[e] = true;
  const int g = faces_[f].nb[e];
  if (g != kNone) faces_[g].fixed[edge_index(g, faces_[f].v[ccw(e)], faces_[f].v[e])] = true;
  return true;
}

void Mesh::crossings(int s, int t, std::vector<EdgeIds>& crossed, int& split) const {
  const Point2& S = pts_[s];
  const Point2& T = pts_[t];
  int face = kNone, edge = kNone;
  around(s, [&](int f, int k) {
    const int p = faces_[f].v[ccw(k)];
    const int q = faces_[f].v[cw(k)];
    const double op = orient2d(S, pts_[p], T);
    if (op == 0.0 && (pts_[p] - S).dot(T - S) > 0.0) {
      split = p;
      return true;
    }
    if (op > 0.0 && orient2d(S, pts_[q], T) < 0.0) {
      face = f;
      edge = ccw(k);
      return true;
    }
    return false;
  });
  if (split != kNone) return;
  if (face == kNone) throw std::logic_error("cdt: constraint leaves the triangulated hull");

  // Walk the corridor; v[edge] is right of s->t, v[edge+1] left.
  while (true) {
    const Face& F = faces_[face];
    if (F.fixed[edge])
      throw CrossingConstraints("constraint crosses an existing constrained edge");
    const int p = F.v[edge], q = F.v[ccw(edge)];
    crossed.push_back({p, q});
    const int g = F.nb[edge];
    if (g == kNone) throw std::logic_error("cdt: constraint walk left the hull");
    const int h = edge_index(g, q, p);
    const int r = faces_[g].v[cw(h)];
    if (r == t) return;
    const double o = orient2d(S, T, pts_[r]);
    if (o == 0.0) {
      split = r;
      crossed.clear();
      return;
    }
    face = g;
    edge = o > 0.0 ? ccw(h) : cw(h);
  }
}

void Mesh::insert_constraint(int a, int b) {
  std::vector<EdgeIds> pending{{a, b}};
  while (!pending.empty()) {
    const auto [s, t] = pending.back();
    pending.pop_back();
    if (s == t || mark_edge(s, t)) continue;
    std::vector<EdgeIds> crossed;
    int split = kNone;
    crossings(s, t, crossed, split);
    if (split != kNone) {
      pending.push_back({split, t});
      pending.push_back({s, split});
      continue;
    }
    const Point2& S = pts_[s];
    const Point2& T = pts_[t];
    std::deque<EdgeIds> queue(crossed.begin(), crossed.end());
    std::size_t stalls = 0;
    while (!queue.empty()) {
      const auto [p, q] = queue.front();
      queue.pop_front();
      const auto [f, e] = find_edge(p, q);
      if (f == kNone) throw std::logic_error("cdt: lost crossing edge");
      const Face& F = faces_[f];
      const int g = F.nb[e];
      const int h = edge_index(g, F.v[ccw(e)], F.v[e]);
      const int c = F.v[cw(e)], d = faces_[g].v[cw(h)];
      if (!opposite_strict(orient2d(pts_[c], pts_[d], pts_[p]), orient2d(pts_[c], pts_[d], pts_[q]))) {
        queue.push_back({p, q});
        if (++stalls > 4 * queue.size() + 16)
          throw std::logic_error("cdt: constraint recovery stalled");
        continue;
      }
      stalls = 0;
      flip(f, e);
      const bool still_crossing =
          c != s && c != t && d != s && d != t &&
          opposite_strict(orient2d(S, T, pts_[c]), orient2d(S, T, pts_[d])) &&
          opposite_strict(orient2d(pts_[c], pts_[d], S), orient2d(pts_[c], pts_[d], T));
      if (still_crossing) queue.push_back({c, d});
    }
    if (!mark_edge(s, t)) throw std::logic_error("cdt: constraint not recovered");
  }
}

// Interns points, merging those within `snap` of an existing vertex.
class VertexPool {
 public:
  VertexPool(std::vector<Point2>& vertices, double snap) : vertices_(vertices), snap_(snap) {
    for (int v = 0; v < static_cast<int>(vertices_.size()); ++v) index_[key(vertices_[v])].push_back(v);
  }

  int intern(const Point2& p) {
    const auto k = key(p);
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy = -1; dy <= 1; ++dy) {
        const auto it = index_.find({k.first + dx, k.second + dy});
        if (it == index_.end()) continue;
        for (int v : it->second)
          if ((vertices_[v] - p).norm() <= snap_) return v;
      }
    const int v = static_cast<int>(vertices_.size());
    vertices_.push_back(p);
    index_[k].push_back(v);
    return v;
  }

 private:
  std::pair<long long, long long> key(const Point2& p) const {
    const double cell = snap_ > 0.0 ? snap_ : 1e-12;
    return {static_cast<long long>(std::floor(p.x() / cell)),
            static_cast<long long>(std::floor(p.y() / cell))};
  }

  std::vector<Point2>& vertices_;
  double snap_;
  std::map<std::pair<long long, long long>, std::vector<int>> index_;
};

std::vector<EdgeIds> unique_edges(std::vector<EdgeIds> edges) {
  for (EdgeIds& e : edges)
    if (e[0] > e[1]) std::swap(e[0], e[1]);
  std::erase_if(edges, [](const EdgeIds& e) { return e[0] == e[1]; });
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

// One pre-noding pass; returns true when any segment was split.
bool prenode_pass(std::vector<Point2>& vertices, std::vector<EdgeIds>& segs, double snap) {
  std::vector<Box2> boxes;
  boxes.reserve(segs.size());
  for (const EdgeIds& s : segs) {
    Box2 b(vertices[s[0]], vertices[s[0]]);
    b.extend(vertices[s[1]]);
    boxes.emplace_back(b.min().array() - snap, b.max().array() + snap);
  }
  const SpatialIndex index(boxes);
  VertexPool pool(vertices, snap);
  std::vector<std::vector<int>> splits(segs.size());

  auto split_at = [&](std::size_t i, int v) {
    if (v != segs[i][0] && v != segs[i][1]) splits[i].push_back(v);
  };

  for (std::size_t i = 0; i < segs.size(); ++i) {
    for (std::uint32_t j : index.query(boxes[i])) {
      if (j <= i) continue;
      const int a = segs[i][0], b = segs[i][1], c = segs[j][0], d = segs[j][1];
      const Point2 A = vertices[a], B = vertices[b], C = vertices[c], D = vertices[d];
      // Endpoints lying on the other segment (T-junctions, collinear overlap).
      for (int v : {c, d})
        if (v != a && v != b && distance_to_segment(vertices[v], A, B) <= snap) split_at(i, v);
      for (int v : {a, b})
        if (v != c && v != d && distance_to_segment(vertices[v], C, D) <= snap) split_at(j, v);
      if (a == c || a == d || b == c || b == d) continue;
      const double o1 = orient2d(A, B, C), o2 = orient2d(A, B, D);
      const double o3 = orient2d(C, D, A), o4 = orient2d(C, D, B);
      if (!opposite_strict(o1, o2) || !opposite_strict(o3, o4)) continue;
      const Point2 r = B - A, s = D - C;
      const double denom = r.x() * s.y() - r.y() * s.x();
      if (denom == 0.0) continue;
      const Point2 w = C - A;
      const double t = (w.x() * s.y() - w.y() * s.x()) / denom;
      const int v = pool.intern(A + std::clamp(t, 0.0, 1.0) * r);
      split_at(i, v);
      split_at(j, v);
    }
  }

  bool changed = false;
  std::vector<EdgeIds> out;
  out.reserve(segs.size());
  for (std::size_t i = 0; i < segs.size(); ++i) {
    if (splits[i].empty()) {
      out.push_back(segs[i]);
      continue;
    }
    changed = true;
    const Point2 A = vertices[segs[i][0]];
    const Point2 dir = vertices[segs[i][1]] - A;
    std::vector<int>& mids = splits[i];
    std::sort(mids.begin(), mids.end(), [&](int u, int v) {
      return (vertices[u] - A).dot(dir) < (vertices[v] - A).dot(dir);
    });
    mids.erase(std::unique(mids.begin(), mids.end()), mids.end());
    int prev = segs[i][0];
    for (int v : mids) {
      out.push_back({prev, v});
      prev = v;
    }
    out.push_back({prev, segs[i][1]});
  }
  segs = unique_edges(std::move(out));
  return changed;
}

}  // namespace

Cdt constrained_delaunay(std::span<const Point2> points, std::span<const EdgeIds> constraints,
                         const CdtOptions& options) {
  Cdt out;
  {
    VertexPool pool(out.vertices, options.snap);
    out.vertex_of_input.reserve(points.size());
    for (const Point2& p : points) {
      if (!p.allFinite()) throw DegenerateGeometry("non-finite point coordinate");
      out.vertex_of_input.push_back(pool.intern(p));
    }
  }

  std::vector<EdgeIds> segs;
  segs.reserve(constraints.size());
  for (const EdgeIds& c : constraints) {
    if (c[0] < 0 || c[1] < 0 || c[0] >= static_cast<int>(points.size()) ||
        c[1] >= static_cast<int>(points.size()))
      throw std::out_of_range("constraint references a missing point");
    segs.push_back({out.vertex_of_input[c[0]], out.vertex_of_input[c[1]]});
  }
  segs = unique_edges(std::move(segs));

  if (options.prenode) {
    for (int pass = 0; pass < 8 && prenode_pass(out.vertices, segs, options.snap); ++pass) {
    }
  }

  Mesh mesh(out.vertices);
  mesh.sweep();
  mesh.legalize_all();
  for (const EdgeIds& s : segs) mesh.insert_constraint(s[0], s[1]);
  mesh.legalize_all();
  out.faces = mesh.take_faces();

  // Record the constrained edges actually present (constraints through
  // collinear vertices are split there).
  std::vector<EdgeIds> fixed;
  for (const Face& f : out.faces)
    for (int e = 0; e < 3; ++e)
      if (f.fixed[e]) fixed.push_back({f.v[e], f.v[ccw(e)]});
  out.constraints = unique_edges(std::move(fixed));
  return out;
}

}  // namespace ucp
