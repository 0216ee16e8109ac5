#include "rotset/convex_hull.hpp"

#include <limits>
#include <numeric>
#include <set>

namespace rotset {

namespace {

double cross2(const Vec& o, const Vec& a, const Vec& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

Vec cross3(const Vec& a, const Vec& b) {
  return Vec{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

void build_planar(const std::vector<Vec>& pts, double eps, std::vector<std::size_t>& ids,
                  std::vector<Facet>& facets) {
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(pts[a][0], pts[a][1], a) < std::tie(pts[b][0], pts[b][1], b);
  });
  std::vector<std::size_t> chain;
  auto push = [&](std::size_t i, std::size_t floor) {
    while (chain.size() >= floor + 2 &&
           cross2(pts[chain[chain.size() - 2]], pts[chain.back()], pts[i]) <= eps)
      chain.pop_back();
    chain.push_back(i);
  };
  for (const auto i : order) push(i, 0);
  const std::size_t lower = chain.size() - 1;
  for (auto it = order.rbegin() + 1; it != order.rend(); ++it) push(*it, lower);
  chain.pop_back();
  ids = chain;
  if (ids.size() < 3) return;
  for (std::size_t n = 0; n < ids.size(); ++n) {
    const Vec& a = pts[ids[n]];
    const Vec& b = pts[ids[(n + 1) % ids.size()]];
    const Vec normal = normalized(Vec{b[1] - a[1], a[0] - b[0]});
    facets.push_back(Facet{normal, dot(normal, a), {ids[n], ids[(n + 1) % ids.size()]}});
  }
}

struct Tri {
  std::array<std::size_t, 3> v;
  Vec n;
  double off;
  bool alive = true;
};

bool build_spatial(const std::vector<Vec>& pts, double eps, std::vector<std::size_t>& ids,
                   std::vector<Facet>& facets) {
  const std::size_t n = pts.size();
  if (n < 4) return false;
  // Initial tetrahedron from extreme points.
  std::size_t i0 = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (pts[i][0] < pts[i0][0]) i0 = i;
  std::size_t i1 = i0;
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (const double d = norm(pts[i] - pts[i0]); d > best) best = d, i1 = i;
  if (best <= eps) return false;
  std::size_t i2 = i0;
  best = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (const double d = norm(cross3(pts[i1] - pts[i0], pts[i] - pts[i0])); d > best)
      best = d, i2 = i;
  if (best <= eps) return false;
  const Vec base_n = normalized(cross3(pts[i1] - pts[i0], pts[i2] - pts[i0]));
  std::size_t i3 = i0;
  best = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (const double d = std::abs(dot(base_n, pts[i] - pts[i0])); d > best) best = d, i3 = i;
  if (best <= eps) return false;

  const Vec inside = (pts[i0] + pts[i1] + pts[i2] + pts[i3]) * 0.25;
  std::vector<Tri> tris;
  auto add = [&](std::size_t a, std::size_t b, std::size_t c) {
    Vec nn = normalized(cross3(pts[b] - pts[a], pts[c] - pts[a]));
    if (dot(nn, inside - pts[a]) > 0.0) {
      std::swap(b, c);
      nn = -nn;
    }
    tris.push_back(Tri{{a, b, c}, nn, dot(nn, pts[a])});
  };
  add(i0, i1, i2);
  add(i0, i1, i3);
  add(i0, i2, i3);
  add(i1, i2, i3);

  for (std::size_t p = 0; p < n; ++p) {
    if (p == i0 || p == i1 || p == i2 || p == i3) continue;
    std::set<std::pair<std::size_t, std::size_t>> edges;
    bool any = false;
    for (auto& t : tris) {
      if (!t.alive || dot(t.n, pts[p]) - t.off <= eps) continue;
      any = true;
      t.alive = false;
      for (int e = 0; e < 3; ++e) edges.insert({t.v[e], t.v[(e + 1) % 3]});
    }
    if (!any) continue;
    for (const auto& [a, b] : edges)
      if (!edges.count({b, a})) add(a, b, p);
  }
  std::set<std::size_t> used;
  for (const auto& t : tris) {
    if (!t.alive) continue;
    facets.push_back(Facet{t.n, t.off, {t.v[0], t.v[1], t.v[2]}});
    used.insert(t.v.begin(), t.v.end());
  }
  ids.assign(used.begin(), used.end());
  return true;
}

}  // namespace

ConvexHull ConvexHull::build(const std::vector<Vec>& points, double eps) {
  if (points.empty()) fail(ErrorCode::kInvalidInput, "convex hull of an empty set");
  ConvexHull h;
  h.dim_ = points.front().dim();
  for (const auto& p : points)
    if (p.dim() != h.dim_) fail(ErrorCode::kInvalidInput, "mixed dimensions in hull input");
  if (h.dim_ == 2) {
    build_planar(points, eps, h.vertex_ids_, h.facets_);
    h.full_ = h.facets_.size() >= 3;
  } else if (h.dim_ == 3) {
    h.full_ = build_spatial(points, eps, h.vertex_ids_, h.facets_);
  } else {
    fail(ErrorCode::kNotImplemented, "convex hull is implemented for m = 2 and m = 3");
  }
  return h;
}

double ConvexHull::margin(const Vec& x) const {
  if (!full_) return -std::numeric_limits<double>::infinity();
  double m = std::numeric_limits<double>::infinity();
  for (const auto& f : facets_) m = std::min(m, f.offset - dot(f.normal, x));
  return m;
}

const Facet& ConvexHull::closest_facet(const Vec& x) const {
  if (!full_) fail(ErrorCode::kInvalidInput, "hull is not full-dimensional");
  const Facet* best = &facets_.front();
  for (const auto& f : facets_)
    if (f.offset - dot(f.normal, x) < best->offset - dot(best->normal, x)) best = &f;
  return *best;
}

double ConvexHull::inscribed_radius() const {
  if (!full_) return 0.0;
  return std::max(0.0, margin(Vec::zero(dim_)));
}

}  // namespace rotset
