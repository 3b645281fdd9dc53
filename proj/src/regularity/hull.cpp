#include "lillab/regularity/hull.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <set>
#include <utility>

#include "lillab/error.hpp"

namespace lillab::regularity {

namespace {

double cross2(const Vec& o, const Vec& a, const Vec& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

double scale_of(const std::vector<Vec>& pts) {
  double s = 0.0;
  for (const auto& p : pts) s = std::max(s, p.cwiseAbs().maxCoeff());
  return std::max(s, 1e-300);
}

void fill_vertices(Hull& h) {
  std::set<std::size_t> all;
  for (const auto& f : h.facets) all.insert(f.vertices.begin(), f.vertices.end());
  h.vertices.assign(all.begin(), all.end());
}

[[noreturn]] void degenerate(const char* what) { throw NumericalFailure(what, {}); }

}  // namespace

Hull convex_hull_2d(const std::vector<Vec>& points) {
  const std::size_t n = points.size();
  for (const auto& p : points) require(p.size() == 2, "convex_hull_2d: points must be 2-dimensional");
  if (n < 3) degenerate("convex hull: fewer than three points");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return points[a][0] < points[b][0] || (points[a][0] == points[b][0] && points[a][1] < points[b][1]);
  });
  std::vector<std::size_t> h(2 * n);
  std::size_t m = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (m >= 2 && cross2(points[h[m - 2]], points[h[m - 1]], points[idx[i]]) <= 0.0) --m;
    h[m++] = idx[i];
  }
  for (std::size_t i = n - 1, lower = m + 1; i-- > 0;) {
    while (m >= lower && cross2(points[h[m - 2]], points[h[m - 1]], points[idx[i]]) <= 0.0) --m;
    h[m++] = idx[i];
  }
  h.resize(m - 1);  // last equals first
  if (h.size() < 3) degenerate("convex hull: points are collinear");

  Hull out;
  out.dim = 2;
  double area = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const Vec& a = points[h[i]];
    const Vec& b = points[h[(i + 1) % h.size()]];
    area += a[0] * b[1] - a[1] * b[0];
    Vec nrm(2);
    nrm << b[1] - a[1], a[0] - b[0];
    nrm.normalize();
    out.facets.push_back({{h[i], h[(i + 1) % h.size()]}, nrm, nrm.dot(a)});
  }
  out.volume = 0.5 * area;
  if (!(out.volume > 1e-14 * scale_of(points) * scale_of(points))) degenerate("convex hull: zero area");
  fill_vertices(out);
  return out;
}

Hull convex_hull_3d(const std::vector<Vec>& points) {
  const std::size_t n = points.size();
  for (const auto& p : points) require(p.size() == 3, "convex_hull_3d: points must be 3-dimensional");
  if (n < 4) degenerate("convex hull: fewer than four points");
  using V3 = Eigen::Vector3d;
  std::vector<V3> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = points[i];
  const double eps = 1e-12 * scale_of(points);

  // Initial simplex: extreme x, farthest from it, farthest from the line, farthest from the plane.
  std::size_t i0 = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (p[i].x() < p[i0].x()) i0 = i;
  std::size_t i1 = i0;
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (double dd = (p[i] - p[i0]).norm(); dd > best) best = dd, i1 = i;
  if (best <= eps) degenerate("convex hull: coincident points");
  const V3 dir = (p[i1] - p[i0]).normalized();
  std::size_t i2 = i0;
  best = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (double dd = (p[i] - p[i0]).cross(dir).norm(); dd > best) best = dd, i2 = i;
  if (best <= eps) degenerate("convex hull: collinear points");
  const V3 pn = (p[i1] - p[i0]).cross(p[i2] - p[i0]).normalized();
  std::size_t i3 = i0;
  best = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (double dd = std::abs((p[i] - p[i0]).dot(pn)); dd > best) best = dd, i3 = i;
  if (best <= eps) degenerate("convex hull: coplanar points");

  struct Tri {
    std::array<std::size_t, 3> v;
    V3 normal;
    double offset;
    bool alive;
  };
  std::vector<Tri> tris;
  const V3 centre = (p[i0] + p[i1] + p[i2] + p[i3]) / 4.0;
  auto add = [&](std::size_t a, std::size_t b, std::size_t c) {
    V3 nrm = (p[b] - p[a]).cross(p[c] - p[a]);
    if (nrm.dot(p[a] - centre) < 0.0) {
      std::swap(b, c);
      nrm = -nrm;
    }
    nrm.normalize();
    tris.push_back({{a, b, c}, nrm, nrm.dot(p[a]), true});
  };
  add(i0, i1, i2);
  add(i0, i1, i3);
  add(i0, i2, i3);
  add(i1, i2, i3);

  std::vector<std::size_t> visible;
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t q = 0; q < n; ++q) {
    if (q == i0 || q == i1 || q == i2 || q == i3) continue;
    visible.clear();
    for (std::size_t f = 0; f < tris.size(); ++f)
      if (tris[f].alive && tris[f].normal.dot(p[q]) - tris[f].offset > eps) visible.push_back(f);
    if (visible.empty()) continue;
    edges.clear();
    for (std::size_t f : visible) {
      const auto& v = tris[f].v;
      for (int e = 0; e < 3; ++e) edges.insert({v[e], v[(e + 1) % 3]});
      tris[f].alive = false;
    }
    for (const auto& [a, b] : edges) {
      if (edges.count({b, a})) continue;
      V3 nrm = (p[b] - p[a]).cross(p[q] - p[a]);
      const double len = nrm.norm();
      if (!(len > 0.0)) continue;
      nrm /= len;
      tris.push_back({{a, b, q}, nrm, nrm.dot(p[a]), true});
    }
  }

  Hull out;
  out.dim = 3;
  double vol = 0.0;
  for (const auto& t : tris) {
    if (!t.alive) continue;
    vol += (p[t.v[0]] - centre).dot((p[t.v[1]] - centre).cross(p[t.v[2]] - centre)) / 6.0;
    out.facets.push_back({{t.v[0], t.v[1], t.v[2]}, Vec(t.normal), t.offset});
  }
  out.volume = vol;
  if (!(vol > 0.0)) degenerate("convex hull: zero volume");
  fill_vertices(out);
  return out;
}

Hull convex_hull(const std::vector<Vec>& points) {
  require(!points.empty(), "convex_hull: no points");
  const auto d = points.front().size();
  if (d == 2) return convex_hull_2d(points);
  if (d == 3) return convex_hull_3d(points);
  throw InvalidInput("convex_hull: only d = 2 and d = 3 are supported");
}

double max_violation(const Hull& hull, const std::vector<Vec>& points) {
  double worst = -kInfinity;
  for (const auto& f : hull.facets)
    for (const auto& x : points) worst = std::max(worst, f.normal.dot(x) - f.offset);
  return worst;
}

}  // namespace lillab::regularity
