#include "c0ip/delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include "c0ip/errors.hpp"

namespace c0ip {

namespace {

std::vector<Point2> merge_duplicates(const std::vector<Point2>& points,
                                     double tol) {
  std::vector<Point2> out;
  for (const Point2& p : points) {
    bool dup = false;
    for (const Point2& q : out)
      if (std::abs(p.x - q.x) <= tol && std::abs(p.y - q.y) <= tol) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(p);
  }
  return out;
}

} // namespace

Triangulation delaunay_triangulate(const std::vector<Point2>& points) {
  std::vector<Point2> pts = merge_duplicates(points, 1e-12);
  const int n = static_cast<int>(pts.size());
  if (n < 3)
    throw GeometryError("delaunay_triangulate: need at least 3 distinct points");

  // Bounding box and scale; also detect fully collinear clouds.
  Point2 lo = pts[0], hi = pts[0];
  for (const Point2& p : pts) {
    lo.x = std::min(lo.x, p.x);
    lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x);
    hi.y = std::max(hi.y, p.y);
  }
  const double scale = std::max({hi.x - lo.x, hi.y - lo.y, 1e-300});
  bool collinear = true;
  for (int i = 2; i < n && collinear; ++i)
    if (std::abs(orient2d(pts[0], pts[1], pts[i])) > 1e-12 * scale * scale)
      collinear = false;
  if (collinear)
    throw GeometryError("delaunay_triangulate: all points are collinear");

  // Super-triangle far outside the cloud; its vertices get ids n, n+1, n+2.
  const Point2 c{0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y)};
  const double r = 20.0 * scale;
  std::vector<Point2> verts = pts;
  verts.push_back({c.x - 2.0 * r, c.y - r});
  verts.push_back({c.x + 2.0 * r, c.y - r});
  verts.push_back({c.x, c.y + 2.0 * r});

  std::vector<std::array<int, 3>> tris = {{n, n + 1, n + 2}};
  std::vector<char> alive = {1};

  // Strictly-inside threshold for the incircle determinant; cocircular
  // configurations fall below it and keep the earlier diagonal.
  const double eps = 1e-14 * std::pow(4.0 * r, 4);

  for (int p = 0; p < n; ++p) {
    // Cavity: all live triangles whose circumcircle contains the point.
    std::vector<int> cavity;
    for (std::size_t t = 0; t < tris.size(); ++t) {
      if (!alive[t]) continue;
      if (incircle(verts[tris[t][0]], verts[tris[t][1]], verts[tris[t][2]],
                   verts[p]) > eps)
        cavity.push_back(static_cast<int>(t));
    }
    if (cavity.empty())
      throw GeometryError("delaunay_triangulate: point outside triangulation");

    // Boundary of the cavity = edges used by exactly one cavity triangle.
    std::map<std::array<int, 2>, std::pair<int, std::array<int, 2>>> count;
    for (int t : cavity) {
      alive[t] = 0;
      for (int local = 0; local < 3; ++local) {
        const int a = tris[t][local], b = tris[t][(local + 1) % 3];
        std::array<int, 2> key{std::min(a, b), std::max(a, b)};
        auto it = count.try_emplace(key, 0, std::array<int, 2>{a, b}).first;
        it->second.first++;
      }
    }
    for (const auto& [key, info] : count) {
      if (info.first != 1) continue;
      const auto [a, b] = info.second; // oriented as in the dead triangle
      tris.push_back({a, b, p});       // keeps counter-clockwise orientation
      alive.push_back(1);
    }
  }

  Triangulation mesh;
  mesh.vertices = pts;
  for (std::size_t t = 0; t < tris.size(); ++t) {
    if (!alive[t]) continue;
    if (tris[t][0] >= n || tris[t][1] >= n || tris[t][2] >= n) continue;
    mesh.triangles.push_back({tris[t]});
  }
  if (mesh.triangles.empty())
    throw GeometryError("delaunay_triangulate: empty triangulation");
  mesh.pattern_tag = "delaunay";
  build_edge_topology(mesh);
  validate_mesh(mesh);
  return mesh;
}

std::vector<Point2> unit_square_cloud() {
  std::vector<Point2> pts = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  for (int i = 1; i < 8; ++i) {
    const double s = i / 8.0;
    pts.push_back({s, 0.0});
    pts.push_back({1.0, s});
    pts.push_back({1.0 - s, 1.0});
    pts.push_back({0.0, 1.0 - s});
  }
  // Interior points on a jittered 7x7 grid.  The jitter bound of 1/32 keeps
  // every pair at least 1/16 apart and every point at least 3/32 from the
  // boundary, which bounds the minimum triangle angle away from zero;
  // rejection-sampled clouds admit sliver triangles that regular refinement
  // then reproduces at every level.
  std::mt19937 rng(20240607u);
  std::uniform_real_distribution<double> jitter(-1.0 / 32.0, 1.0 / 32.0);
  for (int i = 1; i <= 7; ++i)
    for (int j = 1; j <= 7; ++j)
      pts.push_back({i / 8.0 + jitter(rng), j / 8.0 + jitter(rng)});
  return pts;
}

} // namespace c0ip
