#include "c0ip/space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "c0ip/errors.hpp"

namespace c0ip {

namespace {

// Clusters edge directions modulo pi; edges of a structured pattern fall
// into a handful of classes (horizontal, vertical, diagonals, ...).
std::vector<int> edge_direction_classes(const Triangulation& mesh) {
  std::vector<double> angles(mesh.num_edges());
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Point2 a = mesh.vertices[mesh.edges[e].v[0]];
    const Point2 b = mesh.vertices[mesh.edges[e].v[1]];
    double angle = std::atan2(b.y - a.y, b.x - a.x);
    if (angle < 0.0) angle += M_PI;      // direction, not orientation
    if (angle >= M_PI - 1e-9) angle = 0; // wrap near-pi onto zero
    angles[e] = angle;
  }
  std::vector<int> order(mesh.num_edges());
  for (int e = 0; e < mesh.num_edges(); ++e) order[e] = e;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return angles[a] < angles[b]; });
  std::vector<int> cls(mesh.num_edges(), 0);
  int next = -1;
  double last = -10.0;
  for (int e : order) {
    if (angles[e] > last + 1e-9) {
      ++next;
      last = angles[e];
    }
    cls[e] = next;
  }
  return cls;
}

} // namespace

FeSpace build_space(const Triangulation& mesh, int degree) {
  if (degree < 2 || degree > 4)
    throw std::invalid_argument("build_space: degree must be 2, 3 or 4");
  if (mesh.edges.empty())
    throw std::invalid_argument("build_space: mesh needs edge topology");

  FeSpace space;
  space.mesh = mesh;
  space.degree = degree;

  const int k = degree;
  const int per_edge = nodes_per_edge(k);
  const int per_cell = nodes_per_cell(k);
  const int nv = mesh.num_vertices();
  const int ne = mesh.num_edges();
  const int nt = mesh.num_triangles();
  space.num_dofs = nv + per_edge * ne + per_cell * nt;

  space.node_coords.resize(space.num_dofs);
  space.node_kind.resize(space.num_dofs);
  const std::vector<int> edge_cls = edge_direction_classes(mesh);

  for (int v = 0; v < nv; ++v) {
    space.node_coords[v] = mesh.vertices[v];
    space.node_kind[v] = {NodeKind::Kind::Vertex, -1};
  }
  for (int e = 0; e < ne; ++e) {
    const Point2 a = mesh.vertices[mesh.edges[e].v[0]];
    const Point2 b = mesh.vertices[mesh.edges[e].v[1]];
    for (int s = 0; s < per_edge; ++s) {
      const double t = static_cast<double>(s + 1) / k;
      space.node_coords[nv + e * per_edge + s] = a + t * (b - a);
      space.node_kind[nv + e * per_edge + s] = {NodeKind::Kind::EdgeNode,
                                                edge_cls[e]};
    }
  }

  const std::vector<Point2>& ref = reference_nodes(k);
  const int interior_offset = 3 + 3 * per_edge;
  space.elem_dofs.assign(nt, {});
  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles[t];
    std::vector<int>& dofs = space.elem_dofs[t];
    dofs.reserve(polynomial_space_dim(k));
    for (int local = 0; local < 3; ++local) dofs.push_back(tri.v[local]);
    for (int local = 0; local < 3; ++local) {
      const int e = mesh.tri_edges[t][local];
      const int a = tri.v[local];
      // Local edge nodes run from v[local] to v[local+1]; flip when that
      // disagrees with the global low-to-high storage order.
      const bool forward = (mesh.edges[e].v[0] == a);
      for (int s = 0; s < per_edge; ++s) {
        const int slot = forward ? s : per_edge - 1 - s;
        dofs.push_back(nv + e * per_edge + slot);
      }
    }
    const FeSpace::ElementMap map = space.element_map(t);
    for (int s = 0; s < per_cell; ++s) {
      const int dof = nv + per_edge * ne + t * per_cell + s;
      dofs.push_back(dof);
      const Point2 r = ref[interior_offset + s];
      space.node_coords[dof] = {
          map.origin.x + map.j[0][0] * r.x + map.j[0][1] * r.y,
          map.origin.y + map.j[1][0] * r.x + map.j[1][1] * r.y};
      space.node_kind[dof] = {NodeKind::Kind::Interior, -1};
    }
  }

  space.node_on_boundary.assign(space.num_dofs, 0);
  for (int e = 0; e < ne; ++e) {
    if (!mesh.is_boundary_edge(e)) continue;
    space.node_on_boundary[mesh.edges[e].v[0]] = 1;
    space.node_on_boundary[mesh.edges[e].v[1]] = 1;
    for (int s = 0; s < per_edge; ++s)
      space.node_on_boundary[nv + e * per_edge + s] = 1;
  }
  for (int i = 0; i < space.num_dofs; ++i)
    if (space.node_on_boundary[i]) space.boundary_dofs.push_back(i);

  return space;
}

FeSpace::ElementMap FeSpace::element_map(int t) const {
  ElementMap m;
  const Point2 p0 = mesh.vertex(t, 0);
  const Point2 p1 = mesh.vertex(t, 1);
  const Point2 p2 = mesh.vertex(t, 2);
  m.origin = p0;
  m.j[0][0] = p1.x - p0.x;
  m.j[0][1] = p2.x - p0.x;
  m.j[1][0] = p1.y - p0.y;
  m.j[1][1] = p2.y - p0.y;
  m.det = m.j[0][0] * m.j[1][1] - m.j[0][1] * m.j[1][0];
  const double inv = 1.0 / m.det;
  m.jinv[0][0] = m.j[1][1] * inv;
  m.jinv[0][1] = -m.j[0][1] * inv;
  m.jinv[1][0] = -m.j[1][0] * inv;
  m.jinv[1][1] = m.j[0][0] * inv;
  return m;
}

FeFunction interpolate(const FeSpace& space,
                       const std::function<double(Point2)>& f) {
  FeFunction u;
  u.space = &space;
  u.coeffs.resize(space.num_dofs);
  for (int i = 0; i < space.num_dofs; ++i)
    u.coeffs[i] = f(space.node_coords[i]);
  return u;
}

namespace {

bool triangle_contains(const Triangulation& mesh, int t, Point2 p,
                       double slack) {
  const Point2 a = mesh.vertex(t, 0);
  const Point2 b = mesh.vertex(t, 1);
  const Point2 c = mesh.vertex(t, 2);
  const double area2 = orient2d(a, b, c);
  const double tol = slack * area2;
  return orient2d(a, b, p) >= -tol && orient2d(b, c, p) >= -tol &&
         orient2d(c, a, p) >= -tol;
}

// Uniform grid over the bounding box with triangle -> cell lists.
struct LocatorGrid {
  Point2 lo, hi;
  int nx = 0, ny = 0;
  std::vector<std::vector<int>> cells;
};

LocatorGrid build_grid(const Triangulation& mesh) {
  LocatorGrid g;
  g.lo = g.hi = mesh.vertices[0];
  for (const Point2& p : mesh.vertices) {
    g.lo.x = std::min(g.lo.x, p.x);
    g.lo.y = std::min(g.lo.y, p.y);
    g.hi.x = std::max(g.hi.x, p.x);
    g.hi.y = std::max(g.hi.y, p.y);
  }
  const int n = static_cast<int>(
      std::sqrt(static_cast<double>(mesh.num_triangles())));
  g.nx = g.ny = std::max(1, n);
  g.cells.resize(static_cast<std::size_t>(g.nx) * g.ny);
  const double wx = (g.hi.x - g.lo.x) / g.nx;
  const double wy = (g.hi.y - g.lo.y) / g.ny;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    Point2 tlo = mesh.vertex(t, 0), thi = tlo;
    for (int local = 1; local < 3; ++local) {
      const Point2 p = mesh.vertex(t, local);
      tlo.x = std::min(tlo.x, p.x);
      tlo.y = std::min(tlo.y, p.y);
      thi.x = std::max(thi.x, p.x);
      thi.y = std::max(thi.y, p.y);
    }
    const int i0 = std::clamp(
        static_cast<int>((tlo.x - g.lo.x) / wx), 0, g.nx - 1);
    const int i1 = std::clamp(
        static_cast<int>((thi.x - g.lo.x) / wx), 0, g.nx - 1);
    const int j0 = std::clamp(
        static_cast<int>((tlo.y - g.lo.y) / wy), 0, g.ny - 1);
    const int j1 = std::clamp(
        static_cast<int>((thi.y - g.lo.y) / wy), 0, g.ny - 1);
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i)
        g.cells[static_cast<std::size_t>(j) * g.nx + i].push_back(t);
  }
  return g;
}

} // namespace

int locate_point(const Triangulation& mesh, Point2 p) {
  constexpr double kSlack = 1e-12;
  constexpr int kBruteForceLimit = 10000;
  if (mesh.num_triangles() < kBruteForceLimit) {
    for (int t = 0; t < mesh.num_triangles(); ++t)
      if (triangle_contains(mesh, t, p, kSlack)) return t;
    return -1;
  }
  // Grid path: gather candidates from the cell of p, then take the smallest
  // containing id so edge ties resolve exactly like the brute-force scan.
  // The cached grid is revalidated against the mesh's counts and corner
  // vertices; every candidate is containment-checked anyway.
  struct Cache {
    const Triangulation* id = nullptr;
    int nv = 0, nt = 0;
    Point2 first{}, last{};
    LocatorGrid grid;
  };
  static thread_local Cache cache;
  const Point2 first = mesh.vertices.front();
  const Point2 last = mesh.vertices.back();
  if (cache.id != &mesh || cache.nv != mesh.num_vertices() ||
      cache.nt != mesh.num_triangles() || cache.first.x != first.x ||
      cache.first.y != first.y || cache.last.x != last.x ||
      cache.last.y != last.y) {
    cache.grid = build_grid(mesh);
    cache.id = &mesh;
    cache.nv = mesh.num_vertices();
    cache.nt = mesh.num_triangles();
    cache.first = first;
    cache.last = last;
  }
  const LocatorGrid& grid = cache.grid;
  const double wx = (grid.hi.x - grid.lo.x) / grid.nx;
  const double wy = (grid.hi.y - grid.lo.y) / grid.ny;
  const int i = std::clamp(static_cast<int>((p.x - grid.lo.x) / wx), 0,
                           grid.nx - 1);
  const int j = std::clamp(static_cast<int>((p.y - grid.lo.y) / wy), 0,
                           grid.ny - 1);
  int best = -1;
  for (int t : grid.cells[static_cast<std::size_t>(j) * grid.nx + i])
    if (triangle_contains(mesh, t, p, kSlack) && (best < 0 || t < best))
      best = t;
  return best;
}

PointValues evaluate_on_triangle(const FeFunction& u, int t, Point2 ref,
                                 int max_order) {
  const FeSpace& space = *u.space;
  const BasisValues basis = eval_basis_ref(space.degree, ref);
  const FeSpace::ElementMap map = space.element_map(t);
  const std::vector<int>& dofs = space.elem_dofs[t];

  PointValues out;
  out.triangle = t;
  for (std::size_t i = 0; i < dofs.size(); ++i) {
    const double c = u.coeffs[dofs[i]];
    out.value += c * basis.value[i];
    if (max_order >= 1) {
      // grad_x = Jinv^T grad_ref
      out.grad.x += c * (map.jinv[0][0] * basis.grad[i].x +
                         map.jinv[1][0] * basis.grad[i].y);
      out.grad.y += c * (map.jinv[0][1] * basis.grad[i].x +
                         map.jinv[1][1] * basis.grad[i].y);
    }
    if (max_order >= 2) {
      // D2_x = Jinv^T D2_ref Jinv (affine map, no curvature terms)
      const double hxx = basis.hess[i][0];
      const double hxy = basis.hess[i][1];
      const double hyy = basis.hess[i][2];
      const double a = map.jinv[0][0], b = map.jinv[0][1];
      const double cc = map.jinv[1][0], d = map.jinv[1][1];
      out.hess[0] += c * (a * a * hxx + 2 * a * cc * hxy + cc * cc * hyy);
      out.hess[1] += c * (a * b * hxx + (a * d + b * cc) * hxy + cc * d * hyy);
      out.hess[2] += c * (b * b * hxx + 2 * b * d * hxy + d * d * hyy);
    }
  }
  return out;
}

PointValues evaluate(const FeFunction& u, Point2 p, int max_order) {
  const FeSpace& space = *u.space;
  const int t = locate_point(space.mesh, p);
  if (t < 0)
    throw EvaluationError("evaluate: point (" + std::to_string(p.x) + "," +
                          std::to_string(p.y) + ") is outside the mesh");
  const FeSpace::ElementMap map = space.element_map(t);
  const Point2 d = p - map.origin;
  const Point2 ref{map.jinv[0][0] * d.x + map.jinv[0][1] * d.y,
                   map.jinv[1][0] * d.x + map.jinv[1][1] * d.y};
  return evaluate_on_triangle(u, t, ref, max_order);
}

} // namespace c0ip
