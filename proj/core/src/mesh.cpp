#include "c0ip/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "c0ip/errors.hpp"

namespace c0ip {

const char* pattern_name(MeshPattern pattern) {
  switch (pattern) {
    case MeshPattern::Regular: return "regular";
    case MeshPattern::Chevron: return "chevron";
    case MeshPattern::CrissCross: return "crisscross";
    case MeshPattern::UnionJack: return "unionjack";
    case MeshPattern::Equilateral: return "equilateral";
  }
  return "unknown";
}

Point2 Triangulation::edge_normal(int e) const {
  const Edge& ed = edges[e];
  const Point2 a = vertices[ed.v[0]];
  const Point2 b = vertices[ed.v[1]];
  const Point2 t = b - a;
  Point2 n{t.y, -t.x};
  const double len = norm(n);
  n = (1.0 / len) * n;
  // Orient away from the minus-side triangle: its third vertex must lie on
  // the negative side of the normal.
  const Triangle& tri = triangles[ed.tri[0]];
  for (int local = 0; local < 3; ++local) {
    const int vid = tri.v[local];
    if (vid != ed.v[0] && vid != ed.v[1]) {
      if (dot(n, vertices[vid] - a) > 0.0) n = -1.0 * n;
      break;
    }
  }
  return n;
}

std::vector<std::vector<int>> Triangulation::vertex_to_triangles() const {
  std::vector<std::vector<int>> star(vertices.size());
  for (int t = 0; t < num_triangles(); ++t)
    for (int local = 0; local < 3; ++local)
      star[triangles[t].v[local]].push_back(t);
  return star;
}

namespace {

// Cuts cell (BL, BR, TR, TL) along the BL-TR diagonal.
void cut_main(std::vector<Triangle>& tris, int bl, int br, int tr, int tl) {
  tris.push_back({{bl, br, tr}});
  tris.push_back({{bl, tr, tl}});
}

// Cuts along the BR-TL diagonal.
void cut_anti(std::vector<Triangle>& tris, int bl, int br, int tr, int tl) {
  tris.push_back({{bl, br, tl}});
  tris.push_back({{br, tr, tl}});
}

Triangulation generate_equilateral(int n) {
  Triangulation mesh;
  // Rows y = j/n; odd rows are shifted half a cell in x and clipped to the
  // square, which adds the two boundary points x = 0 and x = 1.
  std::vector<std::vector<int>> row_ids(n + 1);
  for (int j = 0; j <= n; ++j) {
    const double y = static_cast<double>(j) / n;
    if (j % 2 == 0) {
      for (int i = 0; i <= n; ++i) {
        row_ids[j].push_back(mesh.num_vertices());
        mesh.vertices.push_back({static_cast<double>(i) / n, y});
      }
    } else {
      row_ids[j].push_back(mesh.num_vertices());
      mesh.vertices.push_back({0.0, y});
      for (int i = 0; i < n; ++i) {
        row_ids[j].push_back(mesh.num_vertices());
        mesh.vertices.push_back({(0.5 + i) / n, y});
      }
      row_ids[j].push_back(mesh.num_vertices());
      mesh.vertices.push_back({1.0, y});
    }
  }
  // Zip each pair of consecutive rows: always advance the row whose next
  // vertex has the smaller x coordinate.
  for (int j = 0; j < n; ++j) {
    const std::vector<int>& lo = row_ids[j];
    const std::vector<int>& hi = row_ids[j + 1];
    std::size_t a = 0, b = 0;
    while (a + 1 < lo.size() || b + 1 < hi.size()) {
      const bool can_lo = a + 1 < lo.size();
      const bool can_hi = b + 1 < hi.size();
      bool advance_lo = can_lo;
      if (can_lo && can_hi)
        advance_lo = mesh.vertices[lo[a + 1]].x <= mesh.vertices[hi[b + 1]].x;
      if (advance_lo) {
        mesh.triangles.push_back({{lo[a], lo[a + 1], hi[b]}});
        ++a;
      } else {
        mesh.triangles.push_back({{lo[a], hi[b + 1], hi[b]}});
        ++b;
      }
    }
  }
  return mesh;
}

} // namespace

Triangulation generate_uniform(MeshPattern pattern, int n) {
  if (n < 1) throw std::invalid_argument("generate_uniform: n must be >= 1");

  if (pattern == MeshPattern::Equilateral) {
    Triangulation mesh = generate_equilateral(n);
    mesh.pattern_tag = pattern_name(pattern);
    build_edge_topology(mesh);
    validate_mesh(mesh, 1.0);
    return mesh;
  }

  Triangulation mesh;
  const auto grid = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      mesh.vertices.push_back(
          {static_cast<double>(i) / n, static_cast<double>(j) / n});

  if (pattern == MeshPattern::CrissCross) {
    // Cell centers come after the grid vertices, one per cell.
    std::vector<int> center(n * n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        center[j * n + i] = mesh.num_vertices();
        mesh.vertices.push_back({(i + 0.5) / n, (j + 0.5) / n});
      }
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const int bl = grid(i, j), br = grid(i + 1, j);
        const int tr = grid(i + 1, j + 1), tl = grid(i, j + 1);
        const int c = center[j * n + i];
        mesh.triangles.push_back({{bl, br, c}});
        mesh.triangles.push_back({{br, tr, c}});
        mesh.triangles.push_back({{tr, tl, c}});
        mesh.triangles.push_back({{tl, bl, c}});
      }
  } else {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const int bl = grid(i, j), br = grid(i + 1, j);
        const int tr = grid(i + 1, j + 1), tl = grid(i, j + 1);
        bool main_diagonal = true;
        if (pattern == MeshPattern::Chevron) main_diagonal = (i % 2 == 0);
        if (pattern == MeshPattern::UnionJack)
          main_diagonal = ((i + j) % 2 == 0);
        if (main_diagonal)
          cut_main(mesh.triangles, bl, br, tr, tl);
        else
          cut_anti(mesh.triangles, bl, br, tr, tl);
      }
  }

  mesh.pattern_tag = pattern_name(pattern);
  build_edge_topology(mesh);
  validate_mesh(mesh, 1.0);
  return mesh;
}

Triangulation generate_lshape(int n) {
  if (n < 1) throw std::invalid_argument("generate_lshape: n must be >= 1");

  // Grid over [-1,1]^2 with spacing 1/n; cells inside the removed quadrant
  // [0,1]x[-1,0] are skipped, along with the grid points only they use.
  const int m = 2 * n;
  const auto removed_cell = [n](int i, int j) { return i >= n && j < n; };

  Triangulation mesh;
  std::vector<int> id((m + 1) * (m + 1), -1);
  for (int j = 0; j <= m; ++j)
    for (int i = 0; i <= m; ++i) {
      if (i >= n + 1 && j <= n - 1) continue; // used by removed cells only
      id[j * (m + 1) + i] = mesh.num_vertices();
      mesh.vertices.push_back(
          {-1.0 + static_cast<double>(i) / n, -1.0 + static_cast<double>(j) / n});
    }
  const auto grid = [&](int i, int j) { return id[j * (m + 1) + i]; };

  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      if (removed_cell(i, j)) continue;
      cut_main(mesh.triangles, grid(i, j), grid(i + 1, j), grid(i + 1, j + 1),
               grid(i, j + 1));
    }

  mesh.pattern_tag = "lshape";
  build_edge_topology(mesh);
  validate_mesh(mesh, 3.0);
  return mesh;
}

void build_edge_topology(Triangulation& mesh) {
  std::vector<std::array<int, 2>> keys;
  keys.reserve(3 * mesh.triangles.size());
  for (const Triangle& t : mesh.triangles)
    for (int local = 0; local < 3; ++local) {
      int a = t.v[local], b = t.v[(local + 1) % 3];
      if (a > b) std::swap(a, b);
      keys.push_back({a, b});
    }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

  mesh.edges.assign(keys.size(), Edge{});
  for (std::size_t e = 0; e < keys.size(); ++e) mesh.edges[e].v = keys[e];

  mesh.tri_edges.assign(mesh.triangles.size(), {-1, -1, -1});
  for (int t = 0; t < mesh.num_triangles(); ++t)
    for (int local = 0; local < 3; ++local) {
      int a = mesh.triangles[t].v[local];
      int b = mesh.triangles[t].v[(local + 1) % 3];
      if (a > b) std::swap(a, b);
      const auto it =
          std::lower_bound(keys.begin(), keys.end(), std::array<int, 2>{a, b});
      const int e = static_cast<int>(it - keys.begin());
      mesh.tri_edges[t][local] = e;
      Edge& ed = mesh.edges[e];
      if (ed.tri[0] < 0) {
        ed.tri[0] = t;
      } else if (ed.tri[1] < 0) {
        ed.tri[1] = t; // triangles are visited in increasing order
      } else {
        throw TopologyError("edge (" + std::to_string(a) + "," +
                            std::to_string(b) +
                            ") is shared by more than two triangles");
      }
    }
}

Triangulation refine_regular(const Triangulation& mesh) {
  Triangulation out;
  out.vertices = mesh.vertices;
  out.pattern_tag = mesh.pattern_tag;

  Triangulation work = mesh;
  if (work.edges.empty()) build_edge_topology(work);

  // Midpoint of edge e gets vertex id V + e.
  const int nv = work.num_vertices();
  for (int e = 0; e < work.num_edges(); ++e) {
    const Point2 a = work.vertices[work.edges[e].v[0]];
    const Point2 b = work.vertices[work.edges[e].v[1]];
    out.vertices.push_back(0.5 * (a + b));
  }

  for (int t = 0; t < work.num_triangles(); ++t) {
    const auto& v = work.triangles[t].v;
    const int m01 = nv + work.tri_edges[t][0];
    const int m12 = nv + work.tri_edges[t][1];
    const int m20 = nv + work.tri_edges[t][2];
    out.triangles.push_back({{v[0], m01, m20}});
    out.triangles.push_back({{m01, v[1], m12}});
    out.triangles.push_back({{m20, m12, v[2]}});
    out.triangles.push_back({{m01, m12, m20}});
  }

  build_edge_topology(out);
  validate_mesh(out);
  return out;
}

namespace {

// Local index of the refinement edge used to seed newest-vertex bisection:
// the strictly longest edge, ties broken by the smaller local index.
std::uint8_t longest_edge_local(const Triangulation& mesh, int t) {
  std::uint8_t best = 0;
  double best_len = -1.0;
  for (int local = 0; local < 3; ++local) {
    const Point2 a = mesh.vertex(t, local);
    const Point2 b = mesh.vertex(t, (local + 1) % 3);
    const double len = distance(a, b);
    if (len > best_len + 1e-14 * (1.0 + best_len)) {
      best_len = len;
      best = static_cast<std::uint8_t>(local);
    }
  }
  return best;
}

} // namespace

Triangulation refine_bisection(const Triangulation& mesh,
                               const std::vector<int>& marked) {
  for (int t : marked)
    if (t < 0 || t >= mesh.num_triangles())
      throw std::invalid_argument("refine_bisection: marked id out of range");
  if (marked.empty()) {
    Triangulation out = mesh;
    if (out.edges.empty()) build_edge_topology(out);
    return out;
  }

  std::vector<Point2> vertices = mesh.vertices;
  std::vector<std::array<int, 3>> tris;
  std::vector<std::uint8_t> ref_edge;
  std::vector<char> alive;
  tris.reserve(4 * mesh.triangles.size());
  for (const Triangle& t : mesh.triangles) tris.push_back(t.v);
  alive.assign(tris.size(), 1);

  if (mesh.refinement_edge.size() == mesh.triangles.size()) {
    ref_edge = mesh.refinement_edge;
  } else {
    ref_edge.resize(tris.size());
    for (int t = 0; t < mesh.num_triangles(); ++t)
      ref_edge[t] = longest_edge_local(mesh, t);
  }

  // Midpoints created so far, keyed by the sorted endpoint pair.  A triangle
  // whose edge appears here has a hanging node and must be bisected.
  std::map<std::array<int, 2>, int> midpoint;
  const auto midpoint_of = [&](int a, int b) {
    std::array<int, 2> key{std::min(a, b), std::max(a, b)};
    const auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const int id = static_cast<int>(vertices.size());
    vertices.push_back(0.5 * (vertices[a] + vertices[b]));
    midpoint.emplace(key, id);
    return id;
  };

  const auto bisect = [&](int t) {
    const std::array<int, 3> v = tris[t];
    const int le = ref_edge[t];
    // Rotate so the refinement edge is (a, b) and p is the peak.
    const int a = v[le], b = v[(le + 1) % 3], p = v[(le + 2) % 3];
    const int m = midpoint_of(a, b);
    alive[t] = 0;
    // Children keep the parent orientation; the new vertex m is their peak,
    // so each child's refinement edge is the parent edge opposite m.
    tris.push_back({a, m, p});
    ref_edge.push_back(2); // edge (p, a)
    alive.push_back(1);
    tris.push_back({m, b, p});
    ref_edge.push_back(1); // edge (b, p)
    alive.push_back(1);
  };

  for (int t : marked)
    if (alive[t]) bisect(t);

  // Conformity closure: bisect any triangle with a hanging node until none
  // are left.  Each hanging edge is resolved after at most two generations,
  // so this terminates; the cap is a safety net.
  const int max_passes = 64 + 8 * static_cast<int>(mesh.triangles.size());
  for (int pass = 0;; ++pass) {
    std::vector<int> pending;
    for (std::size_t t = 0; t < tris.size(); ++t) {
      if (!alive[t]) continue;
      for (int local = 0; local < 3; ++local) {
        int a = tris[t][local], b = tris[t][(local + 1) % 3];
        std::array<int, 2> key{std::min(a, b), std::max(a, b)};
        if (midpoint.count(key)) {
          pending.push_back(static_cast<int>(t));
          break;
        }
      }
    }
    if (pending.empty()) break;
    if (pass >= max_passes)
      throw TopologyError("refine_bisection: closure did not terminate");
    for (int t : pending)
      if (alive[t]) bisect(t);
  }

  Triangulation out;
  out.vertices = std::move(vertices);
  out.pattern_tag = mesh.pattern_tag;
  for (std::size_t t = 0; t < tris.size(); ++t)
    if (alive[t]) {
      out.triangles.push_back({tris[t]});
      out.refinement_edge.push_back(ref_edge[t]);
    }
  build_edge_topology(out);
  validate_mesh(out);
  return out;
}

void validate_mesh(const Triangulation& mesh, double expected_area) {
  if (mesh.triangles.empty()) throw GeometryError("mesh has no triangles");
  for (int t = 0; t < mesh.num_triangles(); ++t)
    if (mesh.signed_area(t) <= 0.0)
      throw GeometryError("triangle " + std::to_string(t) +
                          " is degenerate or clockwise");
  if (mesh.edges.empty())
    throw TopologyError("edge topology has not been built");
  for (int e = 0; e < mesh.num_edges(); ++e)
    if (mesh.edges[e].tri[0] < 0)
      throw TopologyError("edge " + std::to_string(e) +
                          " has no adjacent triangle");
  // Simply connected planar complex: V - E + T = 1.
  const long euler = static_cast<long>(mesh.num_vertices()) -
                     mesh.num_edges() + mesh.num_triangles();
  if (euler != 1)
    throw TopologyError("Euler characteristic V-E+T = " +
                        std::to_string(euler) + ", expected 1");
  if (expected_area > 0.0) {
    const double area = mesh.total_area();
    if (std::abs(area - expected_area) > 1e-12 * expected_area)
      throw GeometryError("mesh area " + std::to_string(area) +
                          " does not match domain area " +
                          std::to_string(expected_area));
  }
}

} // namespace c0ip
