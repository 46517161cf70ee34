#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "c0ip/geometry.hpp"

namespace c0ip {

// Structured families of triangulations of the unit square.  All of them use
// n x n cells of size 1/n; they differ in how each cell is cut.
enum class MeshPattern {
  Regular,    // every cell split along the same diagonal
  Chevron,    // diagonal direction alternates by column
  CrissCross, // four triangles per cell around a center vertex
  UnionJack,  // diagonal direction alternates checkerboard-style
  Equilateral // rows of near-equilateral triangles clipped to the square
};

struct Triangle {
  std::array<int, 3> v{}; // vertex ids, counter-clockwise
};

// An edge of the triangulation.  Endpoints are stored with v[0] < v[1].
// tri[0] is the adjacent triangle with the smaller id (the "minus" side of
// the edge); tri[1] is the other one, or -1 on the boundary.  The edge
// normal used by traces points from tri[0] into tri[1], which on boundary
// edges makes it the outward normal of the domain.
struct Edge {
  std::array<int, 2> v{-1, -1};
  std::array<int, 2> tri{-1, -1};
};

struct Triangulation {
  std::vector<Point2> vertices;
  std::vector<Triangle> triangles;

  // Edge topology, filled by build_edge_topology.  tri_edges[t][i] is the
  // edge id of local edge i of triangle t, where local edges are
  // (v0,v1), (v1,v2), (v2,v0).
  std::vector<Edge> edges;
  std::vector<std::array<int, 3>> tri_edges;

  // Newest-vertex bisection data: local index of the refinement edge of each
  // triangle.  Empty until the first bisection call initializes it from the
  // longest edges.
  std::vector<std::uint8_t> refinement_edge;

  // Provenance label ("regular", "lshape", "delaunay", ...); informational.
  std::string pattern_tag;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }

  Point2 vertex(int t, int local) const {
    return vertices[triangles[t].v[local]];
  }

  double signed_area(int t) const {
    return triangle_area(vertex(t, 0), vertex(t, 1), vertex(t, 2));
  }

  bool is_boundary_edge(int e) const { return edges[e].tri[1] < 0; }

  double edge_length(int e) const {
    return distance(vertices[edges[e].v[0]], vertices[edges[e].v[1]]);
  }

  double total_area() const {
    double a = 0.0;
    for (int t = 0; t < num_triangles(); ++t) a += signed_area(t);
    return a;
  }

  // Unit normal of edge e pointing from the minus side (tri[0]) into the
  // plus side; outward on boundary edges.
  Point2 edge_normal(int e) const;

  // Triangles incident to each vertex, in increasing triangle order.
  std::vector<std::vector<int>> vertex_to_triangles() const;
};

// n x n cells over the unit square, cut according to the pattern.
Triangulation generate_uniform(MeshPattern pattern, int n);

// L-shaped domain (-1,1)^2 minus [0,1]x[-1,0] with cell size 1/n; the
// reentrant corner at the origin is always a vertex.
Triangulation generate_lshape(int n);

// Rebuilds `edges` and `tri_edges` from the triangle list.  Throws
// TopologyError if an edge is shared by more than two triangles.
void build_edge_topology(Triangulation& mesh);

// Splits every triangle into four congruent children via edge midpoints.
Triangulation refine_regular(const Triangulation& mesh);

// Newest-vertex bisection of the marked triangles plus conformity closure.
// An empty marked set returns the mesh unchanged.
Triangulation refine_bisection(const Triangulation& mesh,
                               const std::vector<int>& marked);

// Checks orientation, conformity, Euler characteristic and (optionally) the
// total area; throws GeometryError/TopologyError on violations.
void validate_mesh(const Triangulation& mesh, double expected_area = -1.0);

const char* pattern_name(MeshPattern pattern);

} // namespace c0ip
