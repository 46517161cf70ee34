#pragma once

#include <array>
#include <functional>
#include <vector>

#include "c0ip/lagrange.hpp"
#include "c0ip/mesh.hpp"

namespace c0ip {

// Classification of global Lagrange nodes, used by same-type sampling in the
// gradient recovery.  Edge nodes carry the id of their edge-direction class
// (directions clustered modulo pi).
struct NodeKind {
  enum class Kind { Vertex, EdgeNode, Interior };
  Kind kind = Kind::Vertex;
  int direction_class = -1;

  friend bool operator==(const NodeKind& a, const NodeKind& b) {
    return a.kind == b.kind && a.direction_class == b.direction_class;
  }
};

// Continuous Lagrange space of degree 2, 3 or 4 on a triangulation.  Global
// dof order: vertices first, then the interior nodes of each edge (walked
// from the lower to the higher vertex id), then cell-interior nodes grouped
// by triangle.
struct FeSpace {
  Triangulation mesh;
  int degree = 0;
  int num_dofs = 0;

  std::vector<Point2> node_coords;
  std::vector<NodeKind> node_kind;
  std::vector<char> node_on_boundary;
  std::vector<int> boundary_dofs; // sorted

  // Per triangle: global dofs in the order of the reference basis functions.
  std::vector<std::vector<int>> elem_dofs;

  int dofs_per_element() const { return polynomial_space_dim(degree); }

  // Affine map data of one triangle.
  struct ElementMap {
    Point2 origin;            // vertex 0
    double j[2][2];           // reference -> physical Jacobian
    double jinv[2][2];        // physical -> reference
    double det = 0.0;         // = 2 * area
  };
  ElementMap element_map(int t) const;
};

FeSpace build_space(const Triangulation& mesh, int degree);

// A finite element function as coefficients over a space.  Non-owning: the
// space must outlive the function.
struct FeFunction {
  const FeSpace* space = nullptr;
  std::vector<double> coeffs;
};

// Nodal interpolant: coeffs[i] = f(node_i).
FeFunction interpolate(const FeSpace& space,
                       const std::function<double(Point2)>& f);

struct PointValues {
  double value = 0.0;
  Point2 grad{};
  std::array<double, 3> hess{}; // xx, xy, yy
  int triangle = -1;
};

// Evaluates an FE function (value, gradient, Hessian) at a physical point.
// Points on shared edges resolve to the smallest containing triangle id;
// points outside the mesh throw EvaluationError.
PointValues evaluate(const FeFunction& u, Point2 p, int max_order = 2);

// Value/derivatives of u on a given triangle at a reference point.
PointValues evaluate_on_triangle(const FeFunction& u, int t, Point2 ref_point,
                                 int max_order = 2);

// Smallest triangle id whose closed triangle contains p (with a 1e-12
// relative slack); -1 if none.  Uses a brute-force scan for small meshes and
// a uniform grid bucket otherwise -- both give the same answer.
int locate_point(const Triangulation& mesh, Point2 p);

} // namespace c0ip
