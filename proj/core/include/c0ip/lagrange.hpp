#pragma once

#include <array>
#include <vector>

#include "c0ip/geometry.hpp"

namespace c0ip {

// Barycentric coordinates with respect to the reference triangle
// {(0,0), (1,0), (0,1)}; lambda[1] and lambda[2] are the reference x and y.
using Barycentric = std::array<double, 3>;

// Values and derivatives (with respect to reference coordinates) of all
// Lagrange basis functions of one degree at one point.  Hessians are stored
// as (xx, xy, yy).
struct BasisValues {
  std::vector<double> value;
  std::vector<Point2> grad;
  std::vector<std::array<double, 3>> hess;
};

// Dimension of P_k on the triangle: (k+1)(k+2)/2.
inline int polynomial_space_dim(int degree) {
  return (degree + 1) * (degree + 2) / 2;
}

// Lagrange nodes of the equispaced lattice on the reference triangle, in the
// order shared with FeSpace: the three vertices, then the interior nodes of
// edges (v0,v1), (v1,v2), (v2,v0) walked from first to second endpoint, then
// the cell-interior nodes.
const std::vector<Point2>& reference_nodes(int degree);

// Number of Lagrange nodes in the interior of one edge / of the cell.
inline int nodes_per_edge(int degree) { return degree - 1; }
inline int nodes_per_cell(int degree) {
  return (degree - 1) * (degree - 2) / 2;
}

// Evaluates all reference basis functions of the given degree (2, 3 or 4).
BasisValues eval_basis(int degree, const Barycentric& point);

BasisValues eval_basis_ref(int degree, Point2 ref_point);

} // namespace c0ip
