#pragma once

#include <functional>
#include <vector>

#include "c0ip/quadrature.hpp"
#include "c0ip/space.hpp"
#include "c0ip/sparse.hpp"

namespace c0ip {

// Interior-penalty bilinear form for the clamped plate problem Lap^2 u = f:
//
//   B_h(v, w) = sum_T int_T D2v : D2w
//             + sum_E int_E {d2v/dn2} [dw/dn] + int_E [dv/dn] {d2w/dn2}
//             + sum_E (gamma/|E|) int_E [dv/dn] [dw/dn]
//
// On an interior edge the normal n points from the lower-id triangle ("minus")
// into the higher-id one ("plus"); {x} is the arithmetic average of the two
// traces and [x] the plus-minus difference.  On a boundary edge (outward n)
// the average is the one-sided trace and the jump is its negative, which is
// what makes the form consistent with the continuous problem.

// Default penalty weight gamma = k^2.  Stability on the uniform pattern
// meshes needs roughly gamma > 3 for k = 2, and the interior errors grow
// with gamma once the form is coercive, so the default sits just above the
// stability threshold; heavily skewed meshes may need a larger value.
double default_penalty(int degree);

struct AssembledSystem {
  SparseSymMatrix matrix;
  std::vector<double> rhs;
  double gamma = 0.0;
  // Filled by apply_clamped_bc: per-dof flag and prescribed value.
  std::vector<char> constrained;
  std::vector<double> constrained_value;
};

// Assembles B_h.  All integrals use rules exact for the polynomial
// integrands (degree 2k).  The rhs comes back as zeros.
AssembledSystem assemble_bilinear(const FeSpace& space, double gamma);

// Load vector (f, phi_i), integrated with the degree-2k element rule.
std::vector<double> assemble_load(const FeSpace& space,
                                  const std::function<double(Point2)>& f);

// Imposes u = g_D strongly on all boundary nodes (symmetric elimination:
// constrained rows/columns become identity rows, eliminated columns move to
// the rhs) and dn u = g_N weakly through the boundary-edge terms of B_h.
// g_N receives the point and the outward unit normal.
void apply_clamped_bc(AssembledSystem& system, const FeSpace& space,
                      const std::function<double(Point2)>& g_D,
                      const std::function<double(Point2, Point2)>& g_N);

// Traces of all basis functions of one side of an edge at the edge
// quadrature points: normal derivative and second normal derivative taken
// along the edge normal (the minus side's outward normal).
struct EdgeTrace {
  int tri = -1;
  std::vector<int> dofs;
  std::vector<std::vector<double>> dn;  // [q][i]
  std::vector<std::vector<double>> d2n; // [q][i]
};

// side 0 = minus triangle, side 1 = plus (interior edges only).
EdgeTrace edge_trace(const FeSpace& space, int edge, int side,
                     const EdgeRule& rule);

// Squared parts of the mesh-dependent energy norm
//   |||v|||^2 = sum_T ||D2v||^2_T
//             + sum_E |E| ||{d2v/dn2}||^2_E + |E|^{-1} ||[dv/dn]||^2_E
// restricted to a subset of elements.  Edges count when every adjacent
// element lies in the region.
struct SeminormParts {
  double hessian_sq = 0.0;
  double average_sq = 0.0;
  double jump_sq = 0.0;
  double total_sq() const { return hessian_sq + average_sq + jump_sq; }
};

SeminormParts seminorms_on_subdomain(const FeFunction& v,
                                     const std::vector<char>& region);

double energy_norm(const FeFunction& v);

} // namespace c0ip
