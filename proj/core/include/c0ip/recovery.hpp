#pragma once

#include <vector>

#include "c0ip/space.hpp"

namespace c0ip {

// Polynomial-preserving gradient recovery.  Around every global node z an
// element patch is grown (rings of vertex-neighbours, starting from the
// elements touching z) until it carries enough samples for a stable
// least-squares fit of a polynomial of degree k+1 in coordinates scaled by
// the patch diameter.  The recovered gradient at z is the gradient of that
// fit; applying the same operator to both gradient components yields the
// recovered Hessian.

struct RecoveryPatch {
  std::vector<int> elements; // patch elements, ascending
  std::vector<int> samples;  // sampled global nodes, ascending
  int rings = 0;             // growth rounds used
  double scale = 1.0;        // local length scale (patch diameter)
  double condition = 0.0;    // condition number of the scaled normal matrix
  bool fell_back_to_all = false; // same-type sampling was abandoned
};

// same_type restricts the samples to nodes of the same kind (vertex / edge
// direction class / interior) as the center node, falling back to all nodes
// when that starves the fit.
RecoveryPatch build_patch(const FeSpace& space, int node, bool same_type);

// Least-squares fit of a degree-(k+1) polynomial to the sampled values, in
// coordinates centered at the node and scaled by patch.scale.  Returns the
// monomial coefficients (ordered by total degree, then y-power).
std::vector<double> fit_polynomial(const FeSpace& space,
                                   const RecoveryPatch& patch, int node,
                                   const std::vector<double>& values);

// The linear operator u |-> (G_x u, G_y u): per node, the sample list and
// the weights producing the two recovered derivative values.
struct RecoveryOperator {
  const FeSpace* space = nullptr;
  bool same_type = false;
  int fallback_count = 0;
  std::vector<std::vector<int>> samples;
  std::vector<std::vector<double>> wx, wy;
};

RecoveryOperator build_recovery(const FeSpace& space, bool same_type);

// One application: two FE functions (d/dx and d/dy of the recovery fits).
std::pair<FeFunction, FeFunction> apply_recovery(const RecoveryOperator& op,
                                                 const FeFunction& u);

std::pair<FeFunction, FeFunction> recover_gradient(const FeFunction& u,
                                                   bool same_type = false);

// Recovered Hessian: the recovery operator applied to its own output,
// component (a,b) = G_a(G_b u).  All four components are kept; xy and yx
// differ in general.
struct HessianField {
  FeFunction xx, xy, yx, yy;
};

HessianField recover_hessian(const FeFunction& u, bool same_type = false);
HessianField recover_hessian(const RecoveryOperator& op, const FeFunction& u);

} // namespace c0ip
