#pragma once

#include <array>
#include <functional>
#include <string>

#include "c0ip/geometry.hpp"

namespace c0ip {

// A manufactured solution of the clamped plate problem on a fixed domain.
// Hessians are stored as (xx, xy, yy).
struct ExactSolution {
  std::string name;
  Polygon domain;
  std::function<double(Point2)> u;
  std::function<Point2(Point2)> grad;
  std::function<std::array<double, 3>(Point2)> hess;
  std::function<double(Point2)> f; // Lap^2 u

  double normal_derivative(Point2 p, Point2 n) const {
    const Point2 g = grad(p);
    return g.x * n.x + g.y * n.y;
  }
};

// u = sin^2(pi x) sin^2(pi y) on the unit square; u and du/dn vanish on the
// boundary, f is derived in closed form.
ExactSolution square_solution();

// u = r^(5/3) sin(5 theta / 3) on the L-shaped domain, theta in [0, 3pi/2]
// measured from the positive x-axis.  Biharmonic (f = 0) with a Hessian
// singularity ~ r^(-1/3) at the reentrant corner; derivative evaluation at
// the corner itself throws EvaluationError.
ExactSolution lshape_solution();

// Finite-difference Laplacian of Laplacian (5-point stencil applied twice).
double fd_biharmonic(const std::function<double(Point2)>& u, Point2 p,
                     double step);

// Central-difference gradient / Hessian, used to cross-check the closed
// forms.
Point2 fd_gradient(const std::function<double(Point2)>& u, Point2 p,
                   double step);
std::array<double, 3> fd_hessian(const std::function<double(Point2)>& u,
                                 Point2 p, double step);

// Cross-checks f, grad and hess of an exact solution against finite
/// differences at a fixed set of interior points; throws std::runtime_error
// on disagreement.  Runs before any experiment uses the solution.
void verify_solution_consistency(const ExactSolution& exact);

} // namespace c0ip
