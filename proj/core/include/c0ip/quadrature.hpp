#pragma once

#include <vector>

#include "c0ip/geometry.hpp"

namespace c0ip {

// Quadrature on the reference triangle {(0,0), (1,0), (0,1)}.  Weights are
// strictly positive and sum to the reference area 1/2.
struct QuadratureRule {
  int exactness_degree = 0;
  std::vector<Point2> points;
  std::vector<double> weights;
  int size() const { return static_cast<int>(points.size()); }
};

// Gauss points on the reference interval [0,1]; weights sum to 1.
struct EdgeRule {
  int exactness_degree = 0;
  std::vector<double> points;
  std::vector<double> weights;
  int size() const { return static_cast<int>(points.size()); }
};

// Rule integrating all polynomials of total degree <= degree_needed exactly.
// Built as a collapsed tensor-product Gauss rule, so any requested degree is
// available; degree_needed is capped at 16 to keep rule sizes sane.
QuadratureRule quadrature_for_triangle(int degree_needed);

EdgeRule quadrature_for_edge(int degree_needed);

// Gauss-Legendre nodes/weights on [0,1] (weights sum to 1).
void gauss_legendre(int num_points, std::vector<double>& points,
                    std::vector<double>& weights);

} // namespace c0ip
