#include "c0ip/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace c0ip {

void gauss_legendre(int num_points, std::vector<double>& points,
                    std::vector<double>& weights) {
  if (num_points < 1)
    throw std::invalid_argument("gauss_legendre: need at least one point");
  const int n = num_points;
  points.assign(n, 0.0);
  weights.assign(n, 0.0);
  // Newton iteration on the Legendre polynomial over [-1,1], then map the
  // nodes to [0,1] and halve the weights.
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    points[i] = 0.5 * (1.0 + x);
    weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
}

QuadratureRule quadrature_for_triangle(int degree_needed) {
  if (degree_needed < 0 || degree_needed > 16)
    throw std::invalid_argument(
        "quadrature_for_triangle: degree must be in [0, 16]");
  // Collapse the unit square onto the triangle:
  //   int_T f = int_0^1 int_0^1 f(u, v(1-u)) (1-u) dv du.
  // For f of total degree d the integrand has degree d+1 in u and d in v.
  const int d = degree_needed;
  const int nu = (d + 3) / 2; // exactness 2*nu-1 >= d+1
  const int nv = (d + 2) / 2; // exactness 2*nv-1 >= d
  std::vector<double> up, uw, vp, vw;
  gauss_legendre(nu, up, uw);
  gauss_legendre(nv, vp, vw);

  QuadratureRule rule;
  rule.exactness_degree = d;
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nv; ++j) {
      rule.points.push_back({up[i], vp[j] * (1.0 - up[i])});
      rule.weights.push_back(uw[i] * vw[j] * (1.0 - up[i]));
    }
  return rule;
}

EdgeRule quadrature_for_edge(int degree_needed) {
  if (degree_needed < 0 || degree_needed > 16)
    throw std::invalid_argument(
        "quadrature_for_edge: degree must be in [0, 16]");
  EdgeRule rule;
  rule.exactness_degree = degree_needed;
  gauss_legendre((degree_needed + 2) / 2, rule.points, rule.weights);
  return rule;
}

} // namespace c0ip
