#include "c0ip/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "c0ip/assembly.hpp"
#include "c0ip/errors.hpp"
#include "c0ip/quadrature.hpp"

namespace c0ip {

double EstimatorField::total() const {
  double sq = 0.0;
  for (double e : eta) sq += e * e;
  return std::sqrt(sq);
}

EstimatorField estimate(const FeFunction& u_h, const HessianField& hessian) {
  const FeSpace& space = *u_h.space;
  const Triangulation& mesh = space.mesh;
  const int k = space.degree;
  const int nd = space.dofs_per_element();

  const QuadratureRule rule = quadrature_for_triangle(2 * k);
  std::vector<BasisValues> basis_at(rule.size());
  for (int q = 0; q < rule.size(); ++q)
    basis_at[q] = eval_basis_ref(k, rule.points[q]);

  EstimatorField field;
  field.eta.assign(mesh.num_triangles(), 0.0);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const FeSpace::ElementMap map = space.element_map(t);
    const std::vector<int>& dofs = space.elem_dofs[t];
    const double a = map.jinv[0][0], b = map.jinv[0][1];
    const double c = map.jinv[1][0], d = map.jinv[1][1];

    double sq = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      double rxx = 0.0, rxy = 0.0, ryy = 0.0; // reference Hessian of u_h
      double hxx = 0.0, hxy = 0.0, hyx = 0.0, hyy = 0.0;
      for (int i = 0; i < nd; ++i) {
        const double ci = u_h.coeffs[dofs[i]];
        rxx += ci * basis_at[q].hess[i][0];
        rxy += ci * basis_at[q].hess[i][1];
        ryy += ci * basis_at[q].hess[i][2];
        const double phi = basis_at[q].value[i];
        hxx += hessian.xx.coeffs[dofs[i]] * phi;
        hxy += hessian.xy.coeffs[dofs[i]] * phi;
        hyx += hessian.yx.coeffs[dofs[i]] * phi;
        hyy += hessian.yy.coeffs[dofs[i]] * phi;
      }
      const double uxx = a * a * rxx + 2 * a * c * rxy + c * c * ryy;
      const double uxy = a * b * rxx + (a * d + b * c) * rxy + c * d * ryy;
      const double uyy = b * b * rxx + 2 * b * d * rxy + d * d * ryy;

      const double exx = hxx - uxx, exy = hxy - uxy;
      const double eyx = hyx - uxy, eyy = hyy - uyy;
      sq += rule.weights[q] * map.det *
            (exx * exx + exy * exy + eyx * eyx + eyy * eyy);
    }
    field.eta[t] = std::sqrt(sq);
  }
  return field;
}

double effectivity(double eta_total, double h2_error) {
  if (!(h2_error > 0.0))
    throw EffectivityError("effectivity: true error is zero");
  return eta_total / h2_error;
}

std::vector<int> dorfler_mark(const std::vector<double>& eta, double theta,
                              bool theta_squared) {
  if (!(theta > 0.0) || theta > 1.0)
    throw std::invalid_argument("dorfler_mark: theta must be in (0, 1]");

  double total_sq = 0.0;
  for (double e : eta) total_sq += e * e;
  const double target = (theta_squared ? theta * theta : theta) * total_sq;

  std::vector<int> order(eta.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return eta[i] > eta[j]; });

  std::vector<int> marked;
  double acc = 0.0;
  for (int t : order) {
    if (acc >= target) break;
    marked.push_back(t);
    acc += eta[t] * eta[t];
  }
  if (total_sq == 0.0) marked.clear();
  std::sort(marked.begin(), marked.end());
  return marked;
}

double broken_h2_error(const FeFunction& u_h, const ExactSolution& exact) {
  const FeSpace& space = *u_h.space;
  const Triangulation& mesh = space.mesh;
  const int k = space.degree;
  const int nd = space.dofs_per_element();

  const QuadratureRule rule = quadrature_for_triangle(2 * k + 4);
  std::vector<BasisValues> basis_at(rule.size());
  for (int q = 0; q < rule.size(); ++q)
    basis_at[q] = eval_basis_ref(k, rule.points[q]);

  double sq = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const FeSpace::ElementMap map = space.element_map(t);
    const std::vector<int>& dofs = space.elem_dofs[t];
    const double a = map.jinv[0][0], b = map.jinv[0][1];
    const double c = map.jinv[1][0], d = map.jinv[1][1];
    for (int q = 0; q < rule.size(); ++q) {
      double rxx = 0.0, rxy = 0.0, ryy = 0.0;
      for (int i = 0; i < nd; ++i) {
        const double ci = u_h.coeffs[dofs[i]];
        rxx += ci * basis_at[q].hess[i][0];
        rxy += ci * basis_at[q].hess[i][1];
        ryy += ci * basis_at[q].hess[i][2];
      }
      const double uxx = a * a * rxx + 2 * a * c * rxy + c * c * ryy;
      const double uxy = a * b * rxx + (a * d + b * c) * rxy + c * d * ryy;
      const double uyy = b * b * rxx + 2 * b * d * rxy + d * d * ryy;

      const Point2 ref = rule.points[q];
      const Point2 p{map.origin.x + map.j[0][0] * ref.x + map.j[0][1] * ref.y,
                     map.origin.y + map.j[1][0] * ref.x + map.j[1][1] * ref.y};
      const auto ex = exact.hess(p);
      const double dxx = uxx - ex[0], dxy = uxy - ex[1], dyy = uyy - ex[2];
      sq += rule.weights[q] * map.det *
            (dxx * dxx + 2.0 * dxy * dxy + dyy * dyy);
    }
  }
  return std::sqrt(sq);
}

std::vector<AdaptRecord> adaptive_loop(const Triangulation& initial_mesh,
                                       const ExactSolution& exact,
                                       const AdaptiveOptions& options,
                                       const AdaptCallback& on_iteration) {
  verify_solution_consistency(exact);
  const double gamma = options.gamma > 0.0 ? options.gamma
                                           : default_penalty(options.degree);
  Triangulation mesh = initial_mesh;
  if (mesh.edges.empty()) build_edge_topology(mesh);

  std::vector<AdaptRecord> records;
  for (int iter = 0;; ++iter) {
    const FeSpace space = build_space(mesh, options.degree);

    AssembledSystem system = assemble_bilinear(space, gamma);
    std::vector<double> load = assemble_load(space, exact.f);
    for (int i = 0; i < space.num_dofs; ++i) system.rhs[i] += load[i];
    apply_clamped_bc(
        system, space, exact.u,
        [&](Point2 p, Point2 n) { return exact.normal_derivative(p, n); });

    FeFunction u_h{&space,
                   spd_solve(system.matrix, system.rhs, options.solver)};

    const RecoveryOperator op =
        build_recovery(space, options.same_type_sampling);
    const HessianField hessian = recover_hessian(op, u_h);
    const EstimatorField est = estimate(u_h, hessian);
    const double err = broken_h2_error(u_h, exact);

    AdaptRecord rec;
    rec.iteration = iter;
    rec.dofs = space.num_dofs;
    rec.eta_total = est.total();
    rec.h2_error = err;
    rec.kappa = effectivity(rec.eta_total, err);
    records.push_back(rec);

    if (on_iteration) on_iteration(iter, mesh, u_h);

    if (space.num_dofs >= options.max_dofs) break;
    const std::vector<int> marked =
        dorfler_mark(est.eta, options.theta, options.theta_squared);
    if (marked.empty()) break;

    Triangulation next = refine_bisection(mesh, marked);
    if (next.num_triangles() <= mesh.num_triangles()) break; // no progress
    mesh = std::move(next);
  }
  return records;
}

} // namespace c0ip
