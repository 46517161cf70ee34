#include "c0ip/study.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "c0ip/delaunay.hpp"
#include "c0ip/quadrature.hpp"

namespace c0ip {

InteriorSplit interior_split(const FeSpace& space, const Polygon& domain,
                             double L, bool by_all_nodes) {
  if (L < 0.0)
    throw std::invalid_argument("interior_split: L must be nonnegative");

  InteriorSplit split;
  split.node_near_boundary.assign(space.num_dofs, 0);
  for (int i = 0; i < space.num_dofs; ++i)
    split.node_near_boundary[i] =
        distance_to_polygon_boundary(space.node_coords[i], domain) <= L;

  const Triangulation& mesh = space.mesh;
  split.omega2.assign(mesh.num_triangles(), 0);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const std::vector<int>& dofs = space.elem_dofs[t];
    const int checked = by_all_nodes ? static_cast<int>(dofs.size()) : 3;
    bool all_near = true;
    for (int i = 0; i < checked && all_near; ++i)
      all_near = split.node_near_boundary[dofs[i]] != 0;
    split.omega2[t] = all_near ? 0 : 1;
    ++(all_near ? split.omega1_count : split.omega2_count);
  }
  return split;
}

ErrorNorms error_norms(const FeFunction& u_h, const HessianField& hessian,
                       const ExactSolution& exact,
                       const std::vector<char>& omega2,
                       int quadrature_boost) {
  const FeSpace& space = *u_h.space;
  const Triangulation& mesh = space.mesh;
  if (static_cast<int>(omega2.size()) != mesh.num_triangles())
    throw std::invalid_argument("error_norms: region size mismatch");

  const int k = space.degree;
  const int nd = space.dofs_per_element();
  const QuadratureRule rule =
      quadrature_for_triangle(2 * k + 4 + quadrature_boost);
  std::vector<BasisValues> basis_at(rule.size());
  for (int q = 0; q < rule.size(); ++q)
    basis_at[q] = eval_basis_ref(k, rule.points[q]);

  double he_sq = 0.0, hre_sq = 0.0, hre_inf = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const FeSpace::ElementMap map = space.element_map(t);
    const std::vector<int>& dofs = space.elem_dofs[t];
    const double a = map.jinv[0][0], b = map.jinv[0][1];
    const double c = map.jinv[1][0], d = map.jinv[1][1];

    for (int q = 0; q < rule.size(); ++q) {
      double rxx = 0.0, rxy = 0.0, ryy = 0.0;
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

      const Point2 ref = rule.points[q];
      const Point2 p{map.origin.x + map.j[0][0] * ref.x + map.j[0][1] * ref.y,
                     map.origin.y + map.j[1][0] * ref.x + map.j[1][1] * ref.y};
      const auto ex = exact.hess(p);
      const double w = rule.weights[q] * map.det;

      const double dxx = uxx - ex[0], dxy = uxy - ex[1], dyy = uyy - ex[2];
      he_sq += w * (dxx * dxx + 2.0 * dxy * dxy + dyy * dyy);

      if (omega2[t]) {
        const double exx = hxx - ex[0], exy = hxy - ex[1];
        const double eyx = hyx - ex[1], eyy = hyy - ex[2];
        const double frob_sq =
            exx * exx + exy * exy + eyx * eyx + eyy * eyy;
        hre_sq += w * frob_sq;
        hre_inf = std::max(hre_inf, std::sqrt(frob_sq));
      }
    }

    // Lagrange nodes extend the per-element sup sample set; the recovered
    // field is nodal there, so its values are the coefficients themselves.
    if (omega2[t]) {
      for (int i = 0; i < nd; ++i) {
        const int dof = dofs[i];
        const auto ex = exact.hess(space.node_coords[dof]);
        const double exx = hessian.xx.coeffs[dof] - ex[0];
        const double exy = hessian.xy.coeffs[dof] - ex[1];
        const double eyx = hessian.yx.coeffs[dof] - ex[1];
        const double eyy = hessian.yy.coeffs[dof] - ex[2];
        hre_inf = std::max(hre_inf, std::sqrt(exx * exx + exy * exy +
                                              eyx * eyx + eyy * eyy));
      }
    }
  }

  ErrorNorms norms;
  norms.he0 = std::sqrt(he_sq);
  norms.hre0 = std::sqrt(hre_sq);
  norms.hre_inf = hre_inf;
  return norms;
}

SolvedProblem solve_problem(const Triangulation& mesh,
                            const ExactSolution& exact, int degree,
                            double gamma, bool same_type_sampling,
                            const SolveOptions& solver) {
  SolvedProblem out;
  out.space = build_space(mesh, degree);
  const double g = gamma > 0.0 ? gamma : default_penalty(degree);

  out.system = assemble_bilinear(out.space, g);
  const std::vector<double> load = assemble_load(out.space, exact.f);
  for (int i = 0; i < out.space.num_dofs; ++i) out.system.rhs[i] += load[i];
  apply_clamped_bc(
      out.system, out.space, exact.u,
      [&](Point2 p, Point2 n) { return exact.normal_derivative(p, n); });

  out.u = spd_solve(out.system.matrix, out.system.rhs, solver);

  const FeFunction u_h{&out.space, out.u};
  const RecoveryOperator op = build_recovery(out.space, same_type_sampling);
  HessianField h = recover_hessian(op, u_h);
  out.hxx = std::move(h.xx.coeffs);
  out.hxy = std::move(h.xy.coeffs);
  out.hyx = std::move(h.yx.coeffs);
  out.hyy = std::move(h.yy.coeffs);
  return out;
}

Triangulation study_mesh(const StudyConfig& config, int n) {
  if (config.family == MeshFamily::Pattern)
    return generate_uniform(config.pattern, n);

  int levels = 0;
  for (int m = n; m != 8; ++levels) {
    if (m < 8 || m % 2 != 0)
      throw std::invalid_argument(
          "study_mesh: Delaunay family sizes must be 8 * 2^j");
    m /= 2;
  }
  Triangulation mesh = delaunay_triangulate(unit_square_cloud());
  for (int i = 0; i < levels; ++i) mesh = refine_regular(mesh);
  return mesh;
}

std::vector<StudyRow> convergence_study(const ExactSolution& exact,
                                        const StudyConfig& config,
                                        const StudyCallback& on_level) {
  if (config.ns.empty())
    throw std::invalid_argument("convergence_study: no mesh sizes");
  for (std::size_t i = 1; i < config.ns.size(); ++i)
    if (config.ns[i] != 2 * config.ns[i - 1])
      throw std::invalid_argument(
          "convergence_study: each level must double the previous one");

  verify_solution_consistency(exact);

  std::vector<StudyRow> rows;
  for (int n : config.ns) {
    const Triangulation mesh = study_mesh(config, n);
    const SolvedProblem solved =
        solve_problem(mesh, exact, config.degree, config.gamma,
                      config.same_type_sampling, config.solver);
    const InteriorSplit split =
        interior_split(solved.space, exact.domain, config.interior_distance,
                       config.interior_by_nodes);
    const FeFunction u_h = solved.solution();
    const HessianField hessian = solved.hessian();

    StudyRow row;
    row.n = n;
    row.dofs = solved.space.num_dofs;
    row.norms = error_norms(u_h, hessian, exact, split.omega2);
    if (rows.empty()) {
      row.he0_order = row.hre0_order = row.hre_inf_order =
          std::numeric_limits<double>::quiet_NaN();
    } else {
      const StudyRow& prev = rows.back();
      row.he0_order = std::log2(prev.norms.he0 / row.norms.he0);
      row.hre0_order = std::log2(prev.norms.hre0 / row.norms.hre0);
      row.hre_inf_order = std::log2(prev.norms.hre_inf / row.norms.hre_inf);
    }
    rows.push_back(row);
    if (on_level) on_level(rows.back(), solved);
  }
  return rows;
}

namespace {

std::string csv_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

std::string csv_order(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

} // namespace

void write_convergence_csv(std::ostream& out,
                           const std::vector<StudyRow>& rows) {
  out << "inv_h,He0,He0_order,Hre0,Hre0_order,HreInf,HreInf_order\n";
  for (const StudyRow& r : rows)
    out << r.n << ',' << csv_value(r.norms.he0) << ','
        << csv_order(r.he0_order) << ',' << csv_value(r.norms.hre0) << ','
        << csv_order(r.hre0_order) << ',' << csv_value(r.norms.hre_inf) << ','
        << csv_order(r.hre_inf_order) << '\n';
}

void write_adaptive_csv(std::ostream& out,
                        const std::vector<AdaptRecord>& records) {
  out << "# effective mesh size: h = dofs^(-1/2)\n";
  out << "iter,dofs,eta_total,h2_error,kappa\n";
  for (const AdaptRecord& r : records)
    out << r.iteration << ',' << r.dofs << ',' << csv_value(r.eta_total)
        << ',' << csv_value(r.h2_error) << ',' << csv_value(r.kappa) << '\n';
}

} // namespace c0ip
