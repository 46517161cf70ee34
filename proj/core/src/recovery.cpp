#include "c0ip/recovery.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "c0ip/errors.hpp"

namespace c0ip {

namespace {

// Cap on the condition number of the scaled normal matrix before the patch
// is grown by another ring.  The attainable conditioning of a degree-(k+1)
// fit worsens by roughly two orders of magnitude per degree (and corner
// patches sit near the ceiling for their degree), so the cap scales the
// same way; a flat cap either never triggers for k=2 or never terminates
// for k=4.
double condition_cap(int degree) {
  return 1e6 * std::pow(100.0, degree - 2);
}

struct Adjacency {
  std::vector<std::vector<int>> node_to_elems;
  std::vector<std::vector<int>> vertex_to_elems;
};

Adjacency build_adjacency(const FeSpace& space) {
  Adjacency adj;
  adj.node_to_elems.resize(space.num_dofs);
  for (int t = 0; t < space.mesh.num_triangles(); ++t)
    for (int dof : space.elem_dofs[t]) adj.node_to_elems[dof].push_back(t);
  adj.vertex_to_elems = space.mesh.vertex_to_triangles();
  return adj;
}

// Monomial powers for P_{k+1}, ordered by total degree then y-power (the
// same order fit_polynomial documents).
std::vector<std::array<int, 2>> fit_monomials(int fit_degree) {
  std::vector<std::array<int, 2>> out;
  for (int d = 0; d <= fit_degree; ++d)
    for (int py = 0; py <= d; ++py) out.push_back({d - py, py});
  return out;
}

Eigen::MatrixXd sample_matrix(const FeSpace& space,
                              const std::vector<int>& samples, Point2 center,
                              double scale,
                              const std::vector<std::array<int, 2>>& monos) {
  const int m = static_cast<int>(samples.size());
  const int np = static_cast<int>(monos.size());
  Eigen::MatrixXd a(m, np);
  for (int j = 0; j < m; ++j) {
    const Point2 d = space.node_coords[samples[j]] - center;
    const double sx = d.x / scale, sy = d.y / scale;
    for (int p = 0; p < np; ++p)
      a(j, p) = std::pow(sx, monos[p][0]) * std::pow(sy, monos[p][1]);
  }
  return a;
}

double condition_of_normal_matrix(const Eigen::MatrixXd& a) {
  const Eigen::MatrixXd normal = a.transpose() * a;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(normal);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

std::vector<int> collect_samples(const FeSpace& space,
                                 const std::set<int>& elements,
                                 const NodeKind* want_kind) {
  std::set<int> nodes;
  for (int t : elements)
    for (int dof : space.elem_dofs[t]) {
      if (want_kind && !(space.node_kind[dof] == *want_kind)) continue;
      nodes.insert(dof);
    }
  return {nodes.begin(), nodes.end()};
}

void grow_one_ring(const FeSpace& space, const Adjacency& adj,
                   std::set<int>& elements) {
  std::set<int> next = elements;
  for (int t : elements)
    for (int local = 0; local < 3; ++local) {
      const int v = space.mesh.triangles[t].v[local];
      next.insert(adj.vertex_to_elems[v].begin(),
                  adj.vertex_to_elems[v].end());
    }
  elements.swap(next);
}

RecoveryPatch build_patch_impl(const FeSpace& space, const Adjacency& adj,
                               int node, bool same_type) {
  const int fit_dim = polynomial_space_dim(space.degree + 1);
  const auto monos = fit_monomials(space.degree + 1);
  const Point2 center = space.node_coords[node];
  const int total_elems = space.mesh.num_triangles();

  for (int attempt = 0; attempt < (same_type ? 2 : 1); ++attempt) {
    const bool restrict_kind = same_type && attempt == 0;
    const NodeKind kind = space.node_kind[node];

    std::set<int> elements(adj.node_to_elems[node].begin(),
                           adj.node_to_elems[node].end());
    int rings = 0;
    while (true) {
      RecoveryPatch patch;
      patch.elements.assign(elements.begin(), elements.end());
      patch.samples = collect_samples(space, elements,
                                      restrict_kind ? &kind : nullptr);
      patch.rings = rings;
      patch.fell_back_to_all = same_type && !restrict_kind;
      if (static_cast<int>(patch.samples.size()) >= fit_dim) {
        double scale = 0.0;
        for (int s : patch.samples)
          scale = std::max(scale,
                           distance(center, space.node_coords[s]));
        patch.scale = scale > 0.0 ? scale : 1.0;
        const Eigen::MatrixXd a = sample_matrix(space, patch.samples, center,
                                                patch.scale, monos);
        patch.condition = condition_of_normal_matrix(a);
        if (patch.condition <= condition_cap(space.degree)) return patch;
      }
      if (static_cast<int>(elements.size()) >= total_elems) break;
      grow_one_ring(space, adj, elements);
      ++rings;
    }
  }
  throw PatchError("build_patch: node " + std::to_string(node) +
                   " cannot reach a well-conditioned sample set");
}

} // namespace

RecoveryPatch build_patch(const FeSpace& space, int node, bool same_type) {
  if (node < 0 || node >= space.num_dofs)
    throw std::invalid_argument("build_patch: node out of range");
  const Adjacency adj = build_adjacency(space);
  return build_patch_impl(space, adj, node, same_type);
}

std::vector<double> fit_polynomial(const FeSpace& space,
                                   const RecoveryPatch& patch, int node,
                                   const std::vector<double>& values) {
  if (values.size() != patch.samples.size())
    throw std::invalid_argument(
        "fit_polynomial: one value per patch sample expected");
  const auto monos = fit_monomials(space.degree + 1);
  const Eigen::MatrixXd a = sample_matrix(
      space, patch.samples, space.node_coords[node], patch.scale, monos);
  const Eigen::Map<const Eigen::VectorXd> b(values.data(), values.size());
  const Eigen::VectorXd c = a.householderQr().solve(b);
  return {c.data(), c.data() + c.size()};
}

RecoveryOperator build_recovery(const FeSpace& space, bool same_type) {
  const Adjacency adj = build_adjacency(space);
  const auto monos = fit_monomials(space.degree + 1);
  const int np = static_cast<int>(monos.size());

  RecoveryOperator op;
  op.space = &space;
  op.same_type = same_type;
  op.samples.resize(space.num_dofs);
  op.wx.resize(space.num_dofs);
  op.wy.resize(space.num_dofs);

  for (int node = 0; node < space.num_dofs; ++node) {
    const RecoveryPatch patch =
        build_patch_impl(space, adj, node, same_type);
    if (patch.fell_back_to_all) ++op.fallback_count;
    const int m = static_cast<int>(patch.samples.size());
    const Eigen::MatrixXd a = sample_matrix(
        space, patch.samples, space.node_coords[node], patch.scale, monos);

    // Weights = rows 1 and 2 (the linear monomials) of the pseudo-inverse,
    // from the thin QR factorization: pinv = R^-1 Q1^T.
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    const Eigen::MatrixXd q1 =
        qr.householderQ() * Eigen::MatrixXd::Identity(m, np);
    const Eigen::MatrixXd r =
        qr.matrixQR().topRows(np).triangularView<Eigen::Upper>();
    Eigen::VectorXd ex = Eigen::VectorXd::Zero(np);
    Eigen::VectorXd ey = Eigen::VectorXd::Zero(np);
    ex(1) = 1.0; // coefficient of x
    ey(2) = 1.0; // coefficient of y
    const Eigen::VectorXd zx =
        r.transpose().triangularView<Eigen::Lower>().solve(ex);
    const Eigen::VectorXd zy =
        r.transpose().triangularView<Eigen::Lower>().solve(ey);
    const Eigen::VectorXd wx = q1 * zx / patch.scale;
    const Eigen::VectorXd wy = q1 * zy / patch.scale;

    op.samples[node] = patch.samples;
    op.wx[node].assign(wx.data(), wx.data() + m);
    op.wy[node].assign(wy.data(), wy.data() + m);
  }
  return op;
}

std::pair<FeFunction, FeFunction> apply_recovery(const RecoveryOperator& op,
                                                 const FeFunction& u) {
  const FeSpace& space = *op.space;
  if (u.space != &space)
    throw std::invalid_argument("apply_recovery: space mismatch");
  FeFunction gx, gy;
  gx.space = gy.space = &space;
  gx.coeffs.assign(space.num_dofs, 0.0);
  gy.coeffs.assign(space.num_dofs, 0.0);
  for (int node = 0; node < space.num_dofs; ++node) {
    double sx = 0.0, sy = 0.0;
    const auto& samples = op.samples[node];
    for (std::size_t j = 0; j < samples.size(); ++j) {
      const double v = u.coeffs[samples[j]];
      sx += op.wx[node][j] * v;
      sy += op.wy[node][j] * v;
    }
    gx.coeffs[node] = sx;
    gy.coeffs[node] = sy;
  }
  return {std::move(gx), std::move(gy)};
}

std::pair<FeFunction, FeFunction> recover_gradient(const FeFunction& u,
                                                   bool same_type) {
  const RecoveryOperator op = build_recovery(*u.space, same_type);
  return apply_recovery(op, u);
}

HessianField recover_hessian(const RecoveryOperator& op,
                             const FeFunction& u) {
  const auto [gx, gy] = apply_recovery(op, u);
  auto [xx, yx] = apply_recovery(op, gx);
  auto [xy, yy] = apply_recovery(op, gy);
  HessianField h;
  h.xx = std::move(xx);
  h.xy = std::move(xy);
  h.yx = std::move(yx);
  h.yy = std::move(yy);
  return h;
}

HessianField recover_hessian(const FeFunction& u, bool same_type) {
  const RecoveryOperator op = build_recovery(*u.space, same_type);
  return recover_hessian(op, u);
}

} // namespace c0ip
