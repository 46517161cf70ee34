#include "c0ip/assembly.hpp"

#include <cmath>
#include <stdexcept>

#include "c0ip/errors.hpp"

namespace c0ip {

double default_penalty(int degree) { return static_cast<double>(degree) * degree; }

namespace {

// Physical Hessians (xx, xy, yy) of all basis functions at one reference
// point of one element.
std::vector<std::array<double, 3>> physical_hessians(
    const BasisValues& basis, const FeSpace::ElementMap& map) {
  const double a = map.jinv[0][0], b = map.jinv[0][1];
  const double c = map.jinv[1][0], d = map.jinv[1][1];
  std::vector<std::array<double, 3>> out(basis.hess.size());
  for (std::size_t i = 0; i < basis.hess.size(); ++i) {
    const double hxx = basis.hess[i][0];
    const double hxy = basis.hess[i][1];
    const double hyy = basis.hess[i][2];
    out[i] = {a * a * hxx + 2 * a * c * hxy + c * c * hyy,
              a * b * hxx + (a * d + b * c) * hxy + c * d * hyy,
              b * b * hxx + 2 * b * d * hxy + d * d * hyy};
  }
  return out;
}

Point2 physical_gradient(const Point2 ref_grad, const FeSpace::ElementMap& m) {
  return {m.jinv[0][0] * ref_grad.x + m.jinv[1][0] * ref_grad.y,
          m.jinv[0][1] * ref_grad.x + m.jinv[1][1] * ref_grad.y};
}

double frobenius_product(const std::array<double, 3>& a,
                         const std::array<double, 3>& b) {
  return a[0] * b[0] + 2.0 * a[1] * b[1] + a[2] * b[2];
}

} // namespace

EdgeTrace edge_trace(const FeSpace& space, int edge, int side,
                     const EdgeRule& rule) {
  const Triangulation& mesh = space.mesh;
  const Edge& ed = mesh.edges[edge];
  if (side < 0 || side > 1 || ed.tri[side] < 0)
    throw std::invalid_argument("edge_trace: no triangle on that side");

  EdgeTrace trace;
  trace.tri = ed.tri[side];
  trace.dofs = space.elem_dofs[trace.tri];

  const Point2 a = mesh.vertices[ed.v[0]];
  const Point2 b = mesh.vertices[ed.v[1]];
  const Point2 n = mesh.edge_normal(edge);
  const FeSpace::ElementMap map = space.element_map(trace.tri);

  trace.dn.resize(rule.size());
  trace.d2n.resize(rule.size());
  for (int q = 0; q < rule.size(); ++q) {
    const Point2 p = a + rule.points[q] * (b - a);
    const Point2 d = p - map.origin;
    const Point2 ref{map.jinv[0][0] * d.x + map.jinv[0][1] * d.y,
                     map.jinv[1][0] * d.x + map.jinv[1][1] * d.y};
    const BasisValues basis = eval_basis_ref(space.degree, ref);
    const auto hess = physical_hessians(basis, map);
    const int ndofs = static_cast<int>(trace.dofs.size());
    trace.dn[q].resize(ndofs);
    trace.d2n[q].resize(ndofs);
    for (int i = 0; i < ndofs; ++i) {
      const Point2 g = physical_gradient(basis.grad[i], map);
      trace.dn[q][i] = dot(n, g);
      trace.d2n[q][i] = n.x * n.x * hess[i][0] + 2.0 * n.x * n.y * hess[i][1] +
                        n.y * n.y * hess[i][2];
    }
  }
  return trace;
}

AssembledSystem assemble_bilinear(const FeSpace& space, double gamma) {
  if (!(gamma > 0.0))
    throw std::invalid_argument("assemble_bilinear: gamma must be positive");

  const Triangulation& mesh = space.mesh;
  const int k = space.degree;
  std::vector<Triplet> triplets;

  // Element terms: int_T D2 phi_i : D2 phi_j.  The reference basis is
  // evaluated once per quadrature point and shared by all elements.
  const QuadratureRule rule = quadrature_for_triangle(2 * k);
  std::vector<BasisValues> basis_at(rule.size());
  for (int q = 0; q < rule.size(); ++q)
    basis_at[q] = eval_basis_ref(k, rule.points[q]);

  const int nd = space.dofs_per_element();
  std::vector<double> local(static_cast<std::size_t>(nd) * nd);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const FeSpace::ElementMap map = space.element_map(t);
    std::fill(local.begin(), local.end(), 0.0);
    for (int q = 0; q < rule.size(); ++q) {
      const auto hess = physical_hessians(basis_at[q], map);
      const double w = rule.weights[q] * map.det;
      for (int i = 0; i < nd; ++i)
        for (int j = 0; j <= i; ++j) {
          const double v = w * frobenius_product(hess[i], hess[j]);
          local[i * nd + j] += v;
          if (i != j) local[j * nd + i] += v;
        }
    }
    const std::vector<int>& dofs = space.elem_dofs[t];
    for (int i = 0; i < nd; ++i)
      for (int j = 0; j < nd; ++j)
        triplets.push_back({dofs[i], dofs[j], local[i * nd + j]});
  }

  // Edge terms.  Traces from both sides are stacked into one list; shared
  // dofs appear twice and their contributions accumulate correctly.
  const EdgeRule erule = quadrature_for_edge(2 * k);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const bool boundary = mesh.is_boundary_edge(e);
    const double len = mesh.edge_length(e);

    std::vector<int> dofs;
    // Per stacked entry and quadrature point: jump and average weights.
    std::vector<std::vector<double>> jump, avg;
    const EdgeTrace minus = edge_trace(space, e, 0, erule);
    const int nq = erule.size();
    jump.assign(nq, {});
    avg.assign(nq, {});
    dofs = minus.dofs;
    for (int q = 0; q < nq; ++q)
      for (std::size_t i = 0; i < minus.dofs.size(); ++i) {
        if (boundary) {
          // One-sided convention: {x} = trace, [x] = -trace.
          avg[q].push_back(minus.d2n[q][i]);
          jump[q].push_back(-minus.dn[q][i]);
        } else {
          avg[q].push_back(0.5 * minus.d2n[q][i]);
          jump[q].push_back(-minus.dn[q][i]);
        }
      }
    if (!boundary) {
      const EdgeTrace plus = edge_trace(space, e, 1, erule);
      dofs.insert(dofs.end(), plus.dofs.begin(), plus.dofs.end());
      for (int q = 0; q < nq; ++q)
        for (std::size_t i = 0; i < plus.dofs.size(); ++i) {
          avg[q].push_back(0.5 * plus.d2n[q][i]);
          jump[q].push_back(plus.dn[q][i]);
        }
    }

    const int m = static_cast<int>(dofs.size());
    std::vector<double> elocal(static_cast<std::size_t>(m) * m, 0.0);
    for (int q = 0; q < nq; ++q) {
      const double w = erule.weights[q] * len;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          elocal[i * m + j] +=
              w * (avg[q][i] * jump[q][j] + jump[q][i] * avg[q][j] +
                   (gamma / len) * jump[q][i] * jump[q][j]);
    }
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        triplets.push_back({dofs[i], dofs[j], elocal[i * m + j]});
  }

  AssembledSystem system;
  system.gamma = gamma;
  system.matrix = SparseSymMatrix::from_triplets(space.num_dofs,
                                                 std::move(triplets));
  system.rhs.assign(space.num_dofs, 0.0);
  return system;
}

std::vector<double> assemble_load(const FeSpace& space,
                                  const std::function<double(Point2)>& f) {
  const Triangulation& mesh = space.mesh;
  const int k = space.degree;
  const QuadratureRule rule = quadrature_for_triangle(2 * k);
  std::vector<BasisValues> basis_at(rule.size());
  for (int q = 0; q < rule.size(); ++q)
    basis_at[q] = eval_basis_ref(k, rule.points[q]);

  std::vector<double> rhs(space.num_dofs, 0.0);
  const int nd = space.dofs_per_element();
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const FeSpace::ElementMap map = space.element_map(t);
    const std::vector<int>& dofs = space.elem_dofs[t];
    for (int q = 0; q < rule.size(); ++q) {
      const Point2 ref = rule.points[q];
      const Point2 p{map.origin.x + map.j[0][0] * ref.x + map.j[0][1] * ref.y,
                     map.origin.y + map.j[1][0] * ref.x + map.j[1][1] * ref.y};
      const double w = rule.weights[q] * map.det * f(p);
      for (int i = 0; i < nd; ++i) rhs[dofs[i]] += w * basis_at[q].value[i];
    }
  }
  return rhs;
}

void apply_clamped_bc(AssembledSystem& system, const FeSpace& space,
                      const std::function<double(Point2)>& g_D,
                      const std::function<double(Point2, Point2)>& g_N) {
  const Triangulation& mesh = space.mesh;
  const int n = space.num_dofs;
  if (system.matrix.n != n || static_cast<int>(system.rhs.size()) != n)
    throw std::invalid_argument("apply_clamped_bc: system/space mismatch");

  // Weak data terms for the normal derivative: for the consistent form,
  //   rhs_i += - int_E gN d2n(phi_i) + (gamma/|E|) int_E gN dn(phi_i)
  // on every boundary edge (the terms of B_h that involve the known jump
  // [du/dn] = -gN, moved to the right-hand side).
  const EdgeRule erule = quadrature_for_edge(2 * space.degree + 2);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (!mesh.is_boundary_edge(e)) continue;
    const double len = mesh.edge_length(e);
    const Point2 a = mesh.vertices[mesh.edges[e].v[0]];
    const Point2 b = mesh.vertices[mesh.edges[e].v[1]];
    const Point2 normal = mesh.edge_normal(e);
    const EdgeTrace trace = edge_trace(space, e, 0, erule);
    for (int q = 0; q < erule.size(); ++q) {
      const Point2 p = a + erule.points[q] * (b - a);
      const double gn = g_N(p, normal);
      const double w = erule.weights[q] * len * gn;
      for (std::size_t i = 0; i < trace.dofs.size(); ++i)
        system.rhs[trace.dofs[i]] +=
            w * (-trace.d2n[q][i] + (system.gamma / len) * trace.dn[q][i]);
    }
  }

  // Strong Dirichlet values on boundary nodes.
  system.constrained.assign(n, 0);
  system.constrained_value.assign(n, 0.0);
  for (int dof : space.boundary_dofs) {
    system.constrained[dof] = 1;
    system.constrained_value[dof] = g_D(space.node_coords[dof]);
  }

  // Symmetric elimination: move constrained columns to the rhs, then turn
  // constrained rows/columns into identity rows carrying the value.
  const SparseSymMatrix& m = system.matrix;
  std::vector<Triplet> triplets;
  triplets.reserve(m.values.size());
  for (int row = 0; row < n; ++row) {
    if (system.constrained[row]) continue;
    for (int k = m.row_ptr[row]; k < m.row_ptr[row + 1]; ++k) {
      const int col = m.col_idx[k];
      if (system.constrained[col])
        system.rhs[row] -= m.values[k] * system.constrained_value[col];
      else
        triplets.push_back({row, col, m.values[k]});
    }
  }
  for (int dof = 0; dof < n; ++dof)
    if (system.constrained[dof]) {
      triplets.push_back({dof, dof, 1.0});
      system.rhs[dof] = system.constrained_value[dof];
    }
  system.matrix = SparseSymMatrix::from_triplets(n, std::move(triplets));
}

SeminormParts seminorms_on_subdomain(const FeFunction& v,
                                     const std::vector<char>& region) {
  const FeSpace& space = *v.space;
  const Triangulation& mesh = space.mesh;
  if (static_cast<int>(region.size()) != mesh.num_triangles())
    throw std::invalid_argument("seminorms_on_subdomain: region size");

  SeminormParts parts;
  const int k = space.degree;
  const QuadratureRule rule = quadrature_for_triangle(2 * k);
  std::vector<BasisValues> basis_at(rule.size());
  for (int q = 0; q < rule.size(); ++q)
    basis_at[q] = eval_basis_ref(k, rule.points[q]);

  const int nd = space.dofs_per_element();
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    if (!region[t]) continue;
    const FeSpace::ElementMap map = space.element_map(t);
    const std::vector<int>& dofs = space.elem_dofs[t];
    for (int q = 0; q < rule.size(); ++q) {
      const auto hess = physical_hessians(basis_at[q], map);
      std::array<double, 3> h{0.0, 0.0, 0.0};
      for (int i = 0; i < nd; ++i) {
        const double c = v.coeffs[dofs[i]];
        h[0] += c * hess[i][0];
        h[1] += c * hess[i][1];
        h[2] += c * hess[i][2];
      }
      parts.hessian_sq +=
          rule.weights[q] * map.det * frobenius_product(h, h);
    }
  }

  const EdgeRule erule = quadrature_for_edge(2 * k);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& ed = mesh.edges[e];
    if (!region[ed.tri[0]]) continue;
    const bool boundary = mesh.is_boundary_edge(e);
    if (!boundary && !region[ed.tri[1]]) continue;
    const double len = mesh.edge_length(e);

    const EdgeTrace minus = edge_trace(*v.space, e, 0, erule);
    EdgeTrace plus;
    if (!boundary) plus = edge_trace(*v.space, e, 1, erule);
    for (int q = 0; q < erule.size(); ++q) {
      double d2_minus = 0.0, d1_minus = 0.0;
      for (std::size_t i = 0; i < minus.dofs.size(); ++i) {
        d2_minus += v.coeffs[minus.dofs[i]] * minus.d2n[q][i];
        d1_minus += v.coeffs[minus.dofs[i]] * minus.dn[q][i];
      }
      double average, jump;
      if (boundary) {
        average = d2_minus;
        jump = -d1_minus;
      } else {
        double d2_plus = 0.0, d1_plus = 0.0;
        for (std::size_t i = 0; i < plus.dofs.size(); ++i) {
          d2_plus += v.coeffs[plus.dofs[i]] * plus.d2n[q][i];
          d1_plus += v.coeffs[plus.dofs[i]] * plus.dn[q][i];
        }
        average = 0.5 * (d2_minus + d2_plus);
        jump = d1_plus - d1_minus;
      }
      const double w = erule.weights[q] * len;
      parts.average_sq += len * w * average * average;
      parts.jump_sq += (1.0 / len) * w * jump * jump;
    }
  }
  return parts;
}

double energy_norm(const FeFunction& v) {
  const std::vector<char> all(v.space->mesh.num_triangles(), 1);
  return std::sqrt(seminorms_on_subdomain(v, all).total_sq());
}

} // namespace c0ip
