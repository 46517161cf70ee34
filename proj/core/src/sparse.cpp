#include "c0ip/sparse.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "c0ip/errors.hpp"

namespace c0ip {

SparseSymMatrix SparseSymMatrix::from_triplets(int n,
                                               std::vector<Triplet> triplets) {
  for (const Triplet& t : triplets)
    if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n)
      throw std::invalid_argument("from_triplets: index out of range");
  std::stable_sort(triplets.begin(), triplets.end(),
                   [](const Triplet& a, const Triplet& b) {
                     return a.row != b.row ? a.row < b.row : a.col < b.col;
                   });
  SparseSymMatrix m;
  m.n = n;
  m.row_ptr.assign(n + 1, 0);
  std::size_t i = 0;
  for (int row = 0; row < n; ++row) {
    while (i < triplets.size() && triplets[i].row == row) {
      const int col = triplets[i].col;
      double sum = 0.0;
      while (i < triplets.size() && triplets[i].row == row &&
             triplets[i].col == col)
        sum += triplets[i++].value;
      if (std::abs(sum) > 1e-300) {
        m.col_idx.push_back(col);
        m.values.push_back(sum);
      }
    }
    m.row_ptr[row + 1] = static_cast<int>(m.col_idx.size());
  }
  return m;
}

double SparseSymMatrix::max_abs() const {
  double v = 0.0;
  for (double x : values) v = std::max(v, std::abs(x));
  return v;
}

double SparseSymMatrix::inf_norm() const {
  double worst = 0.0;
  for (int row = 0; row < n; ++row) {
    double sum = 0.0;
    for (int k = row_ptr[row]; k < row_ptr[row + 1]; ++k)
      sum += std::abs(values[k]);
    worst = std::max(worst, sum);
  }
  return worst;
}

double SparseSymMatrix::coeff(int row, int col) const {
  for (int k = row_ptr[row]; k < row_ptr[row + 1]; ++k)
    if (col_idx[k] == col) return values[k];
  return 0.0;
}

double SparseSymMatrix::max_asymmetry() const {
  double worst = 0.0;
  for (int row = 0; row < n; ++row)
    for (int k = row_ptr[row]; k < row_ptr[row + 1]; ++k)
      worst = std::max(worst, std::abs(values[k] - coeff(col_idx[k], row)));
  return worst;
}

std::vector<double> matvec(const SparseSymMatrix& a,
                           const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != a.n)
    throw std::invalid_argument("matvec: dimension mismatch");
  std::vector<double> y(a.n, 0.0);
  for (int row = 0; row < a.n; ++row) {
    double sum = 0.0;
    for (int k = a.row_ptr[row]; k < a.row_ptr[row + 1]; ++k)
      sum += a.values[k] * x[a.col_idx[k]];
    y[row] = sum;
  }
  return y;
}

double dot(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("dot: dimension mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += x[i] * y[i];
  return sum;
}

void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("axpy: dimension mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

double norm2(const std::vector<double>& x) { return std::sqrt(dot(x, x)); }

namespace {

Eigen::SparseMatrix<double> to_eigen(const SparseSymMatrix& a) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(a.values.size());
  for (int row = 0; row < a.n; ++row)
    for (int k = a.row_ptr[row]; k < a.row_ptr[row + 1]; ++k)
      trips.emplace_back(row, a.col_idx[k], a.values[k]);
  Eigen::SparseMatrix<double> m(a.n, a.n);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

double residual_norm(const SparseSymMatrix& a, const std::vector<double>& x,
                     const std::vector<double>& b) {
  std::vector<double> r = matvec(a, x);
  axpy(-1.0, b, r);
  return norm2(r);
}

} // namespace

double solve_backward_error(const SparseSymMatrix& a,
                            const std::vector<double>& x,
                            const std::vector<double>& b) {
  const double denom = a.inf_norm() * norm2(x) + norm2(b);
  return residual_norm(a, x, b) / std::max(denom, 1e-300);
}

namespace {

std::vector<double> solve_direct(const SparseSymMatrix& a,
                                 const std::vector<double>& b,
                                 const SolveOptions& options) {
  const Eigen::SparseMatrix<double> m = to_eigen(a);
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt;
  llt.compute(m);
  if (llt.info() != Eigen::Success) {
    // Diagnose the failing pivot with an LDLT pass (which always completes):
    // the first non-positive diagonal entry, mapped back through the
    // fill-reducing permutation.
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    ldlt.compute(m);
    long pivot = -1;
    if (ldlt.info() == Eigen::Success) {
      const auto& d = ldlt.vectorD();
      for (long i = 0; i < d.size(); ++i)
        if (!(d(i) > 0.0)) {
          pivot = ldlt.permutationPinv().indices()(i);
          break;
        }
    }
    throw DefinitenessError(
        "spd_solve: matrix is not positive definite (pivot " +
            std::to_string(pivot) + ")",
        pivot);
  }
  const Eigen::Map<const Eigen::VectorXd> rhs(b.data(), a.n);
  Eigen::VectorXd x = llt.solve(rhs);
  std::vector<double> out(x.data(), x.data() + a.n);
  // Iterative refinement until the backward-error target holds.
  for (int round = 0; round < 3; ++round) {
    if (solve_backward_error(a, out, b) <= options.tol) return out;
    std::vector<double> r = matvec(a, out);
    axpy(-1.0, b, r);
    const Eigen::Map<const Eigen::VectorXd> rm(r.data(), a.n);
    const Eigen::VectorXd dx = llt.solve(rm);
    for (int i = 0; i < a.n; ++i) out[i] -= dx(i);
  }
  if (solve_backward_error(a, out, b) > options.tol)
    throw std::runtime_error("spd_solve: direct solve failed to reach the "
                             "residual tolerance");
  return out;
}

std::vector<double> solve_cg(const SparseSymMatrix& a,
                             const std::vector<double>& b,
                             const SolveOptions& options) {
  const int n = a.n;
  std::vector<double> diag(n, 0.0);
  for (int row = 0; row < n; ++row) {
    const double d = a.coeff(row, row);
    if (!(d > 0.0))
      throw DefinitenessError(
          "spd_solve: non-positive diagonal entry at index " +
              std::to_string(row),
          row);
    diag[row] = d;
  }
  const double bnorm = std::max(norm2(b), 1e-300);
  const double anorm = a.inf_norm();
  const int max_iter =
      options.max_iterations > 0 ? options.max_iterations : 20 * n;

  std::vector<double> x(n, 0.0);
  std::vector<double> r = b;
  std::vector<double> z(n);
  for (int i = 0; i < n; ++i) z[i] = r[i] / diag[i];
  std::vector<double> p = z;
  double rz = dot(r, z);
  for (int iter = 0; iter < max_iter; ++iter) {
    if (norm2(r) <= options.tol * (anorm * norm2(x) + bnorm) &&
        solve_backward_error(a, x, b) <= options.tol)
      return x;
    const std::vector<double> ap = matvec(a, p);
    const double pap = dot(p, ap);
    if (!(pap > 0.0))
      throw DefinitenessError(
          "spd_solve: conjugate gradients hit a non-positive curvature "
          "direction at iteration " +
              std::to_string(iter),
          iter);
    const double alpha = rz / pap;
    axpy(alpha, p, x);
    axpy(-alpha, ap, r);
    for (int i = 0; i < n; ++i) z[i] = r[i] / diag[i];
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  if (solve_backward_error(a, x, b) <= options.tol) return x;
  throw std::runtime_error(
      "spd_solve: conjugate gradients did not converge within " +
      std::to_string(max_iter) + " iterations");
}

} // namespace

std::vector<double> spd_solve(const SparseSymMatrix& a,
                              const std::vector<double>& b,
                              const SolveOptions& options) {
  if (a.n <= 0) throw std::invalid_argument("spd_solve: empty matrix");
  if (static_cast<int>(b.size()) != a.n)
    throw std::invalid_argument("spd_solve: dimension mismatch");
  if (options.kind == SolverKind::Direct) return solve_direct(a, b, options);
  return solve_cg(a, b, options);
}

} // namespace c0ip
