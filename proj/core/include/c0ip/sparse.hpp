#pragma once

#include <vector>

namespace c0ip {

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

// Symmetric sparse matrix in CSR layout with both triangles stored.  Entries
// that cancel to (essentially) zero are dropped during compression.
struct SparseSymMatrix {
  int n = 0;
  std::vector<int> row_ptr; // size n+1
  std::vector<int> col_idx;
  std::vector<double> values;

  static SparseSymMatrix from_triplets(int n, std::vector<Triplet> triplets);

  int nnz() const { return static_cast<int>(values.size()); }
  double max_abs() const;
  // Infinity norm (max absolute row sum).
  double inf_norm() const;
  // max |A - A^T| entry; zero for exactly symmetric assembly.
  double max_asymmetry() const;
  // Entry lookup (0 when the entry is not stored).
  double coeff(int row, int col) const;
};

std::vector<double> matvec(const SparseSymMatrix& a,
                           const std::vector<double>& x);

double dot(const std::vector<double>& x, const std::vector<double>& y);

// y += alpha * x
void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y);

double norm2(const std::vector<double>& x);

enum class SolverKind { Direct, Iterative };

struct SolveOptions {
  SolverKind kind = SolverKind::Direct;
  // Normwise backward-error target: the result satisfies
  //   ||A x - b|| <= tol * (||A||_inf ||x|| + ||b||).
  // A plain ||r|| <= tol ||b|| bound is unattainable in double precision
  // once ||A|| ||x|| >> ||b|| (fourth-order systems reach that regime
  // quickly), since even the rounded exact solution violates it.
  double tol = 1e-10;
  int max_iterations = 0; // iterative path; 0 picks 20*n
};

// Backward error ||Ax-b|| / (||A||_inf ||x|| + ||b||) of a candidate
// solution; the quantity spd_solve drives below options.tol.
double solve_backward_error(const SparseSymMatrix& a,
                            const std::vector<double>& x,
                            const std::vector<double>& b);

// Solves A x = b for symmetric positive definite A.  The direct path uses a
// sparse Cholesky factorization with fill-reducing ordering plus iterative
// refinement; the iterative path is Jacobi-preconditioned conjugate
// gradients.  Throws DefinitenessError (with the pivot index) when A is not
// positive definite and std::invalid_argument on dimension mismatches.
// Identical inputs give bit-identical results.
std::vector<double> spd_solve(const SparseSymMatrix& a,
                              const std::vector<double>& b,
                              const SolveOptions& options = {});

} // namespace c0ip
