#pragma once

#include <iosfwd>
#include <vector>

#include "c0ip/assembly.hpp"
#include "c0ip/estimator.hpp"
#include "c0ip/recovery.hpp"
#include "c0ip/solutions.hpp"

namespace c0ip {

// Split of the mesh into a boundary strip Omega1 (elements whose governing
// nodes all lie within distance L of the boundary polygon) and its
// complement Omega2.  By default the governing nodes are the three corner
// vertices; by_all_nodes extends that to every Lagrange node of the element.
struct InteriorSplit {
  std::vector<char> node_near_boundary; // per dof
  std::vector<char> omega2;             // per element
  int omega1_count = 0;
  int omega2_count = 0;
};

InteriorSplit interior_split(const FeSpace& space, const Polygon& domain,
                             double L, bool by_all_nodes = false);

struct ErrorNorms {
  double he0 = 0.0;     // broken H2 error of u_h, whole domain
  double hre0 = 0.0;    // L2 error of the recovered Hessian over Omega2
  double hre_inf = 0.0; // pointwise max over Omega2
};

// L2 parts by quadrature of degree 2k+4 (+boost for saturation checks); the
// per-element sup over quadrature points plus Lagrange nodes.
ErrorNorms error_norms(const FeFunction& u_h, const HessianField& hessian,
                       const ExactSolution& exact,
                       const std::vector<char>& omega2,
                       int quadrature_boost = 0);

// One full solve on a fixed mesh: assemble B_h, boundary data from the exact
// solution, linear solve, Hessian recovery.  Owns the space; the accessors
// build lightweight views.
struct SolvedProblem {
  FeSpace space;
  std::vector<double> u;
  std::vector<double> hxx, hxy, hyx, hyy;
  AssembledSystem system; // state after boundary conditions

  FeFunction solution() const { return {&space, u}; }
  HessianField hessian() const {
    return {{&space, hxx}, {&space, hxy}, {&space, hyx}, {&space, hyy}};
  }
};

SolvedProblem solve_problem(const Triangulation& mesh,
                            const ExactSolution& exact, int degree,
                            double gamma, bool same_type_sampling,
                            const SolveOptions& solver);

enum class MeshFamily { Pattern, Delaunay };

struct StudyConfig {
  MeshFamily family = MeshFamily::Pattern;
  MeshPattern pattern = MeshPattern::Regular;
  std::vector<int> ns{16, 32, 64};
  int degree = 2;
  double gamma = 0.0; // <= 0 selects default_penalty(degree)
  double interior_distance = 0.1;
  bool interior_by_nodes = false;
  bool same_type_sampling = false;
  SolveOptions solver{};
};

// Mesh of one study level: pattern meshes directly at size n; the Delaunay
// family red-refines the fixed point-cloud triangulation, so n must be
// 8 * 2^j.
Triangulation study_mesh(const StudyConfig& config, int n);

struct StudyRow {
  int n = 0;
  int dofs = 0;
  ErrorNorms norms;
  // log2 ratios against the previous row; NaN on the first row.
  double he0_order = 0.0;
  double hre0_order = 0.0;
  double hre_inf_order = 0.0;
};

// Invoked after each level with the finished row and the solved problem.
using StudyCallback =
    std::function<void(const StudyRow&, const SolvedProblem&)>;

// Runs the solution-consistency oracle, then one solve per level.  Levels
// must each double the previous one.
std::vector<StudyRow> convergence_study(const ExactSolution& exact,
                                        const StudyConfig& config,
                                        const StudyCallback& on_level = {});

// CSV layouts:
//   inv_h,He0,He0_order,Hre0,Hre0_order,HreInf,HreInf_order
//   iter,dofs,eta_total,h2_error,kappa
// Order fields are empty on the first row.
void write_convergence_csv(std::ostream& out,
                           const std::vector<StudyRow>& rows);
void write_adaptive_csv(std::ostream& out,
                        const std::vector<AdaptRecord>& records);

} // namespace c0ip
