#pragma once

#include <functional>
#include <vector>

#include "c0ip/recovery.hpp"
#include "c0ip/solutions.hpp"
#include "c0ip/space.hpp"
#include "c0ip/sparse.hpp"

namespace c0ip {

// Per-element indicators eta_T = ||H - D2 u_h||_{0,T}, where H is the
// recovered Hessian (all four components enter the Frobenius norm).
struct EstimatorField {
  std::vector<double> eta;
  double total() const;
};

EstimatorField estimate(const FeFunction& u_h, const HessianField& hessian);

// kappa = eta_total / h2_error; throws EffectivityError when the true error
// vanishes.
double effectivity(double eta_total, double h2_error);

// Bulk marking: sorts elements by descending indicator (ties by index) and
// marks the smallest prefix whose squared indicators reach theta^2 (default)
// or, with theta_squared = false, theta times the squared total.
std::vector<int> dorfler_mark(const std::vector<double>& eta, double theta,
                              bool theta_squared = true);

// Broken H2 seminorm of (u_h - exact), integrated element by element.
double broken_h2_error(const FeFunction& u_h, const ExactSolution& exact);

struct AdaptiveOptions {
  int degree = 2;
  double gamma = 0.0; // <= 0 selects default_penalty(degree)
  double theta = 0.5;
  bool theta_squared = true;
  bool same_type_sampling = false;
  int max_dofs = 50000;
  SolveOptions solver{};
};

struct AdaptRecord {
  int iteration = 0;
  int dofs = 0;
  double eta_total = 0.0;
  double h2_error = 0.0;
  double kappa = 0.0;
};

// Invoked once per iteration after the solve, before marking.
using AdaptCallback =
    std::function<void(int, const Triangulation&, const FeFunction&)>;

// Solve / recover / estimate / mark / bisect until the dof count reaches
// options.max_dofs (at least one iteration always runs).  Boundary data are
// taken from the exact solution.
std::vector<AdaptRecord> adaptive_loop(const Triangulation& initial_mesh,
                                       const ExactSolution& exact,
                                       const AdaptiveOptions& options,
                                       const AdaptCallback& on_iteration = {});

} // namespace c0ip
