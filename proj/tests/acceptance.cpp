// Acceptance gate: seven end-to-end criteria for the plate solver, each
// printed as one [PASS]/[FAIL] line with the measured quantities.  The
// process exits nonzero when any criterion fails.
//
// Convergence orders are measured as the mean observed order across the
// study window, log2(E_first / E_last) / halvings: successive-pair ratios
// wobble by a few tenths on the patterned and unstructured families while
// their mean over two halvings is the stable quantity the bands describe.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "c0ip/assembly.hpp"
#include "c0ip/delaunay.hpp"
#include "c0ip/errors.hpp"
#include "c0ip/estimator.hpp"
#include "c0ip/recovery.hpp"
#include "c0ip/solutions.hpp"
#include "c0ip/space.hpp"
#include "c0ip/study.hpp"

using namespace c0ip;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion,
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* format, ...) {
  va_list args;
  va_start(args, format);
  char buffer[512];
  std::vsnprintf(buffer, sizeof(buffer), format, args);
  va_end(args);
  return buffer;
}

struct Timer {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
};

double mean_order(const std::vector<StudyRow>& rows,
                  double ErrorNorms::*component) {
  const double first = rows.front().norms.*component;
  const double last = rows.back().norms.*component;
  return std::log2(first / last) / (rows.size() - 1);
}

struct OrderBands {
  double he0_lo, he0_hi;
  double hre0_lo, hre0_hi;
  double hre_inf_lo, hre_inf_hi;
};

bool in_band(double v, double lo, double hi) { return v >= lo && v <= hi; }

std::vector<StudyRow> pattern_study(MeshPattern pattern, int degree,
                                    double gamma, std::vector<int> ns) {
  StudyConfig config;
  config.family = MeshFamily::Pattern;
  config.pattern = pattern;
  config.degree = degree;
  config.gamma = gamma;
  config.ns = std::move(ns);
  return convergence_study(square_solution(), config);
}

// ---------------------------------------------------------------------------
// Criteria 1 + 2: uniform convergence orders and absolute error magnitudes
// on the regular pattern at the default penalty.

void criteria_1_and_2() {
  Timer timer;
  const std::vector<StudyRow> rows =
      pattern_study(MeshPattern::Regular, 2, 0.0, {16, 32, 64});
  const double elapsed = timer.seconds();

  const OrderBands bands{0.9, 1.1, 1.8, 2.2, 1.8, 2.2};
  const double o_he0 = mean_order(rows, &ErrorNorms::he0);
  const double o_hre0 = mean_order(rows, &ErrorNorms::hre0);
  const double o_inf = mean_order(rows, &ErrorNorms::hre_inf);
  const bool orders_ok = in_band(o_he0, bands.he0_lo, bands.he0_hi) &&
                         in_band(o_hre0, bands.hre0_lo, bands.hre0_hi) &&
                         in_band(o_inf, bands.hre_inf_lo, bands.hre_inf_hi);
  const bool time_ok = elapsed < 60.0;
  report(1, orders_ok && time_ok,
         fmt("regular k=2 orders He0 %.3f in [0.90,1.10], Hre0 %.3f in "
             "[1.80,2.20], HreInf %.3f in [1.80,2.20], %.1f s < 60 s",
             o_he0, o_hre0, o_inf, elapsed));

  // Reference magnitudes on the coarsest level, tolerance 25%.
  const ErrorNorms& coarse = rows.front().norms;
  const double ref_he0 = 1.94, ref_hre0 = 0.516, ref_inf = 0.838;
  const bool mags_ok = std::abs(coarse.he0 - ref_he0) <= 0.25 * ref_he0 &&
                       std::abs(coarse.hre0 - ref_hre0) <= 0.25 * ref_hre0 &&
                       std::abs(coarse.hre_inf - ref_inf) <= 0.25 * ref_inf;
  report(2, mags_ok,
         fmt("n=16 magnitudes He0 %.3f vs %.3f, Hre0 %.3f vs %.3f, HreInf "
             "%.3f vs %.3f (each within 25%%)",
             coarse.he0, ref_he0, coarse.hre0, ref_hre0, coarse.hre_inf,
             ref_inf));
}

// ---------------------------------------------------------------------------
// Criterion 3: the same order bands on the other uniform patterns.

void criterion_3() {
  const OrderBands bands{0.9, 1.1, 1.8, 2.2, 1.8, 2.2};
  std::string detail = "pattern orders";
  bool all_ok = true;
  for (MeshPattern pattern : {MeshPattern::Chevron, MeshPattern::CrissCross,
                              MeshPattern::UnionJack}) {
    const std::vector<StudyRow> rows =
        pattern_study(pattern, 2, 0.0, {16, 32, 64});
    const double o_he0 = mean_order(rows, &ErrorNorms::he0);
    const double o_hre0 = mean_order(rows, &ErrorNorms::hre0);
    const double o_inf = mean_order(rows, &ErrorNorms::hre_inf);
    const bool ok = in_band(o_he0, bands.he0_lo, bands.he0_hi) &&
                    in_band(o_hre0, bands.hre0_lo, bands.hre0_hi) &&
                    in_band(o_inf, bands.hre_inf_lo, bands.hre_inf_hi);
    all_ok = all_ok && ok;
    detail += fmt(", %s %.3f/%.3f/%.3f%s", pattern_name(pattern), o_he0,
                  o_hre0, o_inf, ok ? "" : " OUT OF [0.9,1.1]/[1.8,2.2]^2");
  }
  report(3, all_ok, detail);
}

// ---------------------------------------------------------------------------
// Criterion 4: the unstructured family keeps full He0 order and retains
// superconvergence (weaker bands: Hre0 >= 1.5, HreInf >= 1.0).  The
// default penalty tuned for the uniform patterns is not coercive on this
// family, so the study pins gamma = 5.

void criterion_4() {
  StudyConfig config;
  config.family = MeshFamily::Delaunay;
  config.ns = {16, 32, 64};
  config.gamma = 5.0;
  const std::vector<StudyRow> rows =
      convergence_study(square_solution(), config);
  const double o_he0 = mean_order(rows, &ErrorNorms::he0);
  const double o_hre0 = mean_order(rows, &ErrorNorms::hre0);
  const double o_inf = mean_order(rows, &ErrorNorms::hre_inf);
  const bool ok = in_band(o_he0, 0.9, 1.1) && o_hre0 >= 1.5 && o_inf >= 1.0;
  report(4, ok,
         fmt("delaunay gamma=5 orders He0 %.3f in [0.90,1.10], Hre0 %.3f >= "
             "1.50, HreInf %.3f >= 1.00",
             o_he0, o_hre0, o_inf));
}

// ---------------------------------------------------------------------------
// Criterion 5: higher-degree interior sup-norm orders on the regular
// pattern, window n = 8 -> 32.

void criterion_5() {
  const std::vector<StudyRow> k3 =
      pattern_study(MeshPattern::Regular, 3, 0.0, {8, 16, 32});
  const std::vector<StudyRow> k4 =
      pattern_study(MeshPattern::Regular, 4, 0.0, {8, 16, 32});
  const double o3 = mean_order(k3, &ErrorNorms::hre_inf);
  const double o4 = mean_order(k4, &ErrorNorms::hre_inf);
  const bool ok = in_band(o3, 2.7, 3.3) && in_band(o4, 3.6, 4.4);
  report(5, ok,
         fmt("interior HreInf orders k=3 %.3f in [2.70,3.30], k=4 %.3f in "
             "[3.60,4.40]",
             o3, o4));
}

// ---------------------------------------------------------------------------
// Criterion 6: adaptive run on the L-shape singularity; the error must
// decrease monotonically once the refinement has locked on, and the
// estimator effectivity must settle near 1.

void criterion_6() {
  Timer timer;
  AdaptiveOptions options;
  options.theta = 0.5;
  options.max_dofs = 50000;
  const std::vector<AdaptRecord> records =
      adaptive_loop(generate_lshape(4), lshape_solution(), options);
  const double elapsed = timer.seconds();

  bool decreasing = records.size() >= 4;
  for (std::size_t i = 3; i < records.size(); ++i)
    decreasing = decreasing && records[i].h2_error < records[i - 1].h2_error;
  bool kappa_ok = records.size() >= 3;
  double kmin = 1e30, kmax = 0.0;
  for (std::size_t i = records.size() - 3; i < records.size(); ++i) {
    kmin = std::min(kmin, records[i].kappa);
    kmax = std::max(kmax, records[i].kappa);
    kappa_ok = kappa_ok && records[i].kappa >= 0.85 && records[i].kappa <= 1.15;
  }
  const bool time_ok = elapsed < 300.0;
  report(6, decreasing && kappa_ok && time_ok,
         fmt("adaptive theta=0.5 to %d dofs: H2 error %s from iter 2, final "
             "three kappa in [%.4f,%.4f] within [0.85,1.15], %.1f s < 300 s",
             records.back().dofs,
             decreasing ? "strictly decreasing" : "NOT decreasing", kmin, kmax,
             elapsed));
}

// ---------------------------------------------------------------------------
// Criterion 7: fast property suite.

// Random polynomial of the given total degree, evaluated with derivatives.
struct Poly {
  int degree;
  std::vector<double> coeffs;

  double d(Point2 p, int ax, int ay) const {
    double sum = 0.0;
    std::size_t idx = 0;
    for (int total = 0; total <= degree; ++total)
      for (int j = 0; j <= total; ++j, ++idx) {
        const int px = total - j, py = j;
        if (px < ax || py < ay) continue;
        double term = coeffs[idx];
        for (int r = 0; r < ax; ++r) term *= px - r;
        for (int r = 0; r < ay; ++r) term *= py - r;
        sum += term * std::pow(p.x, px - ax) * std::pow(p.y, py - ay);
      }
    return sum;
  }
};

bool hessian_preservation(std::string& message) {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  double worst = 0.0;
  for (int degree : {2, 3, 4}) {
    const Triangulation mesh = generate_uniform(MeshPattern::Regular, 4);
    const FeSpace space = build_space(mesh, degree);
    const RecoveryOperator op = build_recovery(space, false);
    for (int trial = 0; trial < 20; ++trial) {
      Poly q{degree + 1, {}};
      for (int total = 0; total <= q.degree; ++total)
        for (int j = 0; j <= total; ++j) q.coeffs.push_back(coeff(rng));
      const FeFunction u =
          interpolate(space, [&](Point2 p) { return q.d(p, 0, 0); });
      const HessianField h = recover_hessian(op, u);
      for (int i = 0; i < space.num_dofs; ++i) {
        const Point2 z = space.node_coords[i];
        worst = std::max({worst, std::abs(h.xx.coeffs[i] - q.d(z, 2, 0)),
                          std::abs(h.xy.coeffs[i] - q.d(z, 1, 1)),
                          std::abs(h.yx.coeffs[i] - q.d(z, 1, 1)),
                          std::abs(h.yy.coeffs[i] - q.d(z, 0, 2))});
      }
    }
  }
  message = fmt("Hessian preservation %.1e", worst);
  return worst <= 1e-8;
}

bool galerkin_exactness(std::string& message) {
  struct Case {
    int degree;
    double (*u)(Point2);
    Point2 (*grad)(Point2);
    double (*f)(Point2);
  };
  const Case cases[] = {
      {2, [](Point2 p) { return p.x * p.x + p.x * p.y; },
       [](Point2 p) { return Point2{2 * p.x + p.y, p.x}; },
       [](Point2) { return 0.0; }},
      {3, [](Point2 p) { return p.x * p.x * p.x - 2 * p.x * p.y * p.y; },
       [](Point2 p) {
         return Point2{3 * p.x * p.x - 2 * p.y * p.y, -4 * p.x * p.y};
       },
       [](Point2) { return 0.0; }},
      {4,
       [](Point2 p) {
         const double x2 = p.x * p.x, y2 = p.y * p.y;
         return x2 * x2 + y2 * y2 - 3 * x2 * y2;
       },
       [](Point2 p) {
         return Point2{4 * p.x * p.x * p.x - 6 * p.x * p.y * p.y,
                       4 * p.y * p.y * p.y - 6 * p.x * p.x * p.y};
       },
       [](Point2) { return 24.0; }}};
  double worst = 0.0;
  for (const Case& c : cases) {
    const Triangulation mesh = generate_uniform(MeshPattern::Regular, 4);
    const FeSpace space = build_space(mesh, c.degree);
    AssembledSystem system =
        assemble_bilinear(space, default_penalty(c.degree));
    system.rhs = assemble_load(space, c.f);
    apply_clamped_bc(system, space, c.u, [&](Point2 p, Point2 nrm) {
      const Point2 g = c.grad(p);
      return g.x * nrm.x + g.y * nrm.y;
    });
    const std::vector<double> x = spd_solve(system.matrix, system.rhs);
    for (int i = 0; i < space.num_dofs; ++i)
      worst = std::max(worst, std::abs(x[i] - c.u(space.node_coords[i])));
  }
  message = fmt("Galerkin exactness %.1e", worst);
  return worst <= 1e-8;
}

bool penalty_identity(std::string& message) {
  double worst = 0.0;
  for (int n : {1, 2, 4}) {
    const Triangulation mesh = generate_uniform(MeshPattern::Regular, n);
    const FeSpace space = build_space(mesh, 2);
    const double gamma = default_penalty(2);
    const AssembledSystem system = assemble_bilinear(space, gamma);
    const FeFunction v = interpolate(space, [](Point2 p) { return p.x; });
    const double b = dot(v.coeffs, matvec(system.matrix, v.coeffs));
    worst = std::max(worst, std::abs(b - 2.0 * n * gamma));
  }
  message = fmt("B(x,x)=2n*gamma drift %.1e", worst);
  return worst <= 1e-10;
}

bool delaunay_brute_force(std::string& message) {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  std::vector<Point2> pts;
  for (int i = 0; i < 50; ++i) pts.push_back({coord(rng), coord(rng)});
  const Triangulation mesh = delaunay_triangulate(pts);
  double worst = 0.0;
  for (const Triangle& t : mesh.triangles)
    for (const Point2& p : mesh.vertices)
      worst = std::max(worst,
                       incircle(mesh.vertices[t.v[0]], mesh.vertices[t.v[1]],
                                mesh.vertices[t.v[2]], p));
  message = fmt("empty-circumcircle violation %.1e", worst);
  return worst <= 1e-10;
}

bool solver_residuals(std::string& message) {
  const ExactSolution exact = square_solution();
  double worst = 0.0;
  const auto check = [&](const Triangulation& mesh, int degree) {
    const FeSpace space = build_space(mesh, degree);
    AssembledSystem system =
        assemble_bilinear(space, degree == 2 ? 5.0 : default_penalty(degree));
    system.rhs = assemble_load(space, exact.f);
    apply_clamped_bc(
        system, space, [&](Point2 p) { return exact.u(p); },
        [&](Point2 p, Point2 nrm) { return exact.normal_derivative(p, nrm); });
    const std::vector<double> x = spd_solve(system.matrix, system.rhs);
    worst = std::max(worst, solve_backward_error(system.matrix, x, system.rhs));
  };
  for (MeshPattern pattern : {MeshPattern::Regular, MeshPattern::Chevron,
                              MeshPattern::CrissCross, MeshPattern::UnionJack})
    check(generate_uniform(pattern, 8), 2);
  check(delaunay_triangulate(unit_square_cloud()), 2);
  check(generate_uniform(MeshPattern::Regular, 4), 3);
  check(generate_uniform(MeshPattern::Regular, 4), 4);
  message = fmt("solver backward error %.1e", worst);
  return worst <= 1e-10;
}

bool swap_invariance(std::string& message) {
  Triangulation forward;
  forward.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  forward.triangles = {{{0, 1, 2}}, {{0, 2, 3}}};
  build_edge_topology(forward);
  Triangulation reversed;
  reversed.vertices = forward.vertices;
  reversed.triangles = {{{0, 2, 3}}, {{0, 1, 2}}};
  build_edge_topology(reversed);
  const auto f = [](Point2 p) {
    return std::sin(p.x + 2 * p.y) + p.x * p.x * p.y;
  };
  double worst = 0.0;
  for (int degree : {2, 3, 4}) {
    const FeSpace sf = build_space(forward, degree);
    const FeSpace sr = build_space(reversed, degree);
    const AssembledSystem af = assemble_bilinear(sf, 4.0);
    const AssembledSystem ar = assemble_bilinear(sr, 4.0);
    const FeFunction uf = interpolate(sf, f);
    const FeFunction ur = interpolate(sr, f);
    const double bf = dot(uf.coeffs, matvec(af.matrix, uf.coeffs));
    const double br = dot(ur.coeffs, matvec(ar.matrix, ur.coeffs));
    worst = std::max(worst, std::abs(bf - br) / std::abs(bf));
  }
  message = fmt("triangle-order drift %.1e", worst);
  return worst <= 1e-11;
}

void criterion_7() {
  Timer timer;
  std::string detail;
  bool ok = true;
  for (auto property : {hessian_preservation, galerkin_exactness,
                        penalty_identity, delaunay_brute_force,
                        solver_residuals, swap_invariance}) {
    std::string message;
    const bool pass = property(message);
    ok = ok && pass;
    if (!detail.empty()) detail += ", ";
    detail += message + (pass ? "" : " FAILED");
  }
  const double elapsed = timer.seconds();
  detail += fmt(", %.1f s < 30 s", elapsed);
  report(7, ok && elapsed < 30.0, detail);
}

} // namespace

int main() {
  try {
    criteria_1_and_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
  } catch (const std::exception& err) {
    std::printf("[FAIL] acceptance aborted: %s\n", err.what());
    return 99;
  }
  std::printf("acceptance: %d of 7 criteria passed\n", 7 - failures);
  return failures == 0 ? 0 : 1;
}
