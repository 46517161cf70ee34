#include "c0ip/solutions.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "c0ip/errors.hpp"

namespace c0ip {

namespace {

// Factor form of the square solution: u(x, y) = s(x) s(y) with
// s(t) = sin^2(pi t).
double s0(double t) { return std::sin(M_PI * t) * std::sin(M_PI * t); }
double s1(double t) { return M_PI * std::sin(2.0 * M_PI * t); }
double s2(double t) { return 2.0 * M_PI * M_PI * std::cos(2.0 * M_PI * t); }
double s4(double t) {
  return -8.0 * std::pow(M_PI, 4) * std::cos(2.0 * M_PI * t);
}

// Polar data of the L-shape solution with the branch theta in [0, 3pi/2].
struct Polar {
  double r, theta;
};

Polar lshape_polar(Point2 p) {
  double theta = std::atan2(p.y, p.x);
  if (theta < 0.0) theta += 2.0 * M_PI;
  return {std::hypot(p.x, p.y), theta};
}

constexpr double kAlpha = 5.0 / 3.0;

} // namespace

ExactSolution square_solution() {
  ExactSolution sol;
  sol.name = "square";
  sol.domain = unit_square_polygon();
  sol.u = [](Point2 p) { return s0(p.x) * s0(p.y); };
  sol.grad = [](Point2 p) {
    return Point2{s1(p.x) * s0(p.y), s0(p.x) * s1(p.y)};
  };
  sol.hess = [](Point2 p) {
    return std::array<double, 3>{s2(p.x) * s0(p.y), s1(p.x) * s1(p.y),
                                 s0(p.x) * s2(p.y)};
  };
  // Lap^2 u = s'''' s + 2 s'' s'' + s s''''.
  sol.f = [](Point2 p) {
    return s4(p.x) * s0(p.y) + 2.0 * s2(p.x) * s2(p.y) + s0(p.x) * s4(p.y);
  };
  return sol;
}

ExactSolution lshape_solution() {
  ExactSolution sol;
  sol.name = "lshape";
  sol.domain = lshape_polygon();
  sol.u = [](Point2 p) {
    const Polar pc = lshape_polar(p);
    if (pc.r == 0.0) return 0.0;
    return std::pow(pc.r, kAlpha) * std::sin(kAlpha * pc.theta);
  };
  // u is the imaginary part of z^alpha, so the derivatives follow from
  // f'(z) = alpha z^(alpha-1):  u_x = Im f', u_y = Re f'.
  sol.grad = [](Point2 p) {
    const Polar pc = lshape_polar(p);
    if (pc.r < 1e-14)
      throw EvaluationError("lshape gradient is singular at the corner");
    const double mag = kAlpha * std::pow(pc.r, kAlpha - 1.0);
    const double ang = (kAlpha - 1.0) * pc.theta;
    return Point2{mag * std::sin(ang), mag * std::cos(ang)};
  };
  // Second derivatives from f''(z) = alpha (alpha-1) z^(alpha-2):
  // u_xx = Im f'', u_xy = Re f'', u_yy = -Im f''.
  sol.hess = [](Point2 p) {
    const Polar pc = lshape_polar(p);
    if (pc.r < 1e-14)
      throw EvaluationError("lshape Hessian is singular at the corner");
    const double mag = kAlpha * (kAlpha - 1.0) * std::pow(pc.r, kAlpha - 2.0);
    const double ang = (kAlpha - 2.0) * pc.theta;
    return std::array<double, 3>{mag * std::sin(ang), mag * std::cos(ang),
                                 -mag * std::sin(ang)};
  };
  sol.f = [](Point2) { return 0.0; }; // z^alpha is harmonic, hence biharmonic
  return sol;
}

double fd_biharmonic(const std::function<double(Point2)>& u, Point2 p,
                     double step) {
  const auto lap = [&](Point2 q) {
    return (u({q.x + step, q.y}) + u({q.x - step, q.y}) +
            u({q.x, q.y + step}) + u({q.x, q.y - step}) - 4.0 * u(q)) /
           (step * step);
  };
  return (lap({p.x + step, p.y}) + lap({p.x - step, p.y}) +
          lap({p.x, p.y + step}) + lap({p.x, p.y - step}) - 4.0 * lap(p)) /
         (step * step);
}

Point2 fd_gradient(const std::function<double(Point2)>& u, Point2 p,
                   double step) {
  return {(u({p.x + step, p.y}) - u({p.x - step, p.y})) / (2.0 * step),
          (u({p.x, p.y + step}) - u({p.x, p.y - step})) / (2.0 * step)};
}

std::array<double, 3> fd_hessian(const std::function<double(Point2)>& u,
                                 Point2 p, double step) {
  const double c = u(p);
  const double xx = (u({p.x + step, p.y}) - 2.0 * c + u({p.x - step, p.y})) /
                    (step * step);
  const double yy = (u({p.x, p.y + step}) - 2.0 * c + u({p.x, p.y - step})) /
                    (step * step);
  const double xy = (u({p.x + step, p.y + step}) - u({p.x + step, p.y - step}) -
                     u({p.x - step, p.y + step}) + u({p.x - step, p.y - step})) /
                    (4.0 * step * step);
  return {xx, xy, yy};
}

void verify_solution_consistency(const ExactSolution& exact) {
  // Interior sample points clear of domain boundaries and of the re-entrant
  // corner (both domains contain these once x is reflected for the L-shape).
  std::mt19937 rng(321u);
  std::uniform_real_distribution<double> coord(0.15, 0.85);
  std::vector<Point2> points;
  for (int i = 0; i < 20; ++i) {
    Point2 p{coord(rng), coord(rng)};
    if (exact.name == "lshape") p.x = -p.x; // upper-left block of the L
    points.push_back(p);
  }

  double f_scale = 1.0, u_scale = 1.0;
  for (const Point2& p : points) {
    f_scale = std::max(f_scale, std::abs(exact.f(p)));
    u_scale = std::max(u_scale, std::abs(exact.u(p)));
  }

  // The twice-applied Laplacian stencil divides by step^4, so representation
  // error of u is amplified by ~64 eps / step^4; the tolerance has to grant
  // that on top of a relative truncation allowance (f can vanish pointwise,
  // hence the scale-relative form).
  const double step = 2e-3;
  const double roundoff =
      3.0 * 64.0 * 2.2e-16 * u_scale / (step * step * step * step);
  const double f_tol = 1e-3 * f_scale + roundoff;

  for (const Point2& p : points) {
    const double fd = fd_biharmonic(exact.u, p, step);
    if (std::abs(fd - exact.f(p)) > f_tol)
      throw std::runtime_error(
          "exact solution '" + exact.name +
          "': closed-form f disagrees with the finite-difference biharmonic");

    const Point2 g = exact.grad(p);
    const Point2 gfd = fd_gradient(exact.u, p, 1e-5);
    const double g_scale = std::max({1.0, std::abs(g.x), std::abs(g.y)});
    if (std::abs(g.x - gfd.x) + std::abs(g.y - gfd.y) > 1e-6 * g_scale)
      throw std::runtime_error("exact solution '" + exact.name +
                               "': gradient disagrees with finite differences");

    const auto h = exact.hess(p);
    const auto hfd = fd_hessian(exact.u, p, 1e-4);
    const double h_scale = std::max(
        1.0, std::abs(h[0]) + std::abs(h[1]) + std::abs(h[2]));
    if (std::abs(h[0] - hfd[0]) + std::abs(h[1] - hfd[1]) +
            std::abs(h[2] - hfd[2]) >
        1e-4 * h_scale)
      throw std::runtime_error("exact solution '" + exact.name +
                               "': Hessian disagrees with finite differences");
  }
}

} // namespace c0ip
