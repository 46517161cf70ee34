#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "c0ip/errors.hpp"
#include "c0ip/recovery.hpp"
#include "c0ip/solutions.hpp"
#include "c0ip/space.hpp"

namespace c0ip {
namespace {

int node_at(const FeSpace& space, double x, double y) {
  for (int i = 0; i < space.num_dofs; ++i)
    if (std::abs(space.node_coords[i].x - x) < 1e-12 &&
        std::abs(space.node_coords[i].y - y) < 1e-12)
      return i;
  ADD_FAILURE() << "no node at (" << x << ", " << y << ")";
  return -1;
}

// Random polynomial of total degree <= degree with coefficients in [-1, 1].
struct RandomPolynomial {
  int degree;
  std::vector<double> coeffs; // by total degree, then y-power

  static RandomPolynomial make(int degree, std::mt19937& rng) {
    std::uniform_real_distribution<double> c(-1.0, 1.0);
    RandomPolynomial p{degree, {}};
    for (int d = 0; d <= degree; ++d)
      for (int j = 0; j <= d; ++j) p.coeffs.push_back(c(rng));
    return p;
  }

  double value(Point2 pt) const { return derivative(pt, 0, 0); }

  // d^(ax+ay) p / dx^ax dy^ay evaluated at pt.
  double derivative(Point2 pt, int ax, int ay) const {
    double sum = 0.0;
    std::size_t idx = 0;
    for (int d = 0; d <= degree; ++d)
      for (int j = 0; j <= d; ++j, ++idx) {
        const int px = d - j, py = j;
        if (px < ax || py < ay) continue;
        double term = coeffs[idx];
        for (int r = 0; r < ax; ++r) term *= px - r;
        for (int r = 0; r < ay; ++r) term *= py - r;
        term *= std::pow(pt.x, px - ax) * std::pow(pt.y, py - ay);
        sum += term;
      }
    return sum;
  }
};

TEST(Recovery, InteriorVertexPatchShape) {
  // An interior vertex of the regular pattern: the six-triangle star already
  // carries 19 distinct quadratic nodes, enough for a cubic fit (dim 10).
  const Triangulation mesh = generate_uniform(MeshPattern::Regular, 4);
  const FeSpace space = build_space(mesh, 2);
  const RecoveryPatch patch = build_patch(space, node_at(space, 0.5, 0.5), false);
  EXPECT_EQ(patch.elements.size(), 6u);
  EXPECT_EQ(patch.samples.size(), 19u);
  EXPECT_EQ(patch.rings, 0);
  EXPECT_FALSE(patch.fell_back_to_all);
  EXPECT_LT(patch.condition, 1e6);
}

TEST(Recovery, CornerPatchGrows) {
  const Triangulation mesh = generate_uniform(MeshPattern::Regular, 4);
  const FeSpace space = build_space(mesh, 2);
  const RecoveryPatch patch = build_patch(space, node_at(space, 0.0, 0.0), false);
  EXPECT_GE(patch.samples.size(), 10u);
  EXPECT_GE(patch.rings, 1);
  EXPECT_TRUE(std::isfinite(patch.condition));
}

TEST(Recovery, CornerPatchEscapesDegenerateLattice) {
  // For degree 3 and 4 the nodes of the corner cells alone form a tensor
  // grid on which the degree-(k+1) fit is rank deficient (a univariate
  // polynomial of degree k+1 vanishes on k+1 lattice columns), so the patch
  // must grow past the minimal ring even though the sample count looks
  // sufficient.
  for (int degree : {3, 4}) {
    const Triangulation mesh = generate_uniform(MeshPattern::Regular, 4);
    const FeSpace space = build_space(mesh, degree);
    const RecoveryPatch patch =
        build_patch(space, node_at(space, 0.0, 0.0), false);
    EXPECT_GE(patch.rings, 1) << "degree " << degree;
    EXPECT_TRUE(std::isfinite(patch.condition));
    const int fit_dim = polynomial_space_dim(degree + 1);
    EXPECT_GE(static_cast<int>(patch.samples.size()), fit_dim);
  }
}

TEST(Recovery, PatchErrorWhenMeshTooSmall) {
  // Two triangles give 9 quadratic nodes; a cubic fit needs 10.
  Triangulation mesh;
  mesh.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  mesh.triangles = {{{0, 1, 2}}, {{0, 2, 3}}};
  build_edge_topology(mesh);
  const FeSpace space = build_space(mesh, 2);
  EXPECT_THROW(build_patch(space, 0, false), PatchError);
}

TEST(Recovery, FitReproducesCubicData) {
  std::mt19937 rng(3);
  const Triangulation mesh = generate_uniform(MeshPattern::Regular, 4);
  const FeSpace space = build_space(mesh, 2);
  const int node = node_at(space, 0.5, 0.5);
  const RecoveryPatch patch = build_patch(space, node, false);
  const RandomPolynomial q = RandomPolynomial::make(3, rng);
  std::vector<double> values(patch.samples.size());
  for (std::size_t s = 0; s < patch.samples.size(); ++s)
    values[s] = q.value(space.node_coords[patch.samples[s]]);
  const std::vector<double> c = fit_polynomial(space, patch, node, values);
  // Monomial coefficients are taken in coordinates centered at the node and
  // scaled by patch.scale, so the low-order ones are scaled derivatives.
  const Point2 z = space.node_coords[node];
  EXPECT_NEAR(c[0], q.value(z), 1e-9);
  EXPECT_NEAR(c[1], patch.scale * q.derivative(z, 1, 0), 1e-9);
  EXPECT_NEAR(c[2], patch.scale * q.derivative(z, 0, 1), 1e-9);
}

TEST(Recovery, GradientOfLinearIsExact) {
  const Triangulation mesh = generate_uniform(MeshPattern::Chevron, 4);
  const FeSpace space = build_space(mesh, 2);
  const FeFunction u = interpolate(space, [](Point2 p) { return p.x; });
  const auto [gx, gy] = recover_gradient(u);
  for (int i = 0; i < space.num_dofs; ++i) {
    EXPECT_NEAR(gx.coeffs[i], 1.0, 1e-11);
    EXPECT_NEAR(gy.coeffs[i], 0.0, 1e-11);
  }
}

TEST(Recovery, PreservesDegreeKp1Hessians) {
  // Interpolating q in P_{k+1} samples exact values of q, so both recovery
  // stages reproduce exact derivatives and the recovered Hessian equals
  // D2 q at every node.
  std::mt19937 rng(41);
  for (int degree : {2, 3, 4}) {
    const Triangulation mesh = generate_uniform(MeshPattern::Regular, 4);
    const FeSpace space = build_space(mesh, degree);
    for (int trial = 0; trial < 5; ++trial) {
      const RandomPolynomial q = RandomPolynomial::make(degree + 1, rng);
      const FeFunction u =
          interpolate(space, [&](Point2 p) { return q.value(p); });
      const HessianField h = recover_hessian(u);
      double err = 0.0;
      for (int i = 0; i < space.num_dofs; ++i) {
        const Point2 z = space.node_coords[i];
        err = std::max(err, std::abs(h.xx.coeffs[i] - q.derivative(z, 2, 0)));
        err = std::max(err, std::abs(h.xy.coeffs[i] - q.derivative(z, 1, 1)));
        err = std::max(err, std::abs(h.yx.coeffs[i] - q.derivative(z, 1, 1)));
        err = std::max(err, std::abs(h.yy.coeffs[i] - q.derivative(z, 0, 2)));
      }
      EXPECT_LE(err, 1e-8) << "degree " << degree << " trial " << trial;
    }
  }
}

TEST(Recovery, OperatorIsLinear) {
  const Triangulation mesh = generate_uniform(MeshPattern::Regular, 4);
  const FeSpace space = build_space(mesh, 2);
  const RecoveryOperator op = build_recovery(space, false);
  const FeFunction u =
      interpolate(space, [](Point2 p) { return std::sin(3 * p.x) * p.y; });
  const FeFunction v =
      interpolate(space, [](Point2 p) { return std::exp(p.x - p.y); });
  FeFunction combo{&space, std::vector<double>(space.num_dofs)};
  for (int i = 0; i < space.num_dofs; ++i)
    combo.coeffs[i] = 2.0 * u.coeffs[i] - 0.5 * v.coeffs[i];
  const auto [gu, _u] = apply_recovery(op, u);
  const auto [gv, _v] = apply_recovery(op, v);
  const auto [gc, _c] = apply_recovery(op, combo);
  for (int i = 0; i < space.num_dofs; ++i)
    EXPECT_NEAR(gc.coeffs[i], 2.0 * gu.coeffs[i] - 0.5 * gv.coeffs[i], 1e-11);
}

TEST(Recovery, OperatorAndConvenienceAgree) {
  const Triangulation mesh = generate_uniform(MeshPattern::UnionJack, 3);
  const FeSpace space = build_space(mesh, 2);
  const FeFunction u =
      interpolate(space, [](Point2 p) { return std::cos(p.x + 2 * p.y); });
  const RecoveryOperator op = build_recovery(space, false);
  const HessianField a = recover_hessian(u);
  const HessianField b = recover_hessian(op, u);
  for (int i = 0; i < space.num_dofs; ++i) {
    EXPECT_DOUBLE_EQ(a.xx.coeffs[i], b.xx.coeffs[i]);
    EXPECT_DOUBLE_EQ(a.yy.coeffs[i], b.yy.coeffs[i]);
  }
}

TEST(Recovery, SuperconvergentInteriorGradient) {
  // Away from the boundary the recovered gradient of the interpolant gains
  // well over one order on the O(h^2) gradient itself; halving h must shrink
  // the interior nodal error by at least 2^2.5.
  const ExactSolution exact = square_solution();
  double errors[2];
  int idx = 0;
  for (int n : {16, 32}) {
    const Triangulation mesh = generate_uniform(MeshPattern::Regular, n);
    const FeSpace space = build_space(mesh, 2);
    const FeFunction u = interpolate(space, exact.u);
    const auto [gx, gy] = recover_gradient(u);
    double emax = 0.0;
    for (int i = 0; i < space.num_dofs; ++i) {
      const Point2 p = space.node_coords[i];
      if (std::min({p.x, p.y, 1.0 - p.x, 1.0 - p.y}) < 0.25) continue;
      emax = std::max(emax, std::abs(gx.coeffs[i] - exact.grad(p).x));
    }
    errors[idx++] = emax;
  }
  EXPECT_GE(errors[0] / errors[1], std::pow(2.0, 2.5));
}

TEST(Recovery, SameTypeSamplingFiltersKinds) {
  const Triangulation mesh = generate_uniform(MeshPattern::Regular, 6);
  const FeSpace space = build_space(mesh, 2);
  const int center = node_at(space, 0.5, 0.5);
  const RecoveryPatch patch = build_patch(space, center, true);
  EXPECT_FALSE(patch.fell_back_to_all);
  EXPECT_GE(patch.samples.size(), 10u);
  for (int s : patch.samples)
    EXPECT_EQ(space.node_kind[s].kind, NodeKind::Kind::Vertex);
  // Vertices alone are sparser than all nodes, so the patch needs more
  // rings than the all-type one.
  const RecoveryPatch all = build_patch(space, center, false);
  EXPECT_GT(patch.rings, all.rings);

  const RecoveryOperator op = build_recovery(space, true);
  EXPECT_TRUE(op.same_type);
  EXPECT_GE(op.fallback_count, 0);
}

} // namespace
} // namespace c0ip
