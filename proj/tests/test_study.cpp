#include <cmath>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "c0ip/io.hpp"
#include "c0ip/study.hpp"

namespace c0ip {
namespace {

// Distance to the unit-square boundary, for cross-checking interior_split.
double square_boundary_distance(Point2 p) {
  return std::min({p.x, p.y, 1.0 - p.x, 1.0 - p.y});
}

TEST(InteriorSplit, MatchesBruteForce) {
  const ExactSolution exact = square_solution();
  const Triangulation mesh = generate_uniform(MeshPattern::Regular, 16);
  const FeSpace space = build_space(mesh, 2);
  const double L = 0.1;
  const InteriorSplit split = interior_split(space, exact.domain, L);

  int omega2 = 0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    bool all_near = true;
    for (int c = 0; c < 3; ++c)
      all_near &= square_boundary_distance(mesh.vertex(t, c)) <= L;
    EXPECT_EQ(split.omega2[t] != 0, !all_near) << "triangle " << t;
    omega2 += !all_near;
  }
  EXPECT_EQ(split.omega2_count, omega2);
  EXPECT_EQ(split.omega1_count + split.omega2_count, mesh.num_triangles());
  for (int i = 0; i < space.num_dofs; ++i)
    EXPECT_EQ(split.node_near_boundary[i] != 0,
              square_boundary_distance(space.node_coords[i]) <= L);
}

TEST(InteriorSplit, DegenerateWidths) {
  const ExactSolution exact = square_solution();
  const Triangulation mesh = generate_uniform(MeshPattern::Regular, 4);
  const FeSpace space = build_space(mesh, 2);
  // L = 0 keeps only boundary nodes in the strip.  On the regular pattern
  // exactly two triangles (hugging the bottom-right and top-left corners)
  // have all three vertices on the boundary; everything else is interior.
  const InteriorSplit zero = interior_split(space, exact.domain, 0.0);
  EXPECT_EQ(zero.omega2_count, mesh.num_triangles() - 2);
  // A strip wider than half the square swallows every element.
  const InteriorSplit wide = interior_split(space, exact.domain, 0.6);
  EXPECT_EQ(wide.omega2_count, 0);
  EXPECT_THROW(interior_split(space, exact.domain, -0.1),
               std::invalid_argument);
}

TEST(InteriorSplit, AllNodesVariantIsMoreConservative) {
  const ExactSolution exact = square_solution();
  const Triangulation mesh = generate_uniform(MeshPattern::Regular, 8);
  const FeSpace space = build_space(mesh, 4);
  const InteriorSplit corners = interior_split(space, exact.domain, 0.07);
  const InteriorSplit nodes = interior_split(space, exact.domain, 0.07, true);
  // Checking all Lagrange nodes can only demote elements from the strip to
  // the interior: strip membership needs every node near the boundary.
  for (int t = 0; t < mesh.num_triangles(); ++t)
    if (!corners.omega2[t]) EXPECT_GE(nodes.omega2[t], corners.omega2[t]);
  EXPECT_GE(nodes.omega2_count, corners.omega2_count);
}

TEST(ErrorNorms, ExactDiscreteSolutionGivesZero) {
  // Exact solution inside the FE space, recovered Hessian exact at nodes:
  // all three error measures collapse.
  ExactSolution exact;
  exact.name = "quadratic";
  exact.domain = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  exact.u = [](Point2 p) { return p.x * p.x + p.x * p.y - p.y * p.y; };
  exact.grad = [](Point2 p) {
    return Point2{2 * p.x + p.y, p.x - 2 * p.y};
  };
  exact.hess = [](Point2) { return std::array<double, 3>{2.0, 1.0, -2.0}; };
  exact.f = [](Point2) { return 0.0; };

  const Triangulation mesh = generate_uniform(MeshPattern::Regular, 4);
  const FeSpace space = build_space(mesh, 2);
  const FeFunction u_h = interpolate(space, exact.u);
  const HessianField h = recover_hessian(u_h);
  const InteriorSplit split = interior_split(space, exact.domain, 0.1);
  const ErrorNorms norms = error_norms(u_h, h, exact, split.omega2);
  EXPECT_NEAR(norms.he0, 0.0, 1e-10);
  EXPECT_NEAR(norms.hre0, 0.0, 1e-9);
  EXPECT_NEAR(norms.hre_inf, 0.0, 1e-9);
}

TEST(ErrorNorms, QuadratureDegreeIsSaturated) {
  // Raising the quadrature degree beyond the default must not move the L2
  // error norms; the sup norm may shift slightly because the evaluation
  // points change with the rule.
  const ExactSolution exact = square_solution();
  const Triangulation mesh = generate_uniform(MeshPattern::Regular, 8);
  const SolvedProblem solved = solve_problem(mesh, exact, 2, 4.0, false, {});
  const InteriorSplit split = interior_split(solved.space, exact.domain, 0.1);
  const ErrorNorms base =
      error_norms(solved.solution(), solved.hessian(), exact, split.omega2);
  const ErrorNorms boosted =
      error_norms(solved.solution(), solved.hessian(), exact, split.omega2, 2);
  EXPECT_NEAR(boosted.he0, base.he0, 1e-8 * base.he0);
  EXPECT_NEAR(boosted.hre0, base.hre0, 1e-7 * base.hre0);
  EXPECT_NEAR(boosted.hre_inf, base.hre_inf, 1e-2 * base.hre_inf);
  EXPECT_THROW(error_norms(solved.solution(), solved.hessian(), exact,
                           std::vector<char>(3, 1)),
               std::invalid_argument);
}

TEST(Study, MeshFamilies) {
  StudyConfig config;
  config.family = MeshFamily::Pattern;
  config.pattern = MeshPattern::Chevron;
  EXPECT_EQ(study_mesh(config, 8).num_triangles(), 2 * 8 * 8);

  config.family = MeshFamily::Delaunay;
  // The fixed cloud triangulates into 128 triangles; each doubling of n is
  // one red refinement.
  EXPECT_EQ(study_mesh(config, 8).num_triangles(), 128);
  EXPECT_EQ(study_mesh(config, 16).num_triangles(), 512);
  EXPECT_EQ(study_mesh(config, 32).num_triangles(), 2048);
  EXPECT_THROW(study_mesh(config, 12), std::invalid_argument);
  EXPECT_THROW(study_mesh(config, 0), std::invalid_argument);
}

TEST(Study, ValidatesLevelSequence) {
  const ExactSolution exact = square_solution();
  StudyConfig config;
  config.ns = {};
  EXPECT_THROW(convergence_study(exact, config), std::invalid_argument);
  config.ns = {8, 12};
  EXPECT_THROW(convergence_study(exact, config), std::invalid_argument);
}

TEST(Study, RowsCarryOrdersAndCallbacksFire) {
  const ExactSolution exact = square_solution();
  StudyConfig config;
  config.ns = {4, 8};
  int callbacks = 0;
  const std::vector<StudyRow> rows = convergence_study(
      exact, config,
      [&](const StudyRow& row, const SolvedProblem& solved) {
        ++callbacks;
        EXPECT_EQ(row.dofs, solved.space.num_dofs);
      });
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(callbacks, 2);
  EXPECT_EQ(rows[0].n, 4);
  EXPECT_EQ(rows[1].n, 8);
  EXPECT_EQ(rows[0].dofs, 9 * 9);
  EXPECT_EQ(rows[1].dofs, 17 * 17);
  EXPECT_TRUE(std::isnan(rows[0].he0_order));
  // Halving h shrinks every error, and the order fields log the ratios.
  EXPECT_LT(rows[1].norms.he0, rows[0].norms.he0);
  EXPECT_NEAR(rows[1].he0_order,
              std::log2(rows[0].norms.he0 / rows[1].norms.he0), 1e-12);
  EXPECT_NEAR(rows[1].hre0_order,
              std::log2(rows[0].norms.hre0 / rows[1].norms.hre0), 1e-12);
}

TEST(Study, ConvergenceCsvLayout) {
  const ExactSolution exact = square_solution();
  StudyConfig config;
  config.ns = {4, 8};
  const std::vector<StudyRow> rows = convergence_study(exact, config);
  std::ostringstream out;
  write_convergence_csv(out, rows);
  std::istringstream in(out.str());
  std::string header, row1, row2, extra;
  ASSERT_TRUE(std::getline(in, header));
  ASSERT_TRUE(std::getline(in, row1));
  ASSERT_TRUE(std::getline(in, row2));
  EXPECT_FALSE(std::getline(in, extra));
  EXPECT_EQ(header, "inv_h,He0,He0_order,Hre0,Hre0_order,HreInf,HreInf_order");
  EXPECT_EQ(row1.substr(0, 2), "4,");
  EXPECT_NE(row1.find(",,"), std::string::npos); // empty order fields
  EXPECT_EQ(row2.substr(0, 2), "8,");
  EXPECT_EQ(row2.find(",,"), std::string::npos);
}

TEST(Study, AdaptiveCsvLayout) {
  std::ostringstream out;
  write_adaptive_csv(out, {{0, 100, 1.5, 1.6, 0.94}, {1, 180, 1.1, 1.2, 0.92}});
  std::istringstream in(out.str());
  std::string comment, header, row;
  ASSERT_TRUE(std::getline(in, comment));
  EXPECT_EQ(comment.substr(0, 1), "#"); // effective-mesh-size note
  ASSERT_TRUE(std::getline(in, header));
  EXPECT_EQ(header, "iter,dofs,eta_total,h2_error,kappa");
  ASSERT_TRUE(std::getline(in, row));
  EXPECT_EQ(row.substr(0, 6), "0,100,");
}

TEST(Io, MeshRoundTrip) {
  const Triangulation mesh = generate_lshape(2);
  std::stringstream buffer;
  write_mesh(buffer, mesh);
  const Triangulation back = read_mesh(buffer);
  ASSERT_EQ(back.num_vertices(), mesh.num_vertices());
  ASSERT_EQ(back.num_triangles(), mesh.num_triangles());
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    EXPECT_EQ(back.vertices[v].x, mesh.vertices[v].x);
    EXPECT_EQ(back.vertices[v].y, mesh.vertices[v].y);
  }
  for (int t = 0; t < mesh.num_triangles(); ++t)
    EXPECT_EQ(back.triangles[t].v, mesh.triangles[t].v);
  EXPECT_EQ(back.num_edges(), mesh.num_edges());
}

TEST(Io, MeshRejectsGarbage) {
  std::istringstream bad("vertices 3 triangles");
  EXPECT_THROW(read_mesh(bad), std::runtime_error);
  std::istringstream truncated("vertices 3 triangles 1\n0 0\n1 0\n");
  EXPECT_THROW(read_mesh(truncated), std::runtime_error);
}

TEST(Io, CoefficientsRoundTrip) {
  const std::vector<double> coeffs = {1.0, -2.5, 3.25e-17, 7.0 / 3.0};
  std::stringstream buffer;
  write_coefficients(buffer, coeffs);
  const std::vector<double> back = read_coefficients(buffer);
  ASSERT_EQ(back.size(), coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    EXPECT_EQ(back[i], coeffs[i]);
}

TEST(Io, MatrixDump) {
  const SparseSymMatrix a =
      SparseSymMatrix::from_triplets(2, {{0, 0, 2.0}, {0, 1, -1.0},
                                         {1, 0, -1.0}, {1, 1, 2.0}});
  std::ostringstream out;
  write_matrix(out, a);
  std::istringstream in(out.str());
  int row, col, lines = 0;
  double value;
  while (in >> row >> col >> value) {
    EXPECT_NEAR(value, a.coeff(row, col), 0.0);
    ++lines;
  }
  EXPECT_EQ(lines, a.nnz());
}

} // namespace
} // namespace c0ip
