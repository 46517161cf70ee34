// Command-line driver: uniform-mesh convergence studies on the unit square
// and the adaptive run on the L-shaped domain.
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "c0ip/delaunay.hpp"
#include "c0ip/estimator.hpp"
#include "c0ip/io.hpp"
#include "c0ip/study.hpp"

namespace {

struct StudyArgs {
  std::string pattern = "regular";
  int degree = 2;
  std::vector<int> ns{16, 32, 64};
  double gamma = 0.0;
  double L = 0.1;
  std::string solver = "direct";
  bool same_type = false;
  bool interior_by_nodes = false;
  std::string out;
  std::string dump_mesh, dump_solution, dump_matrix, dump_hessian;
};

struct AdaptiveArgs {
  int degree = 2;
  double gamma = 0.0;
  double theta = 0.5;
  bool theta_linear = false;
  int max_dofs = 50000;
  int initial_n = 4;
  int dump_mesh_every = 0;
  std::string solver = "direct";
  bool same_type = false;
  std::string out;
  std::string dump_solution, dump_matrix;
};

c0ip::SolveOptions solver_options(const std::string& name) {
  c0ip::SolveOptions options;
  options.kind = name == "iterative" ? c0ip::SolverKind::Iterative
                                     : c0ip::SolverKind::Direct;
  return options;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << content;
}

// Output stem used for files derived from --out ("adaptive" when writing to
// stdout).
std::string out_stem(const std::string& out) {
  if (out.empty()) return "adaptive";
  const std::string::size_type dot = out.rfind('.');
  const std::string::size_type slash = out.rfind('/');
  if (dot == std::string::npos ||
      (slash != std::string::npos && dot < slash))
    return out;
  return out.substr(0, dot);
}

void emit_csv(const std::string& path, const std::string& body) {
  if (path.empty()) {
    std::cout << body;
  } else {
    write_text_file(path, body);
    std::cerr << "wrote " << path << "\n";
  }
}

int run_study(const StudyArgs& args) {
  c0ip::StudyConfig config;
  if (args.pattern == "delaunay") {
    config.family = c0ip::MeshFamily::Delaunay;
  } else {
    config.family = c0ip::MeshFamily::Pattern;
    if (args.pattern == "regular") config.pattern = c0ip::MeshPattern::Regular;
    else if (args.pattern == "chevron") config.pattern = c0ip::MeshPattern::Chevron;
    else if (args.pattern == "crisscross") config.pattern = c0ip::MeshPattern::CrissCross;
    else if (args.pattern == "unionjack") config.pattern = c0ip::MeshPattern::UnionJack;
    else if (args.pattern == "equilateral") config.pattern = c0ip::MeshPattern::Equilateral;
    else throw CLI::ValidationError("--pattern", "unknown pattern " + args.pattern);
  }
  config.ns = args.ns;
  config.degree = args.degree;
  config.gamma = args.gamma;
  config.interior_distance = args.L;
  config.interior_by_nodes = args.interior_by_nodes;
  config.same_type_sampling = args.same_type;
  config.solver = solver_options(args.solver);

  const c0ip::ExactSolution exact = c0ip::square_solution();
  const auto on_level = [&](const c0ip::StudyRow& row,
                            const c0ip::SolvedProblem& solved) {
    std::cerr << "level n=" << row.n << ": " << row.dofs << " dofs\n";
    const std::string tag = "_n" + std::to_string(row.n) + ".txt";
    if (!args.dump_mesh.empty())
      c0ip::write_mesh_file(args.dump_mesh + tag, solved.space.mesh);
    if (!args.dump_solution.empty()) {
      std::ostringstream body;
      c0ip::write_coefficients(body, solved.u);
      write_text_file(args.dump_solution + tag, body.str());
    }
    if (!args.dump_matrix.empty()) {
      std::ostringstream body;
      c0ip::write_matrix(body, solved.system.matrix);
      write_text_file(args.dump_matrix + tag, body.str());
    }
    if (!args.dump_hessian.empty()) {
      const std::vector<double>* comps[4] = {&solved.hxx, &solved.hxy,
                                             &solved.hyx, &solved.hyy};
      const char* names[4] = {"_xx", "_xy", "_yx", "_yy"};
      for (int i = 0; i < 4; ++i) {
        std::ostringstream body;
        c0ip::write_coefficients(body, *comps[i]);
        write_text_file(args.dump_hessian + names[i] + tag, body.str());
      }
    }
  };

  const std::vector<c0ip::StudyRow> rows =
      c0ip::convergence_study(exact, config, on_level);
  std::ostringstream csv;
  c0ip::write_convergence_csv(csv, rows);
  emit_csv(args.out, csv.str());
  return 0;
}

int run_adaptive(const AdaptiveArgs& args) {
  c0ip::AdaptiveOptions options;
  options.degree = args.degree;
  options.gamma = args.gamma;
  options.theta = args.theta;
  options.theta_squared = !args.theta_linear;
  options.same_type_sampling = args.same_type;
  options.max_dofs = args.max_dofs;
  options.solver = solver_options(args.solver);

  const c0ip::Triangulation initial = c0ip::generate_lshape(args.initial_n);
  const c0ip::ExactSolution exact = c0ip::lshape_solution();
  const std::string stem = out_stem(args.out);

  c0ip::Triangulation last_mesh = initial;
  std::vector<double> last_solution;
  const auto on_iteration = [&](int iter, const c0ip::Triangulation& mesh,
                                const c0ip::FeFunction& u_h) {
    std::cerr << "iteration " << iter << ": " << mesh.num_triangles()
              << " triangles\n";
    last_mesh = mesh;
    last_solution = u_h.coeffs;
    if (args.dump_mesh_every > 0 && iter % args.dump_mesh_every == 0)
      c0ip::write_mesh_file(stem + "_mesh_iter" + std::to_string(iter) +
                                ".txt",
                            mesh);
  };

  const std::vector<c0ip::AdaptRecord> records =
      c0ip::adaptive_loop(initial, exact, options, on_iteration);

  c0ip::write_mesh_file(stem + "_mesh_initial.txt", initial);
  c0ip::write_mesh_file(stem + "_mesh_final.txt", last_mesh);
  if (!args.dump_solution.empty()) {
    std::ostringstream body;
    c0ip::write_coefficients(body, last_solution);
    write_text_file(args.dump_solution, body.str());
  }
  if (!args.dump_matrix.empty()) {
    // Re-solve on the final mesh to expose the assembled system.
    const c0ip::SolvedProblem solved = c0ip::solve_problem(
        last_mesh, exact, options.degree, options.gamma,
        options.same_type_sampling, options.solver);
    std::ostringstream body;
    c0ip::write_matrix(body, solved.system.matrix);
    write_text_file(args.dump_matrix, body.str());
  }

  std::ostringstream csv;
  c0ip::write_adaptive_csv(csv, records);
  emit_csv(args.out, csv.str());
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"C0 interior penalty solver for the clamped biharmonic "
               "problem, with Hessian-recovery error estimation"};
  app.require_subcommand(1);

  StudyArgs study_args;
  CLI::App* study = app.add_subcommand(
      "study", "Convergence study of the square problem on uniform meshes");
  study->add_option("--pattern", study_args.pattern,
                    "Mesh family: regular, chevron, crisscross, unionjack, "
                    "equilateral, or delaunay")
      ->check(CLI::IsMember({"regular", "chevron", "crisscross", "unionjack",
                             "equilateral", "delaunay"}));
  study->add_option("--degree", study_args.degree, "Polynomial degree")
      ->check(CLI::IsMember({2, 3, 4}));
  study->add_option("--n", study_args.ns,
                    "Comma-separated mesh sizes, each double the previous")
      ->delimiter(',');
  study->add_option("--gamma", study_args.gamma,
                    "Penalty parameter (default k^2)");
  study->add_option("--L", study_args.L,
                    "Width of the boundary strip excluded from interior "
                    "error norms");
  study->add_option("--solver", study_args.solver, "Linear solver")
      ->check(CLI::IsMember({"direct", "iterative"}));
  study->add_flag("--same-type-sampling", study_args.same_type,
                  "Restrict recovery sampling to nodes of the same kind");
  study->add_flag("--interior-by-nodes", study_args.interior_by_nodes,
                  "Classify the boundary strip by all Lagrange nodes instead "
                  "of triangle corners");
  study->add_option("--out", study_args.out, "CSV output path (default stdout)");
  study->add_option("--dump-mesh", study_args.dump_mesh,
                    "Prefix for per-level mesh dumps");
  study->add_option("--dump-solution", study_args.dump_solution,
                    "Prefix for per-level coefficient dumps");
  study->add_option("--dump-matrix", study_args.dump_matrix,
                    "Prefix for per-level matrix dumps");
  study->add_option("--dump-hessian", study_args.dump_hessian,
                    "Prefix for per-level recovered-Hessian dumps");

  AdaptiveArgs adaptive_args;
  CLI::App* adaptive = app.add_subcommand(
      "adaptive", "Adaptive refinement of the L-shape problem");
  adaptive->add_option("--degree", adaptive_args.degree, "Polynomial degree")
      ->check(CLI::IsMember({2, 3, 4}));
  adaptive->add_option("--gamma", adaptive_args.gamma,
                       "Penalty parameter (default k^2)");
  adaptive->add_option("--theta", adaptive_args.theta,
                       "Bulk marking parameter");
  adaptive->add_flag("--theta-linear", adaptive_args.theta_linear,
                     "Compare marked mass against theta (not theta^2) times "
                     "the squared total");
  adaptive->add_option("--max-dofs", adaptive_args.max_dofs,
                       "Stop once the space reaches this many dofs");
  adaptive->add_option("--initial-n", adaptive_args.initial_n,
                       "Cells per unit length of the initial L-shape mesh");
  adaptive->add_option("--dump-mesh-every", adaptive_args.dump_mesh_every,
                       "Dump the mesh every this many iterations");
  adaptive->add_option("--solver", adaptive_args.solver, "Linear solver")
      ->check(CLI::IsMember({"direct", "iterative"}));
  adaptive->add_flag("--same-type-sampling", adaptive_args.same_type,
                     "Restrict recovery sampling to nodes of the same kind");
  adaptive->add_option("--out", adaptive_args.out,
                       "CSV output path (default stdout)");
  adaptive->add_option("--dump-solution", adaptive_args.dump_solution,
                       "Path for the final coefficient dump");
  adaptive->add_option("--dump-matrix", adaptive_args.dump_matrix,
                       "Path for the final matrix dump");

  CLI11_PARSE(app, argc, argv);

  try {
    if (study->parsed()) return run_study(study_args);
    if (adaptive->parsed()) return run_adaptive(adaptive_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
