#include "c0ip/io.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace c0ip {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

} // namespace

void write_mesh(std::ostream& out, const Triangulation& mesh) {
  out << "vertices " << mesh.num_vertices() << " triangles "
      << mesh.num_triangles() << "\n";
  out << std::setprecision(17);
  for (const Point2& p : mesh.vertices) out << p.x << " " << p.y << "\n";
  for (const Triangle& t : mesh.triangles)
    out << t.v[0] << " " << t.v[1] << " " << t.v[2] << "\n";
}

Triangulation read_mesh(std::istream& in) {
  std::string kw_vertices, kw_triangles;
  int nv = 0, nt = 0;
  in >> kw_vertices >> nv >> kw_triangles >> nt;
  if (!in || kw_vertices != "vertices" || kw_triangles != "triangles")
    throw std::runtime_error("read_mesh: malformed header");
  Triangulation mesh;
  mesh.vertices.resize(nv);
  for (Point2& p : mesh.vertices) in >> p.x >> p.y;
  mesh.triangles.resize(nt);
  for (Triangle& t : mesh.triangles) in >> t.v[0] >> t.v[1] >> t.v[2];
  if (!in) throw std::runtime_error("read_mesh: truncated file");
  build_edge_topology(mesh);
  validate_mesh(mesh);
  return mesh;
}

void write_mesh_file(const std::string& path, const Triangulation& mesh) {
  std::ofstream out = open_out(path);
  write_mesh(out, mesh);
}

Triangulation read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return read_mesh(in);
}

void write_coefficients(std::ostream& out, const std::vector<double>& coeffs) {
  out << "dofs " << coeffs.size() << "\n";
  out << std::setprecision(17);
  for (double c : coeffs) out << c << "\n";
}

std::vector<double> read_coefficients(std::istream& in) {
  std::string kw;
  std::size_t n = 0;
  in >> kw >> n;
  if (!in || kw != "dofs")
    throw std::runtime_error("read_coefficients: malformed header");
  std::vector<double> coeffs(n);
  for (double& c : coeffs) in >> c;
  if (!in) throw std::runtime_error("read_coefficients: truncated file");
  return coeffs;
}

void write_matrix(std::ostream& out, const SparseSymMatrix& matrix) {
  out << std::setprecision(17);
  for (int row = 0; row < matrix.n; ++row)
    for (int k = matrix.row_ptr[row]; k < matrix.row_ptr[row + 1]; ++k)
      out << row << " " << matrix.col_idx[k] << " " << matrix.values[k]
          << "\n";
}

} // namespace c0ip
