#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "c0ip/mesh.hpp"
#include "c0ip/sparse.hpp"

namespace c0ip {

// Plain-text mesh format:
//   vertices <V> triangles <T>
//   x y                (V lines)
//   i j k              (T lines, 0-based vertex ids)
void write_mesh(std::ostream& out, const Triangulation& mesh);
Triangulation read_mesh(std::istream& in);

void write_mesh_file(const std::string& path, const Triangulation& mesh);
Triangulation read_mesh_file(const std::string& path);

// Coefficient-vector format:
//   dofs <N>
//   value              (N lines)
void write_coefficients(std::ostream& out, const std::vector<double>& coeffs);
std::vector<double> read_coefficients(std::istream& in);

// Matrix dump, one "row col value" triple per stored entry.
void write_matrix(std::ostream& out, const SparseSymMatrix& matrix);

} // namespace c0ip
