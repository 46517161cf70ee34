#include "c0ip/lagrange.hpp"

#include <Eigen/Dense>
#include <map>
#include <mutex>
#include <stdexcept>

namespace c0ip {

namespace {

struct Monomial {
  int px = 0;
  int py = 0;
};

// Monomials of total degree <= k, ordered by total degree then by y-power.
std::vector<Monomial> monomials(int degree) {
  std::vector<Monomial> out;
  for (int d = 0; d <= degree; ++d)
    for (int py = 0; py <= d; ++py) out.push_back({d - py, py});
  return out;
}

std::vector<Point2> build_nodes(int degree) {
  const int k = degree;
  std::vector<Point2> nodes;
  const auto lattice = [k](int i, int j) {
    return Point2{static_cast<double>(i) / k, static_cast<double>(j) / k};
  };
  nodes.push_back(lattice(0, 0));
  nodes.push_back(lattice(k, 0));
  nodes.push_back(lattice(0, k));
  for (int j = 1; j < k; ++j) nodes.push_back(lattice(j, 0));     // v0 -> v1
  for (int j = 1; j < k; ++j) nodes.push_back(lattice(k - j, j)); // v1 -> v2
  for (int j = 1; j < k; ++j) nodes.push_back(lattice(0, k - j)); // v2 -> v0
  for (int i = 1; i < k; ++i)
    for (int j = 1; i + j <= k - 1; ++j) nodes.push_back(lattice(i, j));
  return nodes;
}

// Coefficients of each basis function in the monomial basis, one column per
// basis function, via inversion of the node-evaluation matrix.
struct BasisTable {
  std::vector<Point2> nodes;
  std::vector<Monomial> monos;
  Eigen::MatrixXd coeff; // (#monomials) x (#basis functions)
};

const BasisTable& basis_table(int degree) {
  static std::map<int, BasisTable> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(degree);
  if (it != cache.end()) return it->second;

  BasisTable table;
  table.nodes = build_nodes(degree);
  table.monos = monomials(degree);
  const int n = static_cast<int>(table.nodes.size());
  Eigen::MatrixXd vandermonde(n, n);
  for (int i = 0; i < n; ++i)
    for (int m = 0; m < n; ++m)
      vandermonde(i, m) = std::pow(table.nodes[i].x, table.monos[m].px) *
                          std::pow(table.nodes[i].y, table.monos[m].py);
  table.coeff = vandermonde.fullPivLu().inverse();
  return cache.emplace(degree, std::move(table)).first->second;
}

double mono_value(const Monomial& m, double x, double y) {
  return std::pow(x, m.px) * std::pow(y, m.py);
}

double mono_dx(const Monomial& m, double x, double y) {
  return m.px == 0 ? 0.0 : m.px * std::pow(x, m.px - 1) * std::pow(y, m.py);
}

double mono_dy(const Monomial& m, double x, double y) {
  return m.py == 0 ? 0.0 : m.py * std::pow(x, m.px) * std::pow(y, m.py - 1);
}

double mono_dxx(const Monomial& m, double x, double y) {
  if (m.px < 2) return 0.0;
  return m.px * (m.px - 1) * std::pow(x, m.px - 2) * std::pow(y, m.py);
}

double mono_dxy(const Monomial& m, double x, double y) {
  if (m.px < 1 || m.py < 1) return 0.0;
  return m.px * m.py * std::pow(x, m.px - 1) * std::pow(y, m.py - 1);
}

double mono_dyy(const Monomial& m, double x, double y) {
  if (m.py < 2) return 0.0;
  return m.py * (m.py - 1) * std::pow(x, m.px) * std::pow(y, m.py - 2);
}

} // namespace

const std::vector<Point2>& reference_nodes(int degree) {
  if (degree < 1 || degree > 6)
    throw std::invalid_argument("reference_nodes: unsupported degree");
  return basis_table(degree).nodes;
}

BasisValues eval_basis_ref(int degree, Point2 p) {
  if (degree < 1 || degree > 6)
    throw std::invalid_argument("eval_basis: unsupported degree");
  const BasisTable& table = basis_table(degree);
  const int n = static_cast<int>(table.nodes.size());
  const int nm = static_cast<int>(table.monos.size());

  Eigen::VectorXd val(nm), dx(nm), dy(nm), dxx(nm), dxy(nm), dyy(nm);
  for (int m = 0; m < nm; ++m) {
    val(m) = mono_value(table.monos[m], p.x, p.y);
    dx(m) = mono_dx(table.monos[m], p.x, p.y);
    dy(m) = mono_dy(table.monos[m], p.x, p.y);
    dxx(m) = mono_dxx(table.monos[m], p.x, p.y);
    dxy(m) = mono_dxy(table.monos[m], p.x, p.y);
    dyy(m) = mono_dyy(table.monos[m], p.x, p.y);
  }

  BasisValues out;
  out.value.resize(n);
  out.grad.resize(n);
  out.hess.resize(n);
  for (int i = 0; i < n; ++i) {
    const auto col = table.coeff.col(i);
    out.value[i] = col.dot(val);
    out.grad[i] = {col.dot(dx), col.dot(dy)};
    out.hess[i] = {col.dot(dxx), col.dot(dxy), col.dot(dyy)};
  }
  return out;
}

BasisValues eval_basis(int degree, const Barycentric& point) {
  return eval_basis_ref(degree, {point[1], point[2]});
}

} // namespace c0ip
