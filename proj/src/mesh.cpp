#include "strainlimit/mesh.hpp"

#include <cmath>

#include "strainlimit/errors.hpp"

namespace strainlimit {

Mesh Mesh::interval(double a, double b, int cells) {
  if (cells < 1 || !(b > a)) throw InvalidInput("Mesh::interval: need cells >= 1 and b > a");
  std::vector<double> x(cells + 1);
  for (int i = 0; i <= cells; ++i) x[i] = a + (b - a) * i / cells;
  x.back() = b;
  return interval(std::move(x));
}

Mesh Mesh::interval(std::vector<double> nodes) {
  if (nodes.size() < 2) throw InvalidInput("Mesh::interval: need at least two nodes");
  Mesh m;
  m.dim_ = 1;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!std::isfinite(nodes[i]) || (i > 0 && !(nodes[i] > nodes[i - 1]))) {
      throw InvalidInput("Mesh::interval: nodes must be finite and strictly increasing");
    }
    SmallVector p(1);
    p[0] = nodes[i];
    m.nodes_.push_back(p);
  }
  const int n = static_cast<int>(nodes.size());
  for (int e = 0; e + 1 < n; ++e) m.elements_.push_back({e, e + 1, -1});
  m.boundary_.assign(n, 0);
  m.boundary_.front() = 1;
  m.boundary_.back() = 1;
  m.extent_ = SmallVector::Constant(1, nodes.back() - nodes.front());
  return m;
}

Mesh Mesh::rectangle(double a, double b, double c, double d, int nx, int ny) {
  if (nx < 1 || ny < 1 || !(b > a) || !(d > c)) {
    throw InvalidInput("Mesh::rectangle: need nx, ny >= 1 and a non-degenerate rectangle");
  }
  Mesh m;
  m.dim_ = 2;
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      SmallVector p(2);
      p[0] = i == nx ? b : a + (b - a) * i / nx;
      p[1] = j == ny ? d : c + (d - c) * j / ny;
      m.nodes_.push_back(p);
      m.boundary_.push_back((i == 0 || j == 0 || i == nx || j == ny) ? 1 : 0);
    }
  }
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      m.elements_.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.elements_.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  m.extent_ = SmallVector(2);
  m.extent_ << b - a, d - c;
  return m;
}

double Mesh::element_measure(int e) const {
  const auto& el = elements_[e];
  if (dim_ == 1) return nodes_[el[1]][0] - nodes_[el[0]][0];
  const SmallVector u = nodes_[el[1]] - nodes_[el[0]];
  const SmallVector v = nodes_[el[2]] - nodes_[el[0]];
  return 0.5 * (u[0] * v[1] - u[1] * v[0]);
}

}  // namespace strainlimit
