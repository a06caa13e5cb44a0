#include "strainlimit/symtensor.hpp"

#include <cmath>
#include <string>

#include "strainlimit/errors.hpp"

namespace strainlimit {
namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

void check_dim(int dim) {
  if (dim < 1 || dim > 3) {
    throw ContractViolation("SymTensor: dimension must be 1, 2 or 3, got " + std::to_string(dim));
  }
}

void check_same(const SymTensor& a, const SymTensor& b) {
  if (a.dim() != b.dim()) {
    throw ContractViolation("SymTensor: dimension mismatch (" + std::to_string(a.dim()) + " vs " +
                            std::to_string(b.dim()) + ")");
  }
}

}  // namespace

int packed_index(int dim, int i, int j) {
  if (i == j) return i;
  if (dim == 2) return 2;
  // 3D off-diagonals: yz -> 3, xz -> 4, xy -> 5
  return 6 - i - j;
}

SymTensor::SymTensor(int dim) : dim_(dim) { check_dim(dim); }

SymTensor SymTensor::identity(int dim) {
  SymTensor t(dim);
  for (int i = 0; i < dim; ++i) t.comps_[i] = 1.0;
  return t;
}

SymTensor SymTensor::from_packed(int dim, std::span<const double> comps) {
  SymTensor t(dim);
  if (static_cast<int>(comps.size()) != t.size()) {
    throw ContractViolation("SymTensor::from_packed: expected " + std::to_string(t.size()) + " components");
  }
  for (int k = 0; k < t.size(); ++k) t.comps_[k] = comps[k];
  return t;
}

SymTensor SymTensor::from_vector(int dim, const PackedVector& v) {
  return from_packed(dim, std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
}

SymTensor SymTensor::from_symmetric_matrix(const SmallMatrix& m) {
  const int dim = static_cast<int>(m.rows());
  SymTensor t(dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      t.comps_[packed_index(dim, i, j)] = (i == j) ? m(i, i) : kSqrt2 * m(i, j);
    }
  }
  return t;
}

double SymTensor::operator()(int i, int j) const {
  const double c = comps_[packed_index(dim_, i, j)];
  return i == j ? c : c / kSqrt2;
}

SmallMatrix SymTensor::to_matrix() const {
  SmallMatrix m(dim_, dim_);
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) m(i, j) = (*this)(i, j);
  }
  return m;
}

PackedVector SymTensor::to_vector() const {
  PackedVector v(size());
  for (int k = 0; k < size(); ++k) v[k] = comps_[k];
  return v;
}

SymTensor& SymTensor::operator+=(const SymTensor& other) {
  check_same(*this, other);
  for (int k = 0; k < size(); ++k) comps_[k] += other.comps_[k];
  return *this;
}

SymTensor& SymTensor::operator-=(const SymTensor& other) {
  check_same(*this, other);
  for (int k = 0; k < size(); ++k) comps_[k] -= other.comps_[k];
  return *this;
}

SymTensor& SymTensor::operator*=(double s) {
  for (int k = 0; k < size(); ++k) comps_[k] *= s;
  return *this;
}

bool SymTensor::operator==(const SymTensor& other) const {
  if (dim_ != other.dim_) return false;
  for (int k = 0; k < size(); ++k) {
    if (comps_[k] != other.comps_[k]) return false;
  }
  return true;
}

SymTensor sym_part(const SmallMatrix& m) {
  if (m.rows() != m.cols() || m.rows() < 1 || m.rows() > 3) {
    throw InvalidInput("sym_part: expected a square matrix of size 1..3");
  }
  if (!m.allFinite()) throw InvalidInput("sym_part: non-finite entry");
  const SmallMatrix s = 0.5 * (m + m.transpose());
  return SymTensor::from_symmetric_matrix(s);
}

double dot(const SymTensor& a, const SymTensor& b) {
  check_same(a, b);
  double s = 0.0;
  for (int k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double norm(const SymTensor& a) { return std::sqrt(dot(a, a)); }

SymTensor scale(const SymTensor& a, double s) { return a * s; }

SymTensor add(const SymTensor& a, const SymTensor& b) { return a + b; }

SymTensor apply(const PackedOperator& op, const SymTensor& a) {
  if (op.cols() != a.size() || op.rows() != a.size()) {
    throw ContractViolation("apply: operator size does not match tensor");
  }
  return SymTensor::from_vector(a.dim(), op * a.to_vector());
}

}  // namespace strainlimit
