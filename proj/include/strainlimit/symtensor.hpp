#pragma once

#include <array>
#include <span>

#include <Eigen/Core>

namespace strainlimit {

/// Small dense matrices and vectors (d <= 3), stack allocated.
using SmallMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;
using SmallVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;

/// Linear operators on packed symmetric tensors and their vectors (at most 6).
using PackedOperator = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 6, 6>;
using PackedVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 6, 1>;

/// Number of packed components of a symmetric d x d tensor.
constexpr int packed_size(int dim) { return dim * (dim + 1) / 2; }

/// Position of entry (i, j) in the packed layout. Diagonal first, then the
/// off-diagonals in Voigt order: 2D (xx, yy, xy), 3D (xx, yy, zz, yz, xz, xy).
int packed_index(int dim, int i, int j);

/**
 * Symmetric d x d tensor, d in {1, 2, 3}, in Mandel packing.
 *
 * Off-diagonal entries are stored multiplied by sqrt(2), so the plain
 * component-wise dot product of two packed tensors equals the Frobenius
 * product sum_ij A_ij B_ij, and fourth-order operators act on packed vectors as
 * ordinary matrices.
 */
class SymTensor {
 public:
  SymTensor() = default;
  explicit SymTensor(int dim);

  static SymTensor zero(int dim) { return SymTensor(dim); }
  static SymTensor identity(int dim);
  static SymTensor from_packed(int dim, std::span<const double> comps);
  static SymTensor from_vector(int dim, const PackedVector& v);
  /// Packs a matrix that is already symmetric; use sym_part() otherwise.
  static SymTensor from_symmetric_matrix(const SmallMatrix& m);

  int dim() const { return dim_; }
  int size() const { return packed_size(dim_); }

  double operator[](int k) const { return comps_[k]; }
  double& operator[](int k) { return comps_[k]; }
  std::span<const double> packed() const { return {comps_.data(), static_cast<std::size_t>(size())}; }

  /// Unpacked entry A_ij.
  double operator()(int i, int j) const;
  SmallMatrix to_matrix() const;
  PackedVector to_vector() const;

  SymTensor& operator+=(const SymTensor& other);
  SymTensor& operator-=(const SymTensor& other);
  SymTensor& operator*=(double s);

  bool operator==(const SymTensor& other) const;

 private:
  int dim_ = 1;
  std::array<double, 6> comps_{};
};

/// Symmetric part 1/2 (M + M^T). Throws InvalidInput on non-finite entries or
/// a non-square / oversized matrix.
SymTensor sym_part(const SmallMatrix& m);

/// Frobenius product. Throws ContractViolation on dimension mismatch.
double dot(const SymTensor& a, const SymTensor& b);
double norm(const SymTensor& a);
SymTensor scale(const SymTensor& a, double s);
SymTensor add(const SymTensor& a, const SymTensor& b);

inline SymTensor operator+(SymTensor a, const SymTensor& b) { return a += b; }
inline SymTensor operator-(SymTensor a, const SymTensor& b) { return a -= b; }
inline SymTensor operator*(double s, SymTensor a) { return a *= s; }
inline SymTensor operator*(SymTensor a, double s) { return a *= s; }

/// Apply a packed operator to a tensor.
SymTensor apply(const PackedOperator& op, const SymTensor& a);

}  // namespace strainlimit
