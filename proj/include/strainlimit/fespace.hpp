#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "strainlimit/analytic_field.hpp"
#include "strainlimit/mesh.hpp"
#include "strainlimit/symtensor.hpp"

namespace strainlimit {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Nodal coefficients of a vector P1 field over all dofs (dof = node * d + component).
/// Fields in the Galerkin test space have zeros at Dirichlet dofs.
using FEField = Eigen::VectorXd;

struct QuadPoint {
  int element;
  SmallVector x;
  double weight;
  /// P1 shape function values of the element's nodes at x.
  std::array<double, 3> shape;
};

/**
 * Vector-valued conforming P1 space on a Mesh with homogeneous Dirichlet
 * conditions on every boundary node. Quadrature: 2-point Gauss per interval in
 * 1D, 3-point edge-midpoint rule per triangle in 2D (both exact for P1 x P1).
 */
class FESpace {
 public:
  explicit FESpace(Mesh mesh);

  const Mesh& mesh() const { return mesh_; }
  int dim() const { return mesh_.dim(); }
  int n_dofs() const { return mesh_.n_nodes() * dim(); }
  int n_interior() const { return static_cast<int>(interior_dofs_.size()); }
  /// Interior index of a dof, or -1 for a Dirichlet dof.
  int interior_index(int dof) const { return interior_index_[dof]; }
  const std::vector<int>& interior_dofs() const { return interior_dofs_; }

  std::span<const QuadPoint> quadrature() const { return quadrature_; }
  int n_qp() const { return static_cast<int>(quadrature_.size()); }

  /// Maps element dofs (local node a, component c -> a * d + c) to packed strain.
  const PackedOperator& strain_matrix(int element) const { return strain_matrices_[element]; }
  /// Global dof of local element dof k.
  int element_dof(int element, int k) const;
  int dofs_per_element() const { return mesh_.nodes_per_element() * dim(); }

  FEField embed(const Eigen::VectorXd& interior) const;
  Eigen::VectorXd restrict_to_interior(const FEField& nodal) const;

 private:
  Mesh mesh_;
  std::vector<int> interior_index_;
  std::vector<int> interior_dofs_;
  std::vector<QuadPoint> quadrature_;
  std::vector<PackedOperator> strain_matrices_;
};

/// Consistent mass matrix restricted to interior dofs (SPD).
SparseMatrix assemble_mass(const FESpace& space);
/// Consistent mass matrix over all dofs, before the Dirichlet mask.
SparseMatrix assemble_mass_full(const FESpace& space);

/// eps(u) at every quadrature point, u = sum_j c_j w_j plus an optional lift
/// whose gradient is given per quadrature point.
std::vector<SymTensor> strain_at_qp(const FESpace& space, const FEField& nodal,
                                    std::span<const SmallMatrix> lift_grad = {});
std::vector<SmallVector> values_at_qp(const FESpace& space, const FEField& nodal);

/// Entries int T . grad w_j over interior dofs j.
Eigen::VectorXd assemble_stress_load(const FESpace& space, std::span<const SymTensor> stress);
/// Entries int v . w_j over interior dofs, v given per quadrature point.
Eigen::VectorXd assemble_qp_load(const FESpace& space, std::span<const SmallVector> values);
/// Entries int f(t) . w_j over interior dofs.
Eigen::VectorXd assemble_forcing(const FESpace& space, const ForcingFn& f, double t);
/// sum_qp w B^T C B over interior dofs, C given per quadrature point.
SparseMatrix assemble_tangent(const FESpace& space, std::span<const PackedOperator> moduli);

/// Nodal interpolant of u(t, .) over all dofs.
FEField interpolate(const FESpace& space, const AnalyticField& u, double t);
double l2_norm(const FESpace& space, const FEField& nodal);
/// || lift(t) + u_h - exact(t) ||_{L2}, evaluated with the space's quadrature.
double l2_error(const FESpace& space, const FEField& nodal, const AnalyticField& exact, double t,
                const AnalyticField* lift = nullptr);

}  // namespace strainlimit
