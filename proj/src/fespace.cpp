#include "strainlimit/fespace.hpp"

#include <cmath>

#include <Eigen/LU>

#include "strainlimit/errors.hpp"

namespace strainlimit {

FESpace::FESpace(Mesh mesh) : mesh_(std::move(mesh)) {
  const int d = dim();
  interior_index_.assign(n_dofs(), -1);
  for (int node = 0; node < mesh_.n_nodes(); ++node) {
    if (mesh_.on_boundary(node)) continue;
    for (int c = 0; c < d; ++c) {
      interior_index_[node * d + c] = static_cast<int>(interior_dofs_.size());
      interior_dofs_.push_back(node * d + c);
    }
  }

  const int npe = mesh_.nodes_per_element();
  for (int e = 0; e < mesh_.n_elements(); ++e) {
    const auto& el = mesh_.element(e);
    const double meas = mesh_.element_measure(e);
    if (!(meas > 0.0)) throw InvalidInput("FESpace: element with non-positive measure");

    // shape function gradients (constant on the element)
    std::array<SmallVector, 3> grads;
    if (d == 1) {
      grads[0] = SmallVector::Constant(1, -1.0 / meas);
      grads[1] = SmallVector::Constant(1, 1.0 / meas);
    } else {
      const SmallVector& x0 = mesh_.node(el[0]);
      Eigen::Matrix2d jac;
      jac.col(0) = (mesh_.node(el[1]) - x0).head<2>();
      jac.col(1) = (mesh_.node(el[2]) - x0).head<2>();
      const Eigen::Matrix2d jit = jac.inverse().transpose();
      grads[1] = jit.col(0);
      grads[2] = jit.col(1);
      grads[0] = -(grads[1] + grads[2]);
    }

    PackedOperator b = PackedOperator::Zero(packed_size(d), npe * d);
    for (int a = 0; a < npe; ++a) {
      for (int c = 0; c < d; ++c) {
        SmallMatrix g = SmallMatrix::Zero(d, d);
        g.row(c) = grads[a].transpose();
        b.col(a * d + c) = sym_part(g).to_vector();
      }
    }
    strain_matrices_.push_back(b);

    if (d == 1) {
      const double xa = mesh_.node(el[0])[0];
      const double h = meas;
      for (double xi : {-1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0)}) {
        QuadPoint qp{e, SmallVector::Constant(1, xa + 0.5 * h * (1.0 + xi)), 0.5 * h,
                     {0.5 * (1.0 - xi), 0.5 * (1.0 + xi), 0.0}};
        quadrature_.push_back(qp);
      }
    } else {
      // edge midpoints (0,1), (1,2), (2,0)
      for (int k = 0; k < 3; ++k) {
        const int a = k;
        const int bn = (k + 1) % 3;
        QuadPoint qp{e, 0.5 * (mesh_.node(el[a]) + mesh_.node(el[bn])), meas / 3.0, {0.0, 0.0, 0.0}};
        qp.shape[a] = 0.5;
        qp.shape[bn] = 0.5;
        quadrature_.push_back(qp);
      }
    }
  }
}

int FESpace::element_dof(int element, int k) const {
  const int d = dim();
  return mesh_.element(element)[k / d] * d + k % d;
}

FEField FESpace::embed(const Eigen::VectorXd& interior) const {
  if (interior.size() != n_interior()) throw ContractViolation("embed: wrong interior vector length");
  FEField full = FEField::Zero(n_dofs());
  for (int i = 0; i < n_interior(); ++i) full[interior_dofs_[i]] = interior[i];
  return full;
}

Eigen::VectorXd FESpace::restrict_to_interior(const FEField& nodal) const {
  if (nodal.size() != n_dofs()) throw ContractViolation("restrict_to_interior: wrong nodal vector length");
  Eigen::VectorXd v(n_interior());
  for (int i = 0; i < n_interior(); ++i) v[i] = nodal[interior_dofs_[i]];
  return v;
}

namespace {

SparseMatrix mass_impl(const FESpace& space, bool interior_only) {
  const int d = space.dim();
  const int npe = space.mesh().nodes_per_element();
  std::vector<Eigen::Triplet<double>> trip;
  for (const QuadPoint& qp : space.quadrature()) {
    const auto& el = space.mesh().element(qp.element);
    for (int a = 0; a < npe; ++a) {
      for (int b = 0; b < npe; ++b) {
        const double m = qp.weight * qp.shape[a] * qp.shape[b];
        for (int c = 0; c < d; ++c) {
          int i = el[a] * d + c;
          int j = el[b] * d + c;
          if (interior_only) {
            i = space.interior_index(i);
            j = space.interior_index(j);
            if (i < 0 || j < 0) continue;
          }
          trip.emplace_back(i, j, m);
        }
      }
    }
  }
  const int n = interior_only ? space.n_interior() : space.n_dofs();
  SparseMatrix mass(n, n);
  mass.setFromTriplets(trip.begin(), trip.end());
  return mass;
}

Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 6, 1> element_coeffs(const FESpace& space, const FEField& nodal,
                                                                  int e) {
  Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 6, 1> c(space.dofs_per_element());
  for (int k = 0; k < space.dofs_per_element(); ++k) c[k] = nodal[space.element_dof(e, k)];
  return c;
}

}  // namespace

SparseMatrix assemble_mass(const FESpace& space) { return mass_impl(space, true); }

SparseMatrix assemble_mass_full(const FESpace& space) { return mass_impl(space, false); }

std::vector<SymTensor> strain_at_qp(const FESpace& space, const FEField& nodal,
                                    std::span<const SmallMatrix> lift_grad) {
  if (nodal.size() != space.n_dofs()) throw ContractViolation("strain_at_qp: wrong nodal vector length");
  if (!lift_grad.empty() && static_cast<int>(lift_grad.size()) != space.n_qp()) {
    throw ContractViolation("strain_at_qp: lift gradient must be given at every quadrature point");
  }
  const int d = space.dim();
  std::vector<SymTensor> out;
  out.reserve(space.n_qp());
  int last_e = -1;
  SymTensor elem_strain(d);
  for (int q = 0; q < space.n_qp(); ++q) {
    const QuadPoint& qp = space.quadrature()[q];
    if (qp.element != last_e) {
      elem_strain = SymTensor::from_vector(d, space.strain_matrix(qp.element) * element_coeffs(space, nodal, qp.element));
      last_e = qp.element;
    }
    if (lift_grad.empty()) {
      out.push_back(elem_strain);
    } else {
      out.push_back(elem_strain + sym_part(lift_grad[q]));
    }
  }
  return out;
}

std::vector<SmallVector> values_at_qp(const FESpace& space, const FEField& nodal) {
  const int d = space.dim();
  std::vector<SmallVector> out;
  out.reserve(space.n_qp());
  for (const QuadPoint& qp : space.quadrature()) {
    const auto& el = space.mesh().element(qp.element);
    SmallVector v = SmallVector::Zero(d);
    for (int a = 0; a < space.mesh().nodes_per_element(); ++a) {
      for (int c = 0; c < d; ++c) v[c] += qp.shape[a] * nodal[el[a] * d + c];
    }
    out.push_back(v);
  }
  return out;
}

Eigen::VectorXd assemble_stress_load(const FESpace& space, std::span<const SymTensor> stress) {
  if (static_cast<int>(stress.size()) != space.n_qp()) {
    throw ContractViolation("assemble_stress_load: stress must be given at every quadrature point");
  }
  Eigen::VectorXd load = Eigen::VectorXd::Zero(space.n_interior());
  for (int q = 0; q < space.n_qp(); ++q) {
    const QuadPoint& qp = space.quadrature()[q];
    const auto local = (space.strain_matrix(qp.element).transpose() * stress[q].to_vector()).eval();
    for (int k = 0; k < space.dofs_per_element(); ++k) {
      const int i = space.interior_index(space.element_dof(qp.element, k));
      if (i >= 0) load[i] += qp.weight * local[k];
    }
  }
  return load;
}

Eigen::VectorXd assemble_qp_load(const FESpace& space, std::span<const SmallVector> values) {
  if (static_cast<int>(values.size()) != space.n_qp()) {
    throw ContractViolation("assemble_qp_load: values must be given at every quadrature point");
  }
  const int d = space.dim();
  Eigen::VectorXd load = Eigen::VectorXd::Zero(space.n_interior());
  for (int q = 0; q < space.n_qp(); ++q) {
    const QuadPoint& qp = space.quadrature()[q];
    const auto& el = space.mesh().element(qp.element);
    for (int a = 0; a < space.mesh().nodes_per_element(); ++a) {
      for (int c = 0; c < d; ++c) {
        const int i = space.interior_index(el[a] * d + c);
        if (i >= 0) load[i] += qp.weight * qp.shape[a] * values[q][c];
      }
    }
  }
  return load;
}

Eigen::VectorXd assemble_forcing(const FESpace& space, const ForcingFn& f, double t) {
  if (!f) return Eigen::VectorXd::Zero(space.n_interior());
  std::vector<SmallVector> vals;
  vals.reserve(space.n_qp());
  for (const QuadPoint& qp : space.quadrature()) vals.push_back(f(t, qp.x));
  return assemble_qp_load(space, vals);
}

SparseMatrix assemble_tangent(const FESpace& space, std::span<const PackedOperator> moduli) {
  if (static_cast<int>(moduli.size()) != space.n_qp()) {
    throw ContractViolation("assemble_tangent: moduli must be given at every quadrature point");
  }
  std::vector<Eigen::Triplet<double>> trip;
  const int ne = space.dofs_per_element();
  for (int q = 0; q < space.n_qp(); ++q) {
    const QuadPoint& qp = space.quadrature()[q];
    const PackedOperator& b = space.strain_matrix(qp.element);
    const Eigen::MatrixXd ke = qp.weight * (b.transpose() * moduli[q] * b);
    for (int k = 0; k < ne; ++k) {
      const int i = space.interior_index(space.element_dof(qp.element, k));
      if (i < 0) continue;
      for (int l = 0; l < ne; ++l) {
        const int j = space.interior_index(space.element_dof(qp.element, l));
        if (j >= 0) trip.emplace_back(i, j, ke(k, l));
      }
    }
  }
  SparseMatrix k(space.n_interior(), space.n_interior());
  k.setFromTriplets(trip.begin(), trip.end());
  return k;
}

FEField interpolate(const FESpace& space, const AnalyticField& u, double t) {
  const int d = space.dim();
  FEField nodal(space.n_dofs());
  for (int node = 0; node < space.mesh().n_nodes(); ++node) {
    const SmallVector v = u.value(t, space.mesh().node(node));
    for (int c = 0; c < d; ++c) nodal[node * d + c] = v[c];
  }
  return nodal;
}

double l2_norm(const FESpace& space, const FEField& nodal) {
  const auto vals = values_at_qp(space, nodal);
  double s = 0.0;
  for (int q = 0; q < space.n_qp(); ++q) s += space.quadrature()[q].weight * vals[q].squaredNorm();
  return std::sqrt(s);
}

double l2_error(const FESpace& space, const FEField& nodal, const AnalyticField& exact, double t,
                const AnalyticField* lift) {
  const auto vals = values_at_qp(space, nodal);
  double s = 0.0;
  for (int q = 0; q < space.n_qp(); ++q) {
    const QuadPoint& qp = space.quadrature()[q];
    SmallVector diff = vals[q] - exact.value(t, qp.x);
    if (lift) diff += lift->value(t, qp.x);
    s += qp.weight * diff.squaredNorm();
  }
  return std::sqrt(s);
}

}  // namespace strainlimit
