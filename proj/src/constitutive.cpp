#include "strainlimit/constitutive.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "strainlimit/errors.hpp"
#include "strainlimit/scalar_solve.hpp"

namespace strainlimit {
namespace {

constexpr double kSupercriticalGuard = 1e-12;

void check_finite(const SymTensor& t, const char* where) {
  for (double c : t.packed()) {
    if (!std::isfinite(c)) throw InvalidInput(std::string(where) + ": non-finite component");
  }
}

PackedOperator identity_op(int dim) {
  const int m = packed_size(dim);
  return PackedOperator::Identity(m, m);
}

// Upper end of a root bracket for g(r) = e, with g(0) = 0 <= e.
template <typename G>
double grow_bracket(G&& g, double e) {
  double hi = std::max(1.0, e);
  for (int k = 0; k < 2100 && g(hi) < e; ++k) hi *= 2.0;
  if (g(hi) < e) throw NonConvergence("radial solve: could not bracket the root");
  return hi;
}

// r >= 0 with model.profile(r) = e.
double radial_root(const ConstitutiveModel& model, double e, std::optional<double> hint, double abs_tol) {
  if (e == 0.0) return 0.0;
  auto g = [&](double r) { return model.profile(r); };
  auto dg = [&](double r) { return model.profile_derivative(r); };
  double hi = 0.0;
  if (model.reg_n) {
    const double n = *model.reg_n;
    // g(r) >= reg(r) gives a closed-form upper bracket
    hi = model.reg_kind == RegularizerKind::LinearTikhonov ? n * e
                                                           : std::pow(n * e, 1.0 / (model.reg_exponent - 1.0));
    if (g(hi) < e) hi = grow_bracket(g, e);  // rounding at the bracket edge
  } else {
    hi = grow_bracket(g, e);
  }
  double guess = 0.0;
  if (hint && *hint > 0.0) {
    guess = *hint;
  } else {
    const double s0 = model.profile_secant(0.0);
    guess = (std::isfinite(s0) && s0 > 0.0) ? e / s0 : 0.0;
  }
  return solve_monotone(g, dg, e, 0.0, hi, guess, abs_tol);
}

}  // namespace

void ConstitutiveModel::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidInput("alpha must be > 0");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidInput("beta must be > 0");
  if (reg_n && *reg_n < 1) throw InvalidInput("reg_n must be >= 1");
  if (reg_kind == RegularizerKind::PowerTikhonov && !(reg_exponent >= 2.0)) {
    throw InvalidInput("power Tikhonov regulariser requires p >= 2");
  }
}

ConstitutiveModel ConstitutiveModel::with_reg_n(std::optional<int> n) const {
  ConstitutiveModel m = *this;
  m.reg_n = n;
  return m;
}

double ConstitutiveModel::profile(double r) const {
  double g = potential.derivative(r);
  if (reg_n) {
    const double inv_n = 1.0 / *reg_n;
    g += reg_kind == RegularizerKind::LinearTikhonov ? inv_n * r : inv_n * std::pow(r, reg_exponent - 1.0);
  }
  return g;
}

double ConstitutiveModel::profile_derivative(double r) const {
  double d = potential.second_derivative(r);
  if (reg_n) {
    const double inv_n = 1.0 / *reg_n;
    if (reg_kind == RegularizerKind::LinearTikhonov || reg_exponent == 2.0) {
      d += inv_n;
    } else if (r > 0.0) {
      d += inv_n * (reg_exponent - 1.0) * std::pow(r, reg_exponent - 2.0);
    }
  }
  return d;
}

double ConstitutiveModel::profile_secant(double r) const {
  double s = potential.secant(r);
  if (reg_n) {
    const double inv_n = 1.0 / *reg_n;
    if (reg_kind == RegularizerKind::LinearTikhonov || reg_exponent == 2.0) {
      s += inv_n;
    } else if (r > 0.0) {
      s += inv_n * std::pow(r, reg_exponent - 2.0);
    }
  }
  return s;
}

double ConstitutiveModel::potential_value(double r) const {
  double v = potential.value(r);
  if (reg_n) {
    const double inv_n = 1.0 / *reg_n;
    v += reg_kind == RegularizerKind::LinearTikhonov ? 0.5 * inv_n * r * r
                                                     : inv_n * std::pow(r, reg_exponent) / reg_exponent;
  }
  return v;
}

double ConstitutiveModel::limit() const { return reg_n ? kUnbounded : potential.limit(); }

SymTensor g_apply(const ConstitutiveModel& model, const SymTensor& t) {
  check_finite(t, "g_apply");
  const double r = norm(t);
  if (r == 0.0) return SymTensor::zero(t.dim());
  return t * model.profile_secant(r);
}

namespace {

// a I + b n n^T with n = T / r, filled entrywise so the result is exactly symmetric.
PackedOperator radial_operator(const SymTensor& t, double r, double a, double b) {
  const int m = t.size();
  PackedOperator op = a * identity_op(t.dim());
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double v = b * ((t[i] / r) * (t[j] / r));
      op(i, j) += v;
      if (i != j) op(j, i) += v;
    }
  }
  return op;
}

}  // namespace

PackedOperator g_jacobian(const ConstitutiveModel& model, const SymTensor& t) {
  check_finite(t, "g_jacobian");
  const double r = norm(t);
  if (r == 0.0) {
    const double d0 = model.profile_derivative(0.0);
    if (!std::isfinite(d0)) throw InvalidInput("g_jacobian: unbounded at T = 0 for this potential");
    return d0 * identity_op(t.dim());
  }
  const double s = model.profile_secant(r);
  const double d = model.profile_derivative(r);
  return radial_operator(t, r, s, d - s);
}

PackedOperator tangent_compliance(const ConstitutiveModel& model, const SymTensor& t) {
  double r = norm(t);
  if (r == 0.0) {
    const double d0 = model.profile_derivative(0.0);
    if (d0 > 0.0) return (1.0 / d0) * identity_op(t.dim());  // d0 = inf gives 0
    // Degenerate at the origin (phi''(0) = 0 with no linear regulariser):
    // use the tangent at a tiny radius instead.
    r = 1e-8;
    const double dr = model.profile_derivative(r);
    return (1.0 / dr) * identity_op(t.dim());
  }
  const double s = model.profile_secant(r);
  const double d = model.profile_derivative(r);
  return radial_operator(t, r, 1.0 / s, 1.0 / d - 1.0 / s);
}

bool jacobian_norm_bound_check(const ConstitutiveModel& model, const SymTensor& t) {
  if (model.potential.kind() != PotentialKind::Prototype || !model.reg_n ||
      model.reg_kind != RegularizerKind::LinearTikhonov) {
    throw ContractViolation("jacobian_norm_bound_check: needs a prototype potential with linear regulariser");
  }
  constexpr double kC = 3.0;
  const PackedOperator a = g_jacobian(model, t);
  Eigen::SelfAdjointEigenSolver<PackedOperator> eig(a, Eigen::EigenvaluesOnly);
  const double op_norm = eig.eigenvalues().cwiseAbs().maxCoeff();
  return op_norm <= kC * (1.0 / *model.reg_n + 1.0 / (1.0 + norm(t)));
}

SymTensor invert(const ConstitutiveModel& model, const SymTensor& e, std::optional<double> radius_hint) {
  check_finite(e, "invert");
  const double emag = norm(e);
  if (emag == 0.0) return SymTensor::zero(e.dim());
  if (!model.reg_n) {
    const double limit = model.potential.limit();
    if (std::isfinite(limit) && emag >= limit * (1.0 - kSupercriticalGuard)) {
      throw NoRegularizerAndSupercritical("invert: |E| = " + std::to_string(emag) +
                                          " reaches the strain limit L = " + std::to_string(limit) +
                                          " and no regulariser is set");
    }
  }
  const double r = radial_root(model, emag, radius_hint, 0.25 * kInversionTolerance * (1.0 + emag));
  return e * (r / emag);
}

SymTensor invert_tensor_newton(const ConstitutiveModel& model, const SymTensor& e) {
  check_finite(e, "invert_tensor_newton");
  const double emag = norm(e);
  if (emag == 0.0) return SymTensor::zero(e.dim());
  if (!model.reg_n && emag >= model.potential.limit() * (1.0 - kSupercriticalGuard)) {
    throw NoRegularizerAndSupercritical("invert_tensor_newton: |E| reaches the strain limit");
  }
  const double tol = 0.25 * kInversionTolerance * (1.0 + emag);
  SymTensor t = e;
  double res = norm(g_apply(model, t) - e);
  for (int it = 0; it < 100; ++it) {
    const SymTensor r = g_apply(model, t) - e;
    const PackedVector step = g_jacobian(model, t).ldlt().solve(r.to_vector());
    const SymTensor delta = SymTensor::from_vector(e.dim(), step);
    if (res <= tol) {
      // one more full step: where the Jacobian degenerates a small residual
      // still allows a sizeable error in T
      const SymTensor polished = t - delta;
      return norm(g_apply(model, polished) - e) <= tol ? polished : t;
    }
    // backtracking by halving the Newton step
    double lambda = 1.0;
    SymTensor trial = t - delta * lambda;
    double trial_res = norm(g_apply(model, trial) - e);
    while (!(trial_res < (1.0 - 1e-4 * lambda) * res) && lambda > 1e-12) {
      lambda *= 0.5;
      trial = t - delta * lambda;
      trial_res = norm(g_apply(model, trial) - e);
    }
    if (!(trial_res < res)) {
      // no decrease is possible at rounding level
      if (res <= 1e3 * tol) return t;
      break;
    }
    t = trial;
    res = trial_res;
  }
  if (res <= tol) return t;
  throw NonConvergence("invert_tensor_newton: residual " + std::to_string(res) + " after 100 iterations");
}

double phi_star(const ScalarPotential& potential, double e) {
  if (!(e >= 0.0)) throw InvalidInput("phi_star: argument must be >= 0");
  if (e == 0.0) return 0.0;
  if (e >= potential.limit()) return kUnbounded;
  ConstitutiveModel m;
  m.potential = potential;
  const double r = radial_root(m, e, std::nullopt, 0.25 * kInversionTolerance * (1.0 + e));
  return e * r - potential.value(r);
}

double conjugate_energy(const ConstitutiveModel& model, double e) {
  if (!model.reg_n) return phi_star(model.potential, e);
  if (!(e >= 0.0)) throw InvalidInput("conjugate_energy: argument must be >= 0");
  if (e == 0.0) return 0.0;
  const double r = radial_root(model, e, std::nullopt, 0.25 * kInversionTolerance * (1.0 + e));
  return e * r - model.potential_value(r);
}

double fenchel_residual(const ConstitutiveModel& model, const SymTensor& t) {
  check_finite(t, "fenchel_residual");
  const double r = norm(t);
  const double g = model.profile(r);
  const double conj = conjugate_energy(model, g);
  if (is_unbounded(conj)) throw ContractViolation("fenchel_residual: |G(T)| is not below the strain limit");
  return std::abs(model.potential_value(r) + conj - g * r);
}

double dissipation_pair(const ConstitutiveModel& model, const SymTensor& t, const SymTensor& t0) {
  return dot(t - t0, g_apply(model, t) - g_apply(model, t0));
}

}  // namespace strainlimit
