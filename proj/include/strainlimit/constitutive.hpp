#pragma once

#include <optional>

#include "strainlimit/potential.hpp"
#include "strainlimit/symtensor.hpp"

namespace strainlimit {

enum class RegularizerKind {
  /// G_n(T) = G(T) + T / n
  LinearTikhonov,
  /// G_n(T) = G(T) + |T|^(p-2) T / n, restricted to p >= 2
  PowerTikhonov,
};

/**
 * Implicit constitutive law  alpha eps + beta d/dt eps = G_n(T)  with radial G
 * generated by a scalar potential and an optional strictly monotone
 * regulariser of index n.
 *
 * Every map below is radial: G_n(T) = g(|T|) T / |T| with the profile
 * g(r) = phi'(r) + reg(r). Scalar methods expose that profile.
 */
struct ConstitutiveModel {
  ScalarPotential potential = ScalarPotential::prototype(2.0);
  double alpha = 1.0;
  double beta = 1.0;
  std::optional<int> reg_n;
  RegularizerKind reg_kind = RegularizerKind::LinearTikhonov;
  /// Exponent p of the PowerTikhonov regulariser.
  double reg_exponent = 2.0;

  /// Throws InvalidInput if alpha, beta, n or the regulariser exponent are out of range.
  void validate() const;

  bool regularized() const { return reg_n.has_value(); }
  ConstitutiveModel with_reg_n(std::optional<int> n) const;
  ConstitutiveModel without_regularizer() const { return with_reg_n(std::nullopt); }

  /// g(r) = |G_n(T)| for |T| = r.
  double profile(double r) const;
  double profile_derivative(double r) const;
  /// g(r) / r, extended continuously at r = 0.
  double profile_secant(double r) const;
  /// Potential of G_n: phi(r) + regulariser primitive.
  double potential_value(double r) const;
  /// sup_T |G_n(T)|: L without a regulariser, kUnbounded otherwise.
  double limit() const;
};

/// G_n(T). Returns 0 at T = 0.
SymTensor g_apply(const ConstitutiveModel& model, const SymTensor& t);

/**
 * Jacobian dG_n/dT as a symmetric matrix on packed components:
 *   (n^-1 + phi'(r)/r) I + (phi''(r) - phi'(r)/r) That (x) That,   r = |T|,
 * and (n^-1 + phi''(0)) I at T = 0. Throws InvalidInput when the limit at
 * T = 0 is unbounded (power law with p < 2).
 */
PackedOperator g_jacobian(const ConstitutiveModel& model, const SymTensor& t);

/// Inverse of g_jacobian, i.e. dT/dE at E = G_n(T). Finite everywhere.
PackedOperator tangent_compliance(const ConstitutiveModel& model, const SymTensor& t);

/// Operator norm of the Jacobian against C (n^-1 + 1/(1+|T|)) with C = 3.
/// Requires a prototype potential with a regulariser.
bool jacobian_norm_bound_check(const ConstitutiveModel& model, const SymTensor& t);

/// Relative tolerance of invert(): |G_n(T) - E| <= kInversionTolerance (1 + |E|).
inline constexpr double kInversionTolerance = 1e-12;

/**
 * Solves G_n(T) = E by the radial reduction T = r E / |E|, where r solves the
 * scalar equation g(r) = |E| by safeguarded Newton. `radius_hint` warm starts
 * the scalar iteration (typically |T| from the previous evaluation).
 *
 * Throws NoRegularizerAndSupercritical when there is no regulariser and
 * |E| >= L (1 - 1e-12).
 */
SymTensor invert(const ConstitutiveModel& model, const SymTensor& e,
                 std::optional<double> radius_hint = std::nullopt);

/// Same contract as invert() but by Newton iteration on the full tensor
/// equation with a backtracking line search. Independent of the radial route.
SymTensor invert_tensor_newton(const ConstitutiveModel& model, const SymTensor& e);

/// phi*(e) = sup_{r >= 0} (e r - phi(r)); kUnbounded for e >= L.
double phi_star(const ScalarPotential& potential, double e);

/// Conjugate of the model potential (including the regulariser); kUnbounded for e >= limit().
double conjugate_energy(const ConstitutiveModel& model, double e);

/// | F(T) + F*(G_n(T)) - G_n(T) . T | for the model potential F.
double fenchel_residual(const ConstitutiveModel& model, const SymTensor& t);

/// (T - T0) . (G_n(T) - G_n(T0)); nonnegative by monotonicity.
double dissipation_pair(const ConstitutiveModel& model, const SymTensor& t, const SymTensor& t0);

}  // namespace strainlimit
