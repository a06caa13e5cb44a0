#pragma once

namespace strainlimit {

enum class PotentialKind { Prototype, PowerLaw, Linear };

/**
 * Radial potential phi : [0, inf) -> [0, inf) generating G(T) = phi'(|T|) T / |T|.
 *
 *  - Prototype(q):  phi'(s) = s / (1 + s^q)^(1/q), strain limit L = 1.
 *  - PowerLaw(p):   phi(s) = s^p / p, unbounded.
 *  - Linear:        phi(s) = s^2 / 2, i.e. G(T) = T.
 *
 * All kinds satisfy phi(0) = phi'(0) = 0.
 */
class ScalarPotential {
 public:
  static ScalarPotential prototype(double q);
  static ScalarPotential power_law(double p);
  static ScalarPotential linear();

  PotentialKind kind() const { return kind_; }
  /// q for Prototype, p for PowerLaw, 2 for Linear.
  double exponent() const { return exponent_; }

  double value(double s) const;
  double derivative(double s) const;
  /// phi''(s); +inf at s = 0 for PowerLaw with p < 2.
  double second_derivative(double s) const;
  /// phi'(s) / s, continuously extended by phi''(0) at s = 0.
  double secant(double s) const;
  /// lim_{s -> inf} phi'(s); kUnbounded for PowerLaw and Linear.
  double limit() const;

 private:
  ScalarPotential(PotentialKind kind, double exponent) : kind_(kind), exponent_(exponent) {}

  PotentialKind kind_;
  double exponent_;
};

/// Strain limit L of a potential (kUnbounded when the potential is not limiting).
double limit_L(const ScalarPotential& potential);

}  // namespace strainlimit
