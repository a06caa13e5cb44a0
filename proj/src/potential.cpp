#include "strainlimit/potential.hpp"

#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "strainlimit/errors.hpp"

namespace strainlimit {

ScalarPotential ScalarPotential::prototype(double q) {
  if (!(q >= 1.0) || !std::isfinite(q)) {
    throw InvalidInput("prototype potential: q must be >= 1, got " + std::to_string(q));
  }
  return {PotentialKind::Prototype, q};
}

ScalarPotential ScalarPotential::power_law(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw InvalidInput("power-law potential: p must be > 1, got " + std::to_string(p));
  }
  return {PotentialKind::PowerLaw, p};
}

ScalarPotential ScalarPotential::linear() { return {PotentialKind::Linear, 2.0}; }

double ScalarPotential::secant(double s) const {
  switch (kind_) {
    case PotentialKind::Linear:
      return 1.0;
    case PotentialKind::PowerLaw:
      if (s == 0.0) {
        if (exponent_ < 2.0) return kUnbounded;
        return exponent_ == 2.0 ? 1.0 : 0.0;
      }
      return std::pow(s, exponent_ - 2.0);
    case PotentialKind::Prototype: {
      const double q = exponent_;
      if (q == 1.0) return 1.0 / (1.0 + s);
      if (q == 2.0) return 1.0 / std::sqrt(1.0 + s * s);
      // (1 + s^q)^(-1/q), rearranged for large s so s^q cannot overflow
      if (s <= 1.0) return std::pow(1.0 + std::pow(s, q), -1.0 / q);
      return std::pow(1.0 + std::pow(s, -q), -1.0 / q) / s;
    }
  }
  return 0.0;
}

double ScalarPotential::derivative(double s) const {
  if (s == 0.0) return 0.0;
  if (kind_ == PotentialKind::Prototype && s > 1.0) {
    // composed of monotone steps so rounding keeps phi' nondecreasing near saturation
    const double q = exponent_;
    if (q == 1.0) return 1.0 - 1.0 / (1.0 + s);
    if (q == 2.0) return 1.0 / std::sqrt(1.0 + 1.0 / (s * s));
    return std::pow(1.0 + std::pow(s, -q), -1.0 / q);
  }
  return s * secant(s);
}

double ScalarPotential::second_derivative(double s) const {
  switch (kind_) {
    case PotentialKind::Linear:
      return 1.0;
    case PotentialKind::PowerLaw:
      if (s == 0.0) return secant(0.0);  // p < 2: inf, p = 2: 1, p > 2: 0
      return (exponent_ - 1.0) * std::pow(s, exponent_ - 2.0);
    case PotentialKind::Prototype:
      // (1 + s^q)^(-1-1/q) = secant^(q+1)
      return std::pow(secant(s), exponent_ + 1.0);
  }
  return 0.0;
}

double ScalarPotential::value(double s) const {
  if (s == 0.0) return 0.0;
  switch (kind_) {
    case PotentialKind::Linear:
      return 0.5 * s * s;
    case PotentialKind::PowerLaw:
      return std::pow(s, exponent_) / exponent_;
    case PotentialKind::Prototype: {
      const double q = exponent_;
      if (q == 1.0) return s - std::log1p(s);
      if (q == 2.0) return s * s / (1.0 + std::sqrt(1.0 + s * s));
      auto integrand = [this](double t) { return derivative(t); };
      // phi' is smooth away from 0 and varies on a logarithmic scale, so
      // integrate over dyadic pieces [2^k, 2^(k+1)] with a short first piece.
      using boost::math::quadrature::gauss_kronrod;
      double a = 0.0;
      double b = std::min(s, 1.0 / 64.0);
      double v = 0.0;
      while (true) {
        v += gauss_kronrod<double, 31>::integrate(integrand, a, b, 2, 1e-12);
        if (b >= s) break;
        a = b;
        b = std::min(s, 2.0 * b);
      }
      return v;
    }
  }
  return 0.0;
}

double ScalarPotential::limit() const {
  return kind_ == PotentialKind::Prototype ? 1.0 : kUnbounded;
}

double limit_L(const ScalarPotential& potential) { return potential.limit(); }

}  // namespace strainlimit
