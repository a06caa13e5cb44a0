#pragma once

#include <functional>

#include "strainlimit/symtensor.hpp"

namespace strainlimit {

/// Vector field u(t, x) in R^d with its first spatial and time derivatives.
/// Evaluators must be pure; they may be called from several threads.
struct AnalyticField {
  using ValueFn = std::function<SmallVector(double, const SmallVector&)>;
  using GradFn = std::function<SmallMatrix(double, const SmallVector&)>;

  int dim = 1;
  ValueFn value;
  ValueFn dt_value;
  ValueFn dtt_value;
  /// grad(t, x)(i, j) = d u_i / d x_j
  GradFn grad;
  GradFn dt_grad;
  /// Number of continuous time derivatives the data guarantee.
  int time_smoothness = 2;

  static AnalyticField zero(int dim);

  /// Time-independent field with value v(x) and gradient g(x).
  static AnalyticField steady(int dim, std::function<SmallVector(const SmallVector&)> v,
                              std::function<SmallMatrix(const SmallVector&)> g);

  /// theta(t) * s(x), with theta supplied together with its first two derivatives.
  static AnalyticField modulated(const AnalyticField& spatial, std::function<double(double)> theta,
                                 std::function<double(double)> dtheta, std::function<double(double)> ddtheta);

  /// a + b (same dimension).
  static AnalyticField sum(const AnalyticField& a, const AnalyticField& b);
};

/// Forcing term f(t, x); an empty function means f = 0.
using ForcingFn = std::function<SmallVector(double, const SmallVector&)>;

/// eps(u)(t, x)
SymTensor strain_of(const AnalyticField& u, double t, const SmallVector& x);
/// d/dt eps(u)(t, x)
SymTensor strain_rate_of(const AnalyticField& u, double t, const SmallVector& x);
/// alpha eps(u) + beta d/dt eps(u) at (t, x).
SymTensor strain_expression(const AnalyticField& u, double alpha, double beta, double t, const SmallVector& x);

}  // namespace strainlimit
