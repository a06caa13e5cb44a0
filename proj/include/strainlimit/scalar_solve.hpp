#pragma once

#include <cmath>
#include <string>

#include "strainlimit/errors.hpp"

namespace strainlimit {

/**
 * Solves g(x) = target for a nondecreasing g on the bracket [lo, hi] with
 * g(lo) <= target <= g(hi). Newton steps are taken from `guess`; any step that
 * leaves the current bracket is replaced by bisection, so the iteration always
 * converges. Stops when |g(x) - target| <= abs_tol or the bracket has shrunk to
 * rounding level.
 */
template <typename F, typename DF>
double solve_monotone(F&& g, DF&& dg, double target, double lo, double hi, double guess, double abs_tol,
                      int max_iter = 100) {
  double x = (guess > lo && guess < hi) ? guess : 0.5 * (lo + hi);
  for (int it = 0; it < max_iter; ++it) {
    const double r = g(x) - target;
    if (std::abs(r) <= abs_tol) return x;
    if (r < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    if (hi - lo <= 4.0 * 2.220446049250313e-16 * std::max(1.0, std::abs(x))) return x;
    const double d = dg(x);
    double next = x - r / d;
    if (!std::isfinite(next) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  throw NonConvergence("solve_monotone: no convergence after " + std::to_string(max_iter) +
                       " iterations (target " + std::to_string(target) + ")");
}

}  // namespace strainlimit
