#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "strainlimit/dynamics.hpp"

namespace strainlimit {

/// Result of a parameter study: one value per axis sample, plus a fitted order.
struct ConvergenceReport {
  /// "h", "dt", "n" or "delta".
  std::string axis;
  std::vector<double> axis_values;
  std::vector<double> values;
  /// Least-squares slope of log(value) against log(axis_value).
  std::optional<double> fitted_order;

  // regularization_sweep
  std::vector<double> max_in_time;
  bool cauchy = false;

  // stability_study
  double growth_constant = 0.0;
  bool delta_independent = false;
  bool bounded = false;
};

/// Slope of the least-squares line through (log x_i, log y_i). Needs >= 2
/// points with positive coordinates; throws ContractViolation otherwise.
double fit_order(std::span<const double> x, std::span<const double> y);

/**
 * Runs the scenario once per n (regulariser index replaced) and reports
 * diff_k = ||u_{n_{k+1}} - u_{n_k}||_{L2} at t_end against axis value n_{k+1},
 * with max over recorded times in `max_in_time`. `cauchy` holds when the diffs
 * strictly decrease. The fitted order is the slope against 1 / n.
 * Requires n_list strictly increasing with at least 3 entries.
 */
ConvergenceReport regularization_sweep(const Scenario& scenario, const FESpace& space, const SolverConfig& config,
                                       std::span<const int> n_list);

enum class RefinementAxis { Space, Time };

/**
 * Space: `levels` are cell counts per direction, each run uses config.dt and
 * the error is ||u_h(t_end) - u_exact(t_end)||_{L2}; axis value h.
 * Time: `levels` are time steps on the scenario's own mesh; the error is
 * measured against a reference run with step min(levels) / 4; axis value dt.
 * Requires a manufactured scenario and at least 3 strictly monotone levels.
 */
ConvergenceReport refinement_study(const Scenario& scenario, const SolverConfig& config, RefinementAxis axis,
                                   std::span<const double> levels);

/**
 * Perturbs V(0) by delta r, r a random unit vector drawn from `seed`, and
 * reports growth factors (||dU(t_end)|| + ||dV(t_end)||) / delta in the
 * Euclidean coefficient norm. `growth_constant` is the C with C e^{C t_end}
 * equal to the largest factor; `delta_independent` holds when all factors lie
 * within 10% of each other. Requires at least 3 positive deltas.
 */
ConvergenceReport stability_study(const Scenario& scenario, const FESpace& space, const SolverConfig& config,
                                  std::span<const double> deltas, std::uint64_t seed = 0);

}  // namespace strainlimit
