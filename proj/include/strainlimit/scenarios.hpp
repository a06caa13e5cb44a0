#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "strainlimit/analytic_field.hpp"
#include "strainlimit/constitutive.hpp"
#include "strainlimit/fespace.hpp"

namespace strainlimit {

/// Interval [a, b] with `cells` elements, or rectangle [a, b] x [c, d] with
/// cells_x x cells_y cells.
struct MeshSpec {
  int dim = 1;
  std::vector<double> domain{0.0, 1.0};
  std::vector<int> cells{64};

  Mesh build() const;
  bool operator==(const MeshSpec&) const = default;
};

/// Problem data: the lift u0 carries initial and boundary values, the
/// Galerkin solution is u0 + sum_j C_j w_j.
struct Scenario {
  std::string name;
  MeshSpec mesh;
  ConstitutiveModel model;
  AnalyticField lift;
  ForcingFn forcing;
  double t_end = 1.0;
  /// Exact solution when the scenario is manufactured.
  std::optional<AnalyticField> exact;
};

/**
 * Lift for boundary data independent of time:
 *   u0(t) = exp(-a t) u_I + (u_I + v0 / a)(1 - exp(-a t)),   a = alpha / beta,
 * so that u0(0) = u_I, d/dt u0(0) = v0 and alpha eps(u0) + beta d/dt eps(u0)
 * is constant in time. `u_initial` and `v0` are read at t = 0.
 */
AnalyticField lift_static_bc(const AnalyticField& u_initial, const AnalyticField& v0, double alpha, double beta);

/**
 * Lift for time-dependent boundary data carried by u_tilde:
 *   u0(t) = u_tilde(t) + (v0 - d/dt u_tilde(0)) (1 - exp(-a t)) / a.
 * Throws InvalidData if v0 differs from d/dt u_tilde(0) by more than 1e-10 at
 * any of the given boundary points.
 */
AnalyticField lift_timedep_bc(const AnalyticField& u_tilde, const AnalyticField& v0, double alpha, double beta,
                              std::span<const SmallVector> boundary_points);

/// Sample points on the boundary nodes of a space's mesh.
std::vector<SmallVector> boundary_points(const FESpace& space);

/// L - max |alpha eps(u0) + beta d/dt eps(u0)| over quadrature points and
/// `time_samples` uniform times in [0, t_end]; kUnbounded when L is infinite.
double safety_margin(const Scenario& scenario, const FESpace& space, int time_samples = 64);

/**
 * Scenario whose exact solution is u_exact: f = d2/dt2 u_exact - div T_exact
 * with T_exact = G_n^-1(alpha eps + beta d/dt eps) and the divergence taken by
 * Richardson-extrapolated central differences. Throws InvalidData when the
 * sampled strain expression of u_exact reaches 0.95 L.
 */
Scenario manufactured(std::string name, const AnalyticField& u_exact, const ConstitutiveModel& model,
                      const MeshSpec& mesh, double t_end, const FESpace& space);

/// Compactly supported bump at rest, scaled so the safety margin equals `margin`.
Scenario gaussian_pluck(const ConstitutiveModel& model, const MeshSpec& mesh, double t_end, double margin = 0.3,
                        double amplitude_scale = 1.0);
/// gaussian_pluck with margin 0.02.
Scenario near_limit(const ConstitutiveModel& model, const MeshSpec& mesh, double t_end,
                    double amplitude_scale = 1.0);
/// Manufactured u = A sin(k x) cos(omega t) (first component; times sin(k y) in 2D).
Scenario standing_wave(const ConstitutiveModel& model, const MeshSpec& mesh, double t_end,
                       double amplitude_scale = 1.0);
/// Manufactured time-independent affine field with constant strain (f = 0).
Scenario linear_ramp(const ConstitutiveModel& model, const MeshSpec& mesh, double t_end,
                     double amplitude_scale = 1.0);

/// Names accepted by make_scenario().
std::vector<std::string> scenario_names();
/// Built-in scenario by name: gaussian-pluck, near-limit, standing-wave,
/// manufactured:standing-wave, manufactured:linear-ramp.
Scenario make_scenario(const std::string& name, const ConstitutiveModel& model, const MeshSpec& mesh, double t_end,
                       double amplitude_scale = 1.0);

}  // namespace strainlimit
