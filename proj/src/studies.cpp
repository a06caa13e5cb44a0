#include "strainlimit/studies.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "strainlimit/errors.hpp"
#include "strainlimit/scalar_solve.hpp"

namespace strainlimit {

double fit_order(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ContractViolation("fit_order: need at least two (x, y) pairs");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw ContractViolation("fit_order: values must be positive");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw ContractViolation("fit_order: axis values are all equal");
  return (n * sxy - sx * sy) / den;
}

namespace {

bool strictly_monotone(std::span<const double> v) {
  if (v.size() < 2) return true;
  const bool up = v[1] > v[0];
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (up ? !(v[i] > v[i - 1]) : !(v[i] < v[i - 1])) return false;
  }
  return true;
}

std::optional<double> try_fit(std::span<const double> x, std::span<const double> y) {
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(y[i] > 0.0) || !(x[i] > 0.0)) return std::nullopt;
  }
  return fit_order(x, y);
}

}  // namespace

ConvergenceReport regularization_sweep(const Scenario& scenario, const FESpace& space, const SolverConfig& config,
                                       std::span<const int> n_list) {
  if (n_list.size() < 3) throw ContractViolation("regularization_sweep: need at least 3 values of n");
  for (std::size_t k = 0; k < n_list.size(); ++k) {
    if (n_list[k] < 1 || (k > 0 && n_list[k] <= n_list[k - 1])) {
      throw ContractViolation("regularization_sweep: n values must be >= 1 and strictly increasing");
    }
  }
  SolverConfig cfg = config;
  cfg.record_states = true;

  std::vector<Trajectory> runs;
  for (int n : n_list) {
    Scenario s = scenario;
    s.model = scenario.model.with_reg_n(n);
    try {
      runs.push_back(run(s, space, cfg));
    } catch (const std::exception& err) {
      throw StepFailure("regularization_sweep: run with n = " + std::to_string(n) + " failed: " + err.what());
    }
  }

  ConvergenceReport rep;
  rep.axis = "n";
  std::vector<double> inv_n;
  for (std::size_t k = 0; k + 1 < runs.size(); ++k) {
    const Trajectory& a = runs[k];
    const Trajectory& b = runs[k + 1];
    double worst = 0.0;
    for (std::size_t i = 0; i < a.U.size(); ++i) {
      worst = std::max(worst, l2_norm(space, space.embed(b.U[i] - a.U[i])));
    }
    rep.axis_values.push_back(n_list[k + 1]);
    rep.values.push_back(l2_norm(space, space.embed(b.U.back() - a.U.back())));
    rep.max_in_time.push_back(worst);
    inv_n.push_back(1.0 / n_list[k + 1]);
  }
  rep.cauchy = true;
  for (std::size_t k = 1; k < rep.values.size(); ++k) rep.cauchy = rep.cauchy && rep.values[k] < rep.values[k - 1];
  rep.fitted_order = try_fit(inv_n, rep.values);
  return rep;
}

ConvergenceReport refinement_study(const Scenario& scenario, const SolverConfig& config, RefinementAxis axis,
                                   std::span<const double> levels) {
  if (!scenario.exact) throw ContractViolation("refinement_study: scenario has no exact solution");
  if (levels.size() < 3) throw ContractViolation("refinement_study: need at least 3 levels");
  if (!strictly_monotone(levels)) throw ContractViolation("refinement_study: levels must be strictly monotone");

  ConvergenceReport rep;
  if (axis == RefinementAxis::Space) {
    rep.axis = "h";
    for (double level : levels) {
      const int cells = static_cast<int>(std::lround(level));
      if (cells < 1 || std::abs(level - cells) > 1e-9) {
        throw ContractViolation("refinement_study: spatial levels must be positive cell counts");
      }
      Scenario s = scenario;
      for (int& c : s.mesh.cells) c = cells;
      const FESpace space(s.mesh.build());
      const Trajectory traj = run(s, space, config);
      rep.axis_values.push_back((s.mesh.domain[1] - s.mesh.domain[0]) / cells);
      rep.values.push_back(
          l2_error(space, space.embed(traj.final_state.U), *s.exact, traj.final_state.t, &s.lift));
    }
  } else {
    rep.axis = "dt";
    const FESpace space(scenario.mesh.build());
    SolverConfig ref_cfg = config;
    ref_cfg.dt = *std::min_element(levels.begin(), levels.end()) / 4.0;
    const Eigen::VectorXd ref = run(scenario, space, ref_cfg).final_state.U;
    for (double dt : levels) {
      if (!(dt > 0.0)) throw ContractViolation("refinement_study: time steps must be positive");
      SolverConfig cfg = config;
      cfg.dt = dt;
      const Trajectory traj = run(scenario, space, cfg);
      rep.axis_values.push_back(dt);
      rep.values.push_back(l2_norm(space, space.embed(traj.final_state.U - ref)));
    }
  }
  rep.fitted_order = try_fit(rep.axis_values, rep.values);
  return rep;
}

ConvergenceReport stability_study(const Scenario& scenario, const FESpace& space, const SolverConfig& config,
                                  std::span<const double> deltas, std::uint64_t seed) {
  if (deltas.size() < 3) throw ContractViolation("stability_study: need at least 3 perturbation sizes");
  for (double d : deltas) {
    if (!(d > 0.0)) throw ContractViolation("stability_study: perturbation sizes must be positive");
  }
  const Trajectory base = run(scenario, space, config);
  const GalerkinSystem system(scenario, space);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXd dir(system.size());
  for (Eigen::Index i = 0; i < dir.size(); ++i) dir[i] = normal(rng);
  if (dir.size() > 0) dir /= dir.norm();

  ConvergenceReport rep;
  rep.axis = "delta";
  for (double delta : deltas) {
    State init = system.initial_state();
    init.V = delta * dir;
    const Trajectory pert = run(scenario, space, config, {}, init);
    const double diff =
        (pert.final_state.U - base.final_state.U).norm() + (pert.final_state.V - base.final_state.V).norm();
    rep.axis_values.push_back(delta);
    rep.values.push_back(diff / delta);
  }
  const auto [lo, hi] = std::minmax_element(rep.values.begin(), rep.values.end());
  rep.delta_independent = *hi <= 1.1 * *lo;

  const double t = config.t_end;
  const double gmax = *hi;
  if (t > 0.0 && gmax > 0.0) {
    // C e^{C t} = gmax, increasing in C >= 0
    double upper = 1.0;
    while (upper * std::exp(upper * t) < gmax) upper *= 2.0;
    rep.growth_constant = solve_monotone([t](double c) { return c * std::exp(c * t); },
                                         [t](double c) { return (1.0 + c * t) * std::exp(c * t); }, gmax, 0.0, upper,
                                         0.5 * upper, 1e-12 * gmax);
  }
  const double c = rep.growth_constant;
  rep.bounded = std::all_of(rep.values.begin(), rep.values.end(),
                            [&](double g) { return g <= c * std::exp(c * t) * (1.0 + 1e-9); });
  rep.fitted_order = try_fit(rep.axis_values, rep.values);
  return rep;
}

}  // namespace strainlimit
