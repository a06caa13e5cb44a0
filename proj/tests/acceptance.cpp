// Acceptance checks: one PASS/FAIL line per criterion, tolerances pinned below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "strainlimit/constitutive.hpp"
#include "strainlimit/energy.hpp"
#include "strainlimit/errors.hpp"
#include "strainlimit/studies.hpp"
#include "strainlimit/verify.hpp"

using namespace strainlimit;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double time_limit;  // seconds
  std::function<Outcome()> check;
};

MeshSpec interval(int cells) {
  MeshSpec m;
  m.cells = {cells};
  return m;
}

ConstitutiveModel prototype(int n) {
  ConstitutiveModel m;
  m.reg_n = n;
  return m;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string list(const std::vector<double>& v) {
  std::ostringstream s;
  s.precision(3);
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? " " : "") << v[i];
  return s.str();
}

Outcome constitutive_suite() {
  PropertyOptions opts;
  opts.samples = 10000;
  const auto results = constitutive_properties(opts);
  long samples = 0;
  int failed = 0;
  std::string first_failure;
  for (const auto& r : results) {
    samples += r.samples;
    if (!r.passed) {
      if (!failed) first_failure = "; first failure: [" + r.group + "] " + r.name + " worst " + fmt("%.3g", r.worst);
      ++failed;
    }
  }
  return {failed == 0, std::to_string(results.size() - failed) + "/" + std::to_string(results.size()) +
                           " properties over " + std::to_string(samples) + " samples" + first_failure};
}

Outcome closed_forms() {
  ConstitutiveModel m;
  const double one[] = {1.0}, e[] = {0.6};
  const double g1 = std::abs(g_apply(m, SymTensor::from_packed(1, one))[0] - 1.0 / std::sqrt(2.0));
  const double ginv = std::abs(invert(m, SymTensor::from_packed(1, e))[0] - 0.75);
  const double conj = std::abs(phi_star(m.potential, 0.6) - 0.2);
  const double worst = std::max({g1, ginv, conj});
  return {worst <= 1e-10, "|G(1) - 1/sqrt2| " + fmt("%.2e", g1) + ", |G^-1(0.6) - 0.75| " + fmt("%.2e", ginv) +
                              ", |phi*(0.6) - 0.2| " + fmt("%.2e", conj) + " (tol 1e-10)"};
}

Outcome lift_identities() {
  const auto results = lift_properties(100);
  bool ok = true;
  double worst_contract = 0.0, worst_identity = 0.0;
  for (const auto& r : results) {
    ok = ok && r.passed;
    // bounds are pinned inside the suite: 1e-12 for contracts, 1e-10 for the strain identities
    if (r.bound == 1e-10) {
      worst_identity = std::max(worst_identity, r.worst);
    } else {
      worst_contract = std::max(worst_contract, r.worst);
    }
  }
  return {ok && worst_contract <= 1e-12 && worst_identity <= 1e-10,
          std::to_string(results.size()) + " checks at 100 points, d = 1, 2; contracts " + fmt("%.2e", worst_contract) +
              " (tol 1e-12), identities " + fmt("%.2e", worst_identity) + " (tol 1e-10)"};
}

Outcome manufactured_convergence() {
  const double t_end = 0.5;
  const Scenario wave = standing_wave(prototype(16), interval(256), t_end);
  SolverConfig cfg;
  cfg.t_end = t_end;
  cfg.dt = 1e-4;
  const double cells[] = {32, 64, 128, 256};
  const ConvergenceReport sp = refinement_study(wave, cfg, RefinementAxis::Space, cells);
  const double dts[] = {4e-3, 2e-3, 1e-3, 5e-4};
  const ConvergenceReport tm = refinement_study(wave, cfg, RefinementAxis::Time, dts);
  const double ps = sp.fitted_order.value_or(0.0), pt = tm.fitted_order.value_or(0.0);
  return {std::abs(ps - 2.0) <= 0.2 && std::abs(pt - 2.0) <= 0.2,
          "spatial order " + fmt("%.3f", ps) + " (errors " + list(sp.values) + "), temporal order " + fmt("%.3f", pt) +
              " (errors " + list(tm.values) + "), target 2 +- 0.2"};
}

struct EnergyRun {
  double residual;
  double increase;
};

EnergyRun pluck_energy(double dt) {
  const MeshSpec mesh = interval(64);
  const FESpace space(mesh.build());
  const Scenario s = gaussian_pluck(prototype(64), mesh, 1.0);
  SolverConfig cfg;
  cfg.dt = dt;
  cfg.t_end = 1.0;
  EnergyRecorder rec;
  const Observer obs[] = {[&](const StepView& v) { rec(v); }};
  run(s, space, cfg, obs);
  return {energy_balance_residual(rec.rows()), max_energy_increase(rec.rows())};
}

Outcome energy_law() {
  const EnergyRun coarse = pluck_energy(2e-3), fine = pluck_energy(1e-3);
  const double ratio = coarse.residual / fine.residual;
  const bool decay = coarse.increase <= coarse.residual && fine.increase <= fine.residual;
  return {decay && ratio >= 3.4 && ratio <= 4.6,
          "residuals " + fmt("%.3e", coarse.residual) + " / " + fmt("%.3e", fine.residual) + ", ratio " +
              fmt("%.3f", ratio) + " (target [3.4, 4.6]); largest KE+EE increase " + fmt("%.2e", coarse.increase) +
              " / " + fmt("%.2e", fine.increase)};
}

Outcome strain_limit() {
  const int n = 256;
  const MeshSpec mesh = interval(64);
  const FESpace space(mesh.build());
  const Scenario s = near_limit(prototype(n), mesh, 1.0);
  SolverConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 1.0;
  StrainMonitor monitor;
  const Observer obs[] = {[&](const StepView& v) { monitor(v); }};
  run(s, space, cfg, obs);
  double worst_slack = -kUnbounded, peak = 0.0;
  for (const MonitorRecord& r : monitor.rows()) {
    worst_slack = std::max(worst_slack, r.max_strain_expr - (1.0 + r.max_stress / n + 1e-10));
    peak = std::max(peak, r.max_strain_expr);
  }
  return {worst_slack <= 0.0, std::to_string(monitor.rows().size()) + " steps, peak |alpha eps + beta eps_t| " +
                                  fmt("%.6f", peak) + ", worst excess over 1 + max|T|/n + 1e-10: " +
                                  fmt("%.3e", worst_slack)};
}

Outcome regularization() {
  const MeshSpec mesh = interval(64);
  const FESpace space(mesh.build());
  const Scenario s = gaussian_pluck(prototype(16), mesh, 0.5);
  SolverConfig cfg;
  cfg.dt = 2e-3;
  cfg.t_end = 0.5;
  const int ns[] = {4, 16, 64, 256};
  const ConvergenceReport r = regularization_sweep(s, space, cfg, ns);
  const bool quarter = r.values.back() <= 0.25 * r.values.front();
  return {r.cauchy && quarter, "L2 diffs " + list(r.values) + (r.cauchy ? " strictly decreasing" : " NOT decreasing") +
                                   ", last/first " + fmt("%.3f", r.values.back() / r.values.front()) + " (max 0.25)"};
}

Outcome stability() {
  const MeshSpec mesh = interval(64);
  const FESpace space(mesh.build());
  const Scenario s = gaussian_pluck(prototype(16), mesh, 0.5);
  SolverConfig cfg;
  cfg.dt = 2e-3;
  cfg.t_end = 0.5;
  const double deltas[] = {1e-3, 1e-5, 1e-7};
  const ConvergenceReport r = stability_study(s, space, cfg, deltas, 1);
  double lo = kUnbounded, hi = 0.0;
  for (double f : r.values) lo = std::min(lo, f), hi = std::max(hi, f);

  const GalerkinSystem sys(s, space);
  State zero = sys.initial_state();
  zero.V += 0.0 * Eigen::VectorXd::Ones(zero.V.size());
  const State a = run(s, space, cfg).final_state;
  const State b = run(s, space, cfg, {}, zero).final_state;
  const bool identical = a.U == b.U && a.V == b.V;
  return {r.delta_independent && r.bounded && identical,
          "growth factors " + list(r.values) + ", spread " + fmt("%.2e", hi / lo - 1.0) + " (max 0.1), C = " +
              fmt("%.3f", r.growth_constant) + "; zero perturbation " + (identical ? "bit-identical" : "DIFFERS")};
}

Outcome integrating_factor() {
  const MeshSpec mesh = interval(64);
  const FESpace space(mesh.build());
  const Scenario wave = standing_wave(prototype(16), mesh, 0.5);
  SolverConfig cfg;
  cfg.t_end = 0.5;
  cfg.record_history = true;
  std::vector<double> res, orders;
  for (double dt : {4e-3, 2e-3, 1e-3}) {
    cfg.dt = dt;
    res.push_back(strain_history_residual(run(wave, space, cfg)));
  }
  bool ok = true;
  for (std::size_t k = 1; k < res.size(); ++k) {
    orders.push_back(std::log2(res[k - 1] / res[k]));
    ok = ok && std::abs(orders.back() - 2.0) <= 0.3;
  }
  cfg.dt = 1e-2;
  const double ramp = strain_history_residual(run(linear_ramp(prototype(16), mesh, 0.5), space, cfg));
  return {ok && ramp <= 1e-9, "residuals " + list(res) + ", orders " + list(orders) +
                                  " (target 2 +- 0.3); constant-strain case " + fmt("%.2e", ramp) + " (tol 1e-9)"};
}

Outcome smoke_2d() {
  MeshSpec mesh;
  mesh.dim = 2;
  mesh.domain = {0.0, 1.0, 0.0, 1.0};
  mesh.cells = {16, 16};
  const FESpace space(mesh.build());
  const int n = 16;
  const Scenario s = gaussian_pluck(prototype(n), mesh, 0.5);
  SolverConfig cfg;
  cfg.dt = 2.5e-3;
  cfg.t_end = 0.5;
  EnergyRecorder energy;
  StrainMonitor monitor;
  const Observer obs[] = {[&](const StepView& v) { energy(v); }, [&](const StepView& v) { monitor(v); }};
  const Trajectory traj = run(s, space, cfg, obs);
  double min_diss = kUnbounded, worst_excess = -kUnbounded, peak = 0.0;
  for (const EnergyLedger& e : energy.rows()) min_diss = std::min(min_diss, e.dissipation_rate);
  for (const MonitorRecord& r : monitor.rows()) {
    worst_excess = std::max(worst_excess, r.max_strain_expr - (1.0 + r.max_stress / n + 1e-10));
    peak = std::max(peak, r.max_eps);
  }
  const bool ok = traj.steps() == 200 && min_diss >= -1e-12 && worst_excess <= 0.0 && std::isfinite(peak);
  return {ok, std::to_string(traj.steps()) + " steps on 16x16, min dissipation rate " + fmt("%.3e", min_diss) +
                  ", peak |eps| " + fmt("%.4f", peak) + ", worst strain-bound excess " + fmt("%.3e", worst_excess)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "constitutive suite", 10.0, constitutive_suite},
      {2, "closed-form spot values", 1.0, closed_forms},
      {3, "lift identities", 5.0, lift_identities},
      {4, "manufactured convergence", 300.0, manufactured_convergence},
      {5, "energy law", 120.0, energy_law},
      {6, "strain-limit bound", 120.0, strain_limit},
      {7, "regularization Cauchy sweep", 300.0, regularization},
      {8, "uniqueness and stability", 180.0, stability},
      {9, "integrating-factor residual", 60.0, integrating_factor},
      {10, "2D smoke test", 180.0, smoke_2d},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.check();
    } catch (const std::exception& err) {
      out = {false, std::string("exception: ") + err.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.time_limit;
    const bool pass = out.passed && in_time;
    failures += pass ? 0 : 1;
    std::printf("%s criterion %d (%s): %s; %.2f s (limit %.0f s)%s\n", pass ? "PASS" : "FAIL", c.id, c.title.c_str(),
                out.detail.c_str(), secs, c.time_limit, in_time ? "" : " TOO SLOW");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria pass\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
