#include "strainlimit/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>

#include "strainlimit/verify.hpp"

namespace strainlimit {
namespace {

std::ofstream open_csv(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << std::setprecision(17);
  return out;
}

std::string time_label(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", t);
  return buf;
}

}  // namespace

void write_energy_csv(const std::filesystem::path& path, const std::vector<EnergyLedger>& rows) {
  auto out = open_csv(path);
  out << "t,kinetic,elastic,dissipation_cum,external_cum,balance_residual\n";
  for (const EnergyLedger& r : rows) {
    out << r.t << ',' << r.kinetic << ',' << r.elastic << ',' << r.dissipation_cum << ',' << r.external_cum << ','
        << r.balance_residual << '\n';
  }
}

void write_monitor_csv(const std::filesystem::path& path, const std::vector<MonitorRecord>& rows) {
  auto out = open_csv(path);
  out << "t,max_strain_expr,margin,max_eps,max_stress\n";
  for (const MonitorRecord& r : rows) {
    out << r.t << ',' << r.max_strain_expr << ',' << r.margin << ',' << r.max_eps << ',' << r.max_stress << '\n';
  }
}

void write_report_csv(const std::filesystem::path& path, const ConvergenceReport& report) {
  auto out = open_csv(path);
  out << "axis_value,error_or_diff,fitted_order\n";
  for (std::size_t i = 0; i < report.values.size(); ++i) {
    out << report.axis_values[i] << ',' << report.values[i] << ',';
    if (i + 1 == report.values.size() && report.fitted_order) out << *report.fitted_order;
    out << '\n';
  }
}

void write_snapshot_csv(const std::filesystem::path& path, const GalerkinSystem& system, const State& state) {
  const FESpace& space = system.space();
  const int d = space.dim();
  const int np = packed_size(d);
  const QPFields f = system.fields(state);
  const auto u = values_at_qp(space, space.embed(state.U));
  auto out = open_csv(path);
  out << (d == 1 ? "x" : "x,y");
  for (int c = 0; c < d; ++c) out << ",u" << c;
  for (int c = 0; c < d; ++c) out << ",v" << c;
  for (int k = 0; k < np; ++k) out << ",eps" << k;
  for (int k = 0; k < np; ++k) out << ",T" << k;
  out << '\n';
  for (int q = 0; q < space.n_qp(); ++q) {
    const SmallVector& x = space.quadrature()[q].x;
    const SmallVector uq = u[q] + system.scenario().lift.value(state.t, x);
    for (int j = 0; j < d; ++j) out << (j ? "," : "") << x[j];
    for (int c = 0; c < d; ++c) out << ',' << uq[c];
    for (int c = 0; c < d; ++c) out << ',' << f.velocity[q][c];
    for (int k = 0; k < np; ++k) out << ',' << f.strain[q][k];
    for (int k = 0; k < np; ++k) out << ',' << state.stress[q][k];
    out << '\n';
  }
}

int cmd_run(const RunConfig& config, std::ostream& log) {
  Scenario scenario;
  try {
    scenario = config.build_scenario();
  } catch (const std::invalid_argument& err) {
    log << "error: " << err.what() << '\n';
    return kExitValidation;
  }
  const FESpace space(scenario.mesh.build());
  const double margin = safety_margin(scenario, space);
  if (!is_unbounded(margin)) {
    log << "safety margin " << margin << '\n';
    if (!(margin > 0.0)) {
      log << "error: safety strain condition violated: margin = " << margin
          << " (max |alpha eps(u0) + beta d/dt eps(u0)| must stay below L = " << scenario.model.potential.limit()
          << ")\n";
      return kExitValidation;
    }
  }

  const std::filesystem::path dir(config.out_dir);
  EnergyRecorder energy;
  StrainMonitor monitor;
  const SolverConfig solver = config.solver_config();
  const long total = solver.t_end > 0.0 ? static_cast<long>(std::ceil(solver.t_end / solver.dt - 1e-12)) : 0;
  std::vector<Observer> observers{
      [&](const StepView& v) { energy(v); },
      [&](const StepView& v) { monitor(v); },
      [&](const StepView& v) {
        const bool periodic = config.snapshot_every > 0 && v.step % config.snapshot_every == 0;
        if (v.step == 0 || v.step == total || periodic) {
          write_snapshot_csv(dir / ("state_" + time_label(v.state.t) + ".csv"), v.system, v.state);
        }
      },
  };

  int code = kExitOk;
  try {
    const Trajectory traj = run(scenario, space, solver, observers);
    log << "completed " << traj.steps() << " steps to t = " << traj.final_state.t << '\n';
  } catch (const std::exception& err) {
    log << "error: " << err.what() << '\n';
    code = kExitRuntime;
  }
  write_energy_csv(dir / "energy.csv", energy.rows());
  write_monitor_csv(dir / "monitor.csv", monitor.rows());
  if (code == kExitOk) {
    log << "energy balance residual " << energy_balance_residual(energy.rows()) << '\n';
    double worst = kUnbounded;
    for (const MonitorRecord& r : monitor.rows()) worst = std::min(worst, r.margin);
    if (!is_unbounded(worst)) log << "smallest strain margin " << worst << '\n';
  }
  return code;
}

int cmd_sweep(const RunConfig& config, std::ostream& log) {
  if (config.study.empty()) {
    log << "error: missing required key 'study' for sweep\n";
    return kExitValidation;
  }
  if (config.study == "refinement" && config.levels.empty()) {
    log << "error: missing required key 'levels' for the refinement study\n";
    return kExitValidation;
  }
  Scenario scenario;
  try {
    scenario = config.build_scenario();
  } catch (const std::invalid_argument& err) {
    log << "error: " << err.what() << '\n';
    return kExitValidation;
  }
  const FESpace space(scenario.mesh.build());
  const double margin = safety_margin(scenario, space);
  if (!is_unbounded(margin) && !(margin > 0.0)) {
    log << "error: safety strain condition violated: margin = " << margin << '\n';
    return kExitValidation;
  }

  ConvergenceReport report;
  try {
    const SolverConfig solver = config.solver_config();
    if (config.study == "regularization") {
      report = regularization_sweep(scenario, space, solver, config.n_list);
      log << "successive differences " << (report.cauchy ? "strictly decrease" : "do not strictly decrease") << '\n';
    } else if (config.study == "refinement") {
      if (!scenario.exact) {
        log << "error: the refinement study needs a manufactured scenario\n";
        return kExitValidation;
      }
      report = refinement_study(scenario, solver, config.axis == "dt" ? RefinementAxis::Time : RefinementAxis::Space,
                                config.levels);
    } else {
      report = stability_study(scenario, space, solver, config.delta_list, config.seed);
      log << "growth constant " << report.growth_constant << ", factors "
          << (report.delta_independent ? "agree" : "do not agree") << " within 10%\n";
    }
  } catch (const ContractViolation& err) {
    log << "error: " << err.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& err) {
    log << "error: " << err.what() << '\n';
    return kExitRuntime;
  }
  write_report_csv(std::filesystem::path(config.out_dir) / "report.csv", report);
  if (report.fitted_order) log << "fitted order " << *report.fitted_order << '\n';
  return kExitOk;
}

int cmd_verify(std::ostream& log) {
  const auto results = property_suite(PropertyOptions{});
  const bool ok = print_results(log, results);
  std::size_t failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  log << (ok ? "all " : "") << results.size() - failed << " of " << results.size() << " properties hold\n";
  return ok ? kExitOk : kExitVerifyFailed;
}

}  // namespace strainlimit
