#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "strainlimit/energy.hpp"
#include "strainlimit/errors.hpp"
#include "strainlimit/studies.hpp"

using namespace strainlimit;

namespace {

MeshSpec unit_interval(int cells) {
  MeshSpec spec;
  spec.cells = {cells};
  return spec;
}

AnalyticField ramp(double s) {
  return AnalyticField::steady(
      1, [s](const SmallVector& x) { return SmallVector::Constant(1, s * x[0]); },
      [s](const SmallVector&) { return SmallMatrix::Constant(1, 1, s); });
}

// homogeneous strain eps and strain rate rate at t = 0 through the static lift
Scenario homogeneous(const ConstitutiveModel& model, double eps, double rate) {
  Scenario s;
  s.mesh = unit_interval(2);
  s.model = model;
  s.lift = lift_static_bc(ramp(eps), ramp(rate), model.alpha, model.beta);
  return s;
}

EnergyLedger ledger_at_start(const Scenario& s, const FESpace& space) {
  const GalerkinSystem sys(s, space);
  State st = sys.initial_state();
  const Derivative d = rhs(sys, st);
  return energy_snapshot(sys, st, d.dV);
}

ConstitutiveModel unregularized() {
  ConstitutiveModel m;
  m.reg_n.reset();
  return m;
}

std::vector<EnergyLedger> pluck_ledger(int cells, double dt, double t_end) {
  const MeshSpec mesh = unit_interval(cells);
  const FESpace space(mesh.build());
  ConstitutiveModel m;
  m.reg_n = 64;
  const Scenario s = gaussian_pluck(m, mesh, t_end);
  SolverConfig cfg;
  cfg.dt = dt;
  cfg.t_end = t_end;
  EnergyRecorder rec;
  const Observer obs[] = {[&](const StepView& v) { rec(v); }};
  run(s, space, cfg, obs);
  return rec.rows();
}

}  // namespace

TEST_CASE("rest state ledger is zero") {
  Scenario s;
  s.mesh = unit_interval(8);
  s.lift = AnalyticField::zero(1);
  const FESpace space(s.mesh.build());
  const EnergyLedger e = ledger_at_start(s, space);
  CHECK(e.kinetic == 0.0);
  CHECK(e.elastic == 0.0);
  CHECK(e.dissipation_rate == 0.0);
  CHECK(e.external_power == 0.0);
  CHECK(e.finite());
}

TEST_CASE("homogeneous hand cases") {
  const FESpace space(unit_interval(2).build());
  const EnergyLedger a = ledger_at_start(homogeneous(unregularized(), 0.6, 0.0), space);
  CHECK(a.elastic == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(std::abs(a.dissipation_rate) <= 1e-14);
  CHECK(a.kinetic == 0.0);

  const EnergyLedger b = ledger_at_start(homogeneous(unregularized(), 0.6, 0.2), space);
  CHECK(b.elastic == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(b.dissipation_rate == doctest::Approx((0.8 / 0.6 - 0.75) * (0.8 - 0.6)).epsilon(1e-11));
  CHECK(b.kinetic == doctest::Approx(0.5 * 0.04 / 3.0).epsilon(1e-13));
}

TEST_CASE("elastic energy is unbounded exactly past the strain limit") {
  const FESpace space(unit_interval(2).build());
  const EnergyLedger past = ledger_at_start(homogeneous(unregularized(), 1.2, -0.5), space);
  CHECK(is_unbounded(past.elastic));
  CHECK(std::isnan(past.dissipation_rate));
  CHECK_FALSE(past.finite());
  const EnergyLedger below = ledger_at_start(homogeneous(unregularized(), 0.9, -0.2), space);
  CHECK(std::isfinite(below.elastic));
  CHECK(below.dissipation_rate >= 0.0);

  std::vector<EnergyLedger> rows(2);
  rows[1].balance_residual = std::numeric_limits<double>::quiet_NaN();
  CHECK(std::isnan(energy_balance_residual(rows)));
}

TEST_CASE("monitor values") {
  const Scenario s = homogeneous(unregularized(), 1.2, -0.5);
  const FESpace space(s.mesh.build());
  const GalerkinSystem sys(s, space);
  State st = sys.initial_state();
  rhs(sys, st);
  const MonitorRecord r = monitor_snapshot(sys, st);
  CHECK(r.max_strain_expr == doctest::Approx(0.7).epsilon(1e-13));
  CHECK(r.margin == 1.0 - r.max_strain_expr);
  CHECK(r.max_eps == doctest::Approx(1.2).epsilon(1e-13));
  CHECK(r.max_stress == doctest::Approx(0.7 / std::sqrt(1.0 - 0.49)).epsilon(1e-10));
}

TEST_CASE("energy ledger of a pluck run") {
  const auto coarse = pluck_ledger(32, 4e-3, 0.25);
  const auto fine = pluck_ledger(32, 2e-3, 0.25);
  REQUIRE(coarse.size() == 63 + 1);
  CHECK(energy_balance_residual({coarse.front()}) == 0.0);
  const double rc = energy_balance_residual(coarse), rf = energy_balance_residual(fine);
  INFO("residuals " << rc << " " << rf);
  CHECK(rc / rf >= 3.0);
  CHECK(rc / rf <= 5.0);
  CHECK(max_energy_increase(fine) <= rf);
  for (const EnergyLedger& e : fine) {
    CHECK(e.dissipation_rate >= -1e-12);
    CHECK(e.kinetic >= 0.0);
    CHECK(e.elastic >= 0.0);
    CHECK(std::abs(e.external_power) == 0.0);
  }
}

TEST_CASE("fit_order") {
  const std::vector<double> x{1.0, 2.0, 4.0, 8.0};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * v * v);
  CHECK(fit_order(x, y) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(fit_order(std::vector<double>{1.0}, std::vector<double>{1.0}), ContractViolation);
  CHECK_THROWS_AS(fit_order(std::vector<double>{1.0, 2.0}, std::vector<double>{1.0, 0.0}), ContractViolation);
}

TEST_CASE("regularization sweep") {
  const MeshSpec mesh = unit_interval(32);
  const FESpace space(mesh.build());
  SolverConfig cfg;
  cfg.dt = 4e-3;
  cfg.t_end = 0.25;
  const Scenario pluck = gaussian_pluck(ConstitutiveModel{}, mesh, 0.25);
  const int two[] = {4, 16};
  CHECK_THROWS_AS(regularization_sweep(pluck, space, cfg, two), ContractViolation);
  const int unsorted[] = {4, 64, 16};
  CHECK_THROWS_AS(regularization_sweep(pluck, space, cfg, unsorted), ContractViolation);

  const int ns[] = {4, 16, 64, 256};
  const ConvergenceReport r = regularization_sweep(pluck, space, cfg, ns);
  REQUIRE(r.values.size() == 3);
  CHECK(r.axis == "n");
  CHECK(r.axis_values == std::vector<double>{16, 64, 256});
  CHECK(r.cauchy);
  for (std::size_t k = 1; k < r.values.size(); ++k) CHECK(r.values[k] < r.values[k - 1]);
  for (std::size_t k = 0; k < r.values.size(); ++k) CHECK(r.max_in_time[k] >= r.values[k]);

  const ConvergenceReport again = regularization_sweep(pluck, space, cfg, ns);
  CHECK(again.values == r.values);
  CHECK(again.fitted_order == r.fitted_order);

  // linear model: G_n(T) = (1 + 1/n) T, so successive diffs track |1/n_{k+1} - 1/n_k|
  ConstitutiveModel lin;
  lin.potential = ScalarPotential::linear();
  const ConvergenceReport rl = regularization_sweep(gaussian_pluck(lin, mesh, 0.25), space, cfg, ns);
  for (std::size_t k = 1; k < rl.values.size(); ++k) {
    CHECK(rl.values[k - 1] / rl.values[k] >= 3.5);
    CHECK(rl.values[k - 1] / rl.values[k] <= 4.5);
  }
  REQUIRE(rl.fitted_order.has_value());
  CHECK(*rl.fitted_order == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("refinement study on the standing wave") {
  ConstitutiveModel m;
  m.reg_n = 16;
  const Scenario wave = standing_wave(m, unit_interval(32), 0.1);
  SolverConfig cfg;
  cfg.dt = 2.5e-4;
  cfg.t_end = 0.1;
  const double cells[] = {8, 16, 32};
  const ConvergenceReport space = refinement_study(wave, cfg, RefinementAxis::Space, cells);
  REQUIRE(space.fitted_order.has_value());
  CHECK(space.axis == "h");
  CHECK(*space.fitted_order == doctest::Approx(2.0).epsilon(0.15));

  const double dts[] = {1e-2, 5e-3, 2.5e-3};
  const ConvergenceReport time = refinement_study(wave, cfg, RefinementAxis::Time, dts);
  REQUIRE(time.fitted_order.has_value());
  CHECK(time.axis == "dt");
  CHECK(*time.fitted_order == doctest::Approx(2.0).epsilon(0.1));

  const double two[] = {8, 16};
  CHECK_THROWS_AS(refinement_study(wave, cfg, RefinementAxis::Space, two), ContractViolation);
  const Scenario pluck = gaussian_pluck(m, unit_interval(16), 0.1);
  CHECK_THROWS_AS(refinement_study(pluck, cfg, RefinementAxis::Space, cells), ContractViolation);
}

TEST_CASE("stability study") {
  const MeshSpec mesh = unit_interval(32);
  const FESpace space(mesh.build());
  const Scenario pluck = gaussian_pluck(ConstitutiveModel{}, mesh, 0.25);
  SolverConfig cfg;
  cfg.dt = 5e-3;
  cfg.t_end = 0.25;
  const double deltas[] = {1e-3, 1e-5, 1e-7};
  const ConvergenceReport r = stability_study(pluck, space, cfg, deltas, 3);
  REQUIRE(r.values.size() == 3);
  CHECK(r.delta_independent);
  CHECK(r.bounded);
  for (double f : r.values) CHECK(f <= r.growth_constant * std::exp(r.growth_constant * cfg.t_end) * (1 + 1e-12));
  const ConvergenceReport again = stability_study(pluck, space, cfg, deltas, 3);
  CHECK(again.values == r.values);

  const GalerkinSystem sys(pluck, space);
  State perturbed = sys.initial_state();
  perturbed.V += 0.0 * Eigen::VectorXd::Ones(perturbed.V.size());
  const State a = run(pluck, space, cfg).final_state;
  const State b = run(pluck, space, cfg, {}, perturbed).final_state;
  CHECK(a.U == b.U);
  CHECK(a.V == b.V);
}
