#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Cholesky>

#include "strainlimit/dynamics.hpp"
#include "strainlimit/energy.hpp"
#include "strainlimit/errors.hpp"

using namespace strainlimit;
using std::numbers::pi;

namespace {

MeshSpec unit_interval(int cells) {
  MeshSpec spec;
  spec.cells = {cells};
  return spec;
}

ConstitutiveModel linear_model(double alpha, double beta) {
  ConstitutiveModel m;
  m.potential = ScalarPotential::linear();
  m.alpha = alpha;
  m.beta = beta;
  m.reg_n.reset();
  return m;
}

Scenario at_rest(const ConstitutiveModel& model, const MeshSpec& mesh, ForcingFn f = {}) {
  Scenario s;
  s.name = "rest";
  s.mesh = mesh;
  s.model = model;
  s.lift = AnalyticField::zero(mesh.dim);
  s.forcing = std::move(f);
  return s;
}

Eigen::VectorXd random_vector(std::mt19937_64& rng, int n, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = g(rng);
  return v;
}

// interior coefficients of sin(pi x) on a uniform interval mesh
Eigen::VectorXd sine_coefficients(int cells, double amp) {
  Eigen::VectorXd c(cells - 1);
  for (int i = 1; i < cells; ++i) c[i - 1] = amp * std::sin(pi * i / cells);
  return c;
}

State start(const GalerkinSystem& sys, Eigen::VectorXd U, Eigen::VectorXd V) {
  State s;
  s.U = std::move(U);
  s.V = std::move(V);
  rhs(sys, s);
  return s;
}

double total_energy(const GalerkinSystem& sys, State& s) {
  const Derivative d = rhs(sys, s);
  const EnergyLedger e = energy_snapshot(sys, s, d.dV);
  return e.kinetic + e.elastic;
}

}  // namespace

TEST_CASE("rest state is stationary") {
  for (int dim : {1, 2}) {
    MeshSpec mesh = unit_interval(8);
    if (dim == 2) {
      mesh.dim = 2;
      mesh.domain = {0.0, 1.0, 0.0, 1.0};
      mesh.cells = {4, 4};
    }
    const FESpace space(mesh.build());
    const Scenario s = at_rest(ConstitutiveModel{}, mesh);
    const GalerkinSystem sys(s, space);
    State st = sys.initial_state();
    const Derivative d = rhs(sys, st);
    CHECK(d.dU.norm() == 0.0);
    CHECK(d.dV.norm() == 0.0);
    CHECK(st.stress.size() == static_cast<std::size_t>(space.n_qp()));
    const State next = step_rk4(sys, st, 0.1);
    CHECK(next.t == doctest::Approx(0.1));
    CHECK(next.U.norm() == 0.0);
    SolverConfig cfg;
    const State mid = step_midpoint(sys, st, 0.1, cfg);
    CHECK(mid.U.norm() == 0.0);
    CHECK(mid.V.norm() == 0.0);
  }
}

TEST_CASE("linear model matches an independently assembled finite-element operator") {
  const int cells = 10;
  const double h = 1.0 / cells, alpha = 0.7, beta = 0.4;
  const MeshSpec mesh = unit_interval(cells);
  const FESpace space(mesh.build());
  const ForcingFn f = [](double t, const SmallVector& x) { return SmallVector::Constant(1, std::cos(3 * x[0]) + t); };
  const Scenario s = at_rest(linear_model(alpha, beta), mesh, f);
  const GalerkinSystem sys(s, space);

  const int n = cells - 1;
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n), M = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    K(i, i) = 2.0 / h;
    M(i, i) = 4.0 * h / 6.0;
    if (i > 0) K(i, i - 1) = K(i - 1, i) = -1.0 / h, M(i, i - 1) = M(i - 1, i) = h / 6.0;
  }
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 5; ++trial) {
    State st;
    st.t = 0.3;
    st.U = random_vector(rng, n, 0.1);
    st.V = random_vector(rng, n, 0.1);
    const Derivative d = rhs(sys, st);
    const Eigen::VectorXd F = assemble_forcing(space, f, st.t);
    const Eigen::VectorXd ref = M.ldlt().solve(F - K * (alpha * st.U + beta * st.V));
    CHECK((d.dU - st.V).norm() == 0.0);
    CHECK((d.dV - ref).norm() <= 1e-10 * (1.0 + ref.norm()));
  }
}

TEST_CASE("single interior dof: hand-reduced right-hand side") {
  // two cells on [0, 1]: M = 2h/3, strain u/h on the left cell and -u/h on the right
  const double h = 0.5;
  const MeshSpec mesh = unit_interval(2);
  const FESpace space(mesh.build());
  ConstitutiveModel m;
  m.reg_n.reset();
  m.alpha = 1.2;
  m.beta = 0.5;
  const Scenario s = at_rest(m, mesh);
  const GalerkinSystem sys(s, space);
  REQUIRE(sys.size() == 1);
  for (double u : {-0.2, 0.05, 0.3})
    for (double v : {-0.4, 0.0, 0.25}) {
      State st;
      st.U = Eigen::VectorXd::Constant(1, u);
      st.V = Eigen::VectorXd::Constant(1, v);
      const double e = (m.alpha * u + m.beta * v) / h;
      const double t_left = e / std::sqrt(1.0 - e * e);
      const double accel = -(2.0 * t_left) / (2.0 * h / 3.0);
      CHECK(rhs(sys, st).dV[0] == doctest::Approx(accel).epsilon(1e-10));
    }
}

TEST_CASE("RK4 self-convergence on the linear model with smooth forcing") {
  const MeshSpec mesh = unit_interval(16);
  const FESpace space(mesh.build());
  const Scenario s = standing_wave(linear_model(1.0, 0.01), mesh, 0.4);
  auto final_u = [&](double dt) {
    SolverConfig cfg;
    cfg.scheme = Scheme::RK4;
    cfg.dt = dt;
    cfg.t_end = 0.4;
    return run(s, space, cfg).final_state.U;
  };
  const Eigen::VectorXd ref = final_u(0.02 / 16);
  std::vector<double> err;
  for (double dt : {0.02, 0.01, 0.005}) err.push_back((final_u(dt) - ref).norm());
  for (std::size_t k = 1; k < err.size(); ++k) {
    const double order = std::log2(err[k - 1] / err[k]);
    CHECK(order >= 3.7);
    CHECK(order <= 4.3);
  }
}

TEST_CASE("RK4 single-step energy residual is high order on the linear problem") {
  const int cells = 16;
  const MeshSpec mesh = unit_interval(cells);
  const FESpace space(mesh.build());
  const Scenario s = at_rest(linear_model(1.0, 0.05), mesh);
  const GalerkinSystem sys(s, space);
  auto residual = [&](double dt) {
    State s0 = start(sys, sine_coefficients(cells, 0.1), sine_coefficients(cells, -0.2));
    const double e0 = total_energy(sys, s0);
    auto dissipation = [&](State& st) { return energy_snapshot(sys, st, rhs(sys, st).dV).dissipation_rate; };
    const double d0 = dissipation(s0);
    State half = step_rk4(sys, s0, dt / 2);
    State s1 = step_rk4(sys, s0, dt);
    const double simpson = dt / 6 * (d0 + 4 * dissipation(half) + dissipation(s1));
    return std::abs(total_energy(sys, s1) - e0 + simpson);
  };
  const double r1 = residual(0.01), r2 = residual(0.005);
  CHECK(std::log2(r1 / r2) >= 3.7);
}

TEST_CASE("implicit midpoint is nearly conservative for the weakly damped linear system") {
  const int cells = 32;
  const MeshSpec mesh = unit_interval(cells);
  const FESpace space(mesh.build());
  for (double alpha : {1e-8, 1.0}) {
    const Scenario s = at_rest(linear_model(alpha, 1e-8), mesh);
    const GalerkinSystem sys(s, space);
    State st = start(sys, sine_coefficients(cells, 0.05), sine_coefficients(cells, 1.0));
    const double e0 = total_energy(sys, st);
    SolverConfig cfg;
    cfg.dt = 1e-3;
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      st = step_midpoint(sys, st, cfg.dt, cfg);
      worst = std::max(worst, std::abs(total_energy(sys, st) - e0) / e0);
    }
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("implicit midpoint self-convergence on the prototype model") {
  // weak damping keeps dt |lambda| moderate, so the asymptotic regime is reached at these steps
  const MeshSpec mesh = unit_interval(16);
  const FESpace space(mesh.build());
  ConstitutiveModel m;
  m.reg_n = 64;
  m.beta = 0.05;
  const Scenario s = gaussian_pluck(m, mesh, 0.25);
  auto final_u = [&](double dt) {
    SolverConfig cfg;
    cfg.dt = dt;
    cfg.t_end = 0.25;
    const State st = run(s, space, cfg).final_state;
    Eigen::VectorXd uv(2 * st.U.size());
    uv << st.U, st.V;
    return uv;
  };
  const Eigen::VectorXd ref = final_u(1.25e-4);
  std::vector<double> err;
  for (double dt : {2e-3, 1e-3, 5e-4}) err.push_back((final_u(dt) - ref).norm());
  for (std::size_t k = 1; k < err.size(); ++k) {
    const double order = std::log2(err[k - 1] / err[k]);
    INFO("errors " << err[k - 1] << " " << err[k]);
    CHECK(order >= 1.8);
    CHECK(order <= 2.2);
  }
}

TEST_CASE("run bookkeeping") {
  const MeshSpec mesh = unit_interval(16);
  const FESpace space(mesh.build());
  const Scenario s = gaussian_pluck(ConstitutiveModel{}, mesh, 1.0);
  SolverConfig cfg;
  cfg.t_end = 0.0;
  CHECK(run(s, space, cfg).times.size() == 1);

  cfg.t_end = 0.0105;
  cfg.dt = 1e-3;
  cfg.record_states = true;
  const Trajectory traj = run(s, space, cfg);
  CHECK(traj.steps() == 11);
  CHECK(traj.times.back() == 0.0105);
  CHECK(traj.final_state.t == 0.0105);
  CHECK(traj.U.size() == 12);
  CHECK(traj.times[10] == doctest::Approx(0.01).epsilon(1e-12));

  cfg.dt = 0.0;
  CHECK_THROWS_AS(run(s, space, cfg), InvalidInput);
  cfg.dt = 1e-3;
  cfg.t_end = -1.0;
  CHECK_THROWS_AS(run(s, space, cfg), InvalidInput);
}

TEST_CASE("determinism: identical runs are bit-identical") {
  const MeshSpec mesh = unit_interval(32);
  const FESpace space(mesh.build());
  const Scenario s = gaussian_pluck(ConstitutiveModel{}, mesh, 0.1);
  for (Scheme scheme : {Scheme::RK4, Scheme::ImplicitMidpoint}) {
    SolverConfig cfg;
    cfg.scheme = scheme;
    cfg.dt = scheme == Scheme::RK4 ? 2e-5 : 2e-3;
    cfg.t_end = 0.1;
    const State a = run(s, space, cfg).final_state;
    const State b = run(s, space, cfg).final_state;
    CHECK(a.U == b.U);
    CHECK(a.V == b.V);
  }
}

TEST_CASE("manufactured standing wave converges in space and time") {
  ConstitutiveModel m;
  m.reg_n = 16;
  auto error = [&](int cells, double dt) {
    const MeshSpec mesh = unit_interval(cells);
    const FESpace space(mesh.build());
    const Scenario s = standing_wave(m, mesh, 0.25);
    SolverConfig cfg;
    cfg.dt = dt;
    cfg.t_end = 0.25;
    const Trajectory traj = run(s, space, cfg);
    return l2_error(space, space.embed(traj.final_state.U), *s.exact, 0.25, &s.lift);
  };
  const double coarse = error(16, 4e-3), fine = error(32, 2e-3);
  CHECK(fine < coarse);
  CHECK(std::log2(coarse / fine) >= 1.7);
  CHECK(fine <= 1e-2 * 0.5);
}

TEST_CASE("pluck respects the strain limit up to the regulariser slack") {
  const MeshSpec mesh = unit_interval(64);
  const FESpace space(mesh.build());
  ConstitutiveModel m;
  m.reg_n = 64;
  const Scenario s = gaussian_pluck(m, mesh, 0.5);
  SolverConfig cfg;
  cfg.dt = 2e-3;
  cfg.t_end = 0.5;
  StrainMonitor monitor;
  const Observer obs[] = {[&](const StepView& v) { monitor(v); }};
  run(s, space, cfg, obs);
  REQUIRE(monitor.rows().size() == 251);
  for (const MonitorRecord& r : monitor.rows()) {
    CHECK(r.max_strain_expr <= 1.0 + r.max_stress / 64.0 + 1e-10);
    CHECK(r.max_strain_expr < 1.0);
  }
}

TEST_CASE("supercritical data without a regulariser fail with an annotated error") {
  const MeshSpec mesh = unit_interval(16);
  const FESpace space(mesh.build());
  ConstitutiveModel m;
  m.reg_n.reset();
  const Scenario s = gaussian_pluck(m, mesh, 0.1, 0.3, 2.0);
  SolverConfig cfg;
  cfg.t_end = 0.1;
  try {
    run(s, space, cfg);
    FAIL("expected an inversion failure");
  } catch (const NoRegularizerAndSupercritical& err) {
    CHECK(std::string(err.what()).find("quadrature point") != std::string::npos);
  }
}

TEST_CASE("strain history residual") {
  const MeshSpec mesh = unit_interval(16);
  const FESpace space(mesh.build());
  SolverConfig cfg;
  cfg.record_history = true;

  cfg.t_end = 1e-3;
  const Trajectory rest = run(at_rest(ConstitutiveModel{}, mesh), space, cfg);
  CHECK(strain_history_residual(rest) == 0.0);

  ConstitutiveModel m;
  m.reg_n = 16;
  cfg.t_end = 0.2;
  cfg.dt = 1e-2;
  const Trajectory ramp = run(linear_ramp(m, mesh, 0.2), space, cfg);
  CHECK(strain_history_residual(ramp) <= 1e-9);

  const Scenario wave = standing_wave(m, mesh, 0.2);
  std::vector<double> res;
  for (double dt : {1e-2, 5e-3, 2.5e-3}) {
    cfg.dt = dt;
    res.push_back(strain_history_residual(run(wave, space, cfg)));
  }
  for (std::size_t k = 1; k < res.size(); ++k) {
    const double order = std::log2(res[k - 1] / res[k]);
    CHECK(order >= 1.7);
    CHECK(order <= 2.3);
  }

  cfg.record_history = false;
  CHECK_THROWS_AS(strain_history_residual(run(wave, space, cfg)), ContractViolation);
}
