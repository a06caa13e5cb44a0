#include "strainlimit/dynamics.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "strainlimit/errors.hpp"

namespace strainlimit {

void SolverConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidInput("SolverConfig: dt must be > 0");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw InvalidInput("SolverConfig: t_end must be >= 0");
  if (!(midpoint_tolerance > 0.0)) throw InvalidInput("SolverConfig: midpoint tolerance must be > 0");
  if (midpoint_max_iter < 1) throw InvalidInput("SolverConfig: midpoint_max_iter must be >= 1");
}

GalerkinSystem::GalerkinSystem(const Scenario& scenario, const FESpace& space)
    : scenario_(&scenario), space_(&space), mass_(assemble_mass(space)) {
  if (scenario.lift.dim != space.dim()) throw ContractViolation("GalerkinSystem: lift and space dimensions differ");
  scenario.model.validate();
  if (space.n_interior() > 0) {
    mass_solver_.compute(mass_);
    if (mass_solver_.info() != Eigen::Success) throw NonConvergence("GalerkinSystem: mass matrix factorization failed");
  }
}

State GalerkinSystem::initial_state() const {
  State s;
  s.t = 0.0;
  s.U = Eigen::VectorXd::Zero(size());
  s.V = Eigen::VectorXd::Zero(size());
  return s;
}

const GalerkinSystem::LiftData& GalerkinSystem::lift_at(double t) const {
  for (const auto& entry : lift_cache_) {
    if (entry && entry->t == t) return *entry;
  }
  const AnalyticField& lift = scenario_->lift;
  LiftData data;
  data.t = t;
  data.grad.reserve(space_->n_qp());
  data.dt_grad.reserve(space_->n_qp());
  std::vector<SmallVector> inertia;
  inertia.reserve(space_->n_qp());
  for (const QuadPoint& qp : space_->quadrature()) {
    data.grad.push_back(lift.grad(t, qp.x));
    data.dt_grad.push_back(lift.dt_grad(t, qp.x));
    inertia.push_back(lift.dtt_value(t, qp.x));
  }
  data.load = assemble_forcing(*space_, scenario_->forcing, t) - assemble_qp_load(*space_, inertia);
  auto& slot = lift_cache_[lift_next_];
  lift_next_ = (lift_next_ + 1) % static_cast<int>(lift_cache_.size());
  slot = std::move(data);
  return *slot;
}

const Eigen::VectorXd& GalerkinSystem::external_load(double t) const { return lift_at(t).load; }

std::vector<SymTensor> GalerkinSystem::strain_expression(double t, const Eigen::VectorXd& U,
                                                         const Eigen::VectorXd& V) const {
  const LiftData& lift = lift_at(t);
  const double a = model().alpha;
  const double b = model().beta;
  const auto eps = strain_at_qp(*space_, space_->embed(U), lift.grad);
  const auto rate = strain_at_qp(*space_, space_->embed(V), lift.dt_grad);
  std::vector<SymTensor> out;
  out.reserve(eps.size());
  for (std::size_t q = 0; q < eps.size(); ++q) out.push_back(a * eps[q] + b * rate[q]);
  return out;
}

std::vector<SymTensor> GalerkinSystem::stresses(double t, std::span<const SymTensor> strain_expr,
                                                std::span<const SymTensor> hint) const {
  std::vector<SymTensor> out;
  out.reserve(strain_expr.size());
  for (std::size_t q = 0; q < strain_expr.size(); ++q) {
    std::optional<double> r0;
    if (hint.size() == strain_expr.size()) r0 = norm(hint[q]);
    try {
      out.push_back(invert(model(), strain_expr[q], r0));
    } catch (const std::exception& err) {
      std::ostringstream msg;
      msg << err.what() << " (t = " << t << ", quadrature point " << q << " at x = "
          << space_->quadrature()[q].x.transpose() << ")";
      if (dynamic_cast<const NoRegularizerAndSupercritical*>(&err)) throw NoRegularizerAndSupercritical(msg.str());
      throw NonConvergence(msg.str());
    }
  }
  return out;
}

Eigen::VectorXd GalerkinSystem::acceleration(double t, const Eigen::VectorXd& U, const Eigen::VectorXd& V,
                                             std::span<const SymTensor> hint, std::vector<SymTensor>* stress) const {
  auto tq = stresses(t, strain_expression(t, U, V), hint);
  Eigen::VectorXd f = external_load(t) - assemble_stress_load(*space_, tq);
  if (stress) *stress = std::move(tq);
  if (size() == 0) return f;
  return mass_solver_.solve(f);
}

SparseMatrix GalerkinSystem::tangent_stiffness(std::span<const SymTensor> stress) const {
  std::vector<PackedOperator> moduli;
  moduli.reserve(stress.size());
  for (const SymTensor& t : stress) moduli.push_back(tangent_compliance(model(), t));
  return assemble_tangent(*space_, moduli);
}

QPFields GalerkinSystem::fields(const State& state, const Eigen::VectorXd* accel) const {
  const LiftData& lift = lift_at(state.t);
  const AnalyticField& u0 = scenario_->lift;
  QPFields out;
  out.strain = strain_at_qp(*space_, space_->embed(state.U), lift.grad);
  out.strain_rate = strain_at_qp(*space_, space_->embed(state.V), lift.dt_grad);
  out.velocity = values_at_qp(*space_, space_->embed(state.V));
  std::vector<SmallVector> acc;
  if (accel) acc = values_at_qp(*space_, space_->embed(*accel));
  for (int q = 0; q < space_->n_qp(); ++q) {
    const QuadPoint& qp = space_->quadrature()[q];
    out.lift_velocity.push_back(u0.dt_value(state.t, qp.x));
    out.velocity[q] += out.lift_velocity.back();
    out.lift_strain_rate.push_back(sym_part(lift.dt_grad[q]));
    if (accel) out.acceleration.push_back(acc[q] + u0.dtt_value(state.t, qp.x));
    out.forcing.push_back(scenario_->forcing ? scenario_->forcing(state.t, qp.x) : SmallVector::Zero(space_->dim()));
  }
  return out;
}

Derivative rhs(const GalerkinSystem& system, State& state) {
  std::vector<SymTensor> stress;
  Eigen::VectorXd a = system.acceleration(state.t, state.U, state.V, state.stress, &stress);
  state.stress = std::move(stress);
  return {state.V, std::move(a)};
}

State step_rk4(const GalerkinSystem& system, const State& s, double dt, const Eigen::VectorXd* k1_accel) {
  const double t = s.t;
  const std::span<const SymTensor> hint = s.stress;
  const Eigen::VectorXd a1 = k1_accel ? *k1_accel : system.acceleration(t, s.U, s.V, hint);
  const Eigen::VectorXd& v1 = s.V;

  const Eigen::VectorXd u2 = s.U + 0.5 * dt * v1;
  const Eigen::VectorXd v2 = s.V + 0.5 * dt * a1;
  const Eigen::VectorXd a2 = system.acceleration(t + 0.5 * dt, u2, v2, hint);

  const Eigen::VectorXd u3 = s.U + 0.5 * dt * v2;
  const Eigen::VectorXd v3 = s.V + 0.5 * dt * a2;
  const Eigen::VectorXd a3 = system.acceleration(t + 0.5 * dt, u3, v3, hint);

  const Eigen::VectorXd u4 = s.U + dt * v3;
  const Eigen::VectorXd v4 = s.V + dt * a3;
  const Eigen::VectorXd a4 = system.acceleration(t + dt, u4, v4, hint);

  State out;
  out.t = t + dt;
  out.U = s.U + dt / 6.0 * (v1 + 2.0 * v2 + 2.0 * v3 + v4);
  out.V = s.V + dt / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
  out.stress = s.stress;
  return out;
}

State step_midpoint(const GalerkinSystem& system, const State& s, double dt, const SolverConfig& config,
                    const Eigen::VectorXd* accel) {
  const double tm = s.t + 0.5 * dt;
  const double a = system.model().alpha;
  const double b = system.model().beta;
  const Eigen::VectorXd& load = system.external_load(tm);

  State out;
  out.t = s.t + dt;
  if (system.size() == 0) {
    out.U = s.U;
    out.V = s.V;
    out.stress = s.stress;
    return out;
  }

  Eigen::VectorXd v1 = accel ? Eigen::VectorXd(s.V + dt * *accel) : s.V;
  std::vector<SymTensor> stress = s.stress;
  std::vector<double> trace;
  Eigen::VectorXd last_delta;
  Eigen::SimplicialLDLT<SparseMatrix> solver;
  bool pattern_ready = false;
  bool converged = false;
  for (int it = 0; it < config.midpoint_max_iter; ++it) {
    // Without a regulariser an iterate may leave the admissible strain set;
    // retreat along the last update until the stresses exist again.
    for (int cut = 0;; ++cut) {
      try {
        const Eigen::VectorXd vm = 0.5 * (s.V + v1);
        const Eigen::VectorXd um = s.U + 0.5 * dt * vm;
        stress = system.stresses(tm, system.strain_expression(tm, um, vm), stress);
        break;
      } catch (const NoRegularizerAndSupercritical&) {
        if (last_delta.size() == 0) {
          if (v1 == s.V) throw;
          v1 = s.V;
        } else {
          if (cut >= 40) throw;
          last_delta *= 0.5;
          v1 += last_delta;
        }
      }
    }
    const Eigen::VectorXd residual =
        system.mass() * (v1 - s.V) - dt * (load - assemble_stress_load(system.space(), stress));
    const SparseMatrix jac =
        system.mass() + (dt * (0.25 * a * dt + 0.5 * b)) * system.tangent_stiffness(stress);
    if (!pattern_ready) {
      solver.analyzePattern(jac);
      pattern_ready = true;
    }
    solver.factorize(jac);
    if (solver.info() != Eigen::Success) {
      throw MidpointNoConvergence("step_midpoint: Newton matrix factorization failed", trace);
    }
    const Eigen::VectorXd delta = solver.solve(residual);
    v1 -= delta;
    last_delta = delta;
    const double dn = delta.norm();
    trace.push_back(dn);
    if (!std::isfinite(dn)) break;
    if (dn <= config.midpoint_tolerance * (1.0 + v1.norm())) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "step_midpoint: no convergence at t = " << s.t << " after " << trace.size() << " iterations";
    if (!trace.empty()) msg << ", last update " << trace.back();
    throw MidpointNoConvergence(msg.str(), trace);
  }
  out.U = s.U + 0.5 * dt * (s.V + v1);
  out.V = std::move(v1);
  out.stress = std::move(stress);
  return out;
}

namespace {

void record(Trajectory& traj, const GalerkinSystem& system, const State& state, const SolverConfig& config) {
  traj.times.push_back(state.t);
  if (config.record_states) {
    traj.U.push_back(state.U);
    traj.V.push_back(state.V);
  }
  if (config.record_history) {
    const auto lift_grad = [&] {
      std::vector<SmallMatrix> g;
      for (const QuadPoint& qp : system.space().quadrature()) g.push_back(system.scenario().lift.grad(state.t, qp.x));
      return g;
    }();
    traj.strain_history.push_back(strain_at_qp(system.space(), system.space().embed(state.U), lift_grad));
    std::vector<SymTensor> g;
    g.reserve(state.stress.size());
    for (const SymTensor& t : state.stress) g.push_back(g_apply(system.model(), t));
    traj.g_history.push_back(std::move(g));
  }
}

}  // namespace

Trajectory run(const Scenario& scenario, const FESpace& space, const SolverConfig& config,
               std::span<const Observer> observers, std::optional<State> initial) {
  config.validate();
  const GalerkinSystem system(scenario, space);
  Trajectory traj;
  traj.alpha = scenario.model.alpha;
  traj.beta = scenario.model.beta;

  State state = initial ? std::move(*initial) : system.initial_state();
  if (state.U.size() != system.size() || state.V.size() != system.size()) {
    throw ContractViolation("run: initial state has the wrong number of coefficients");
  }
  Eigen::VectorXd accel = rhs(system, state).dV;
  record(traj, system, state, config);
  for (const Observer& obs : observers) obs(StepView{state, accel, system, 0});

  const long n_steps = config.t_end > 0.0 ? static_cast<long>(std::ceil(config.t_end / config.dt - 1e-12)) : 0;
  for (long k = 0; k < n_steps; ++k) {
    const double dt = k + 1 == n_steps ? config.t_end - state.t : config.dt;
    try {
      State next = config.scheme == Scheme::RK4 ? step_rk4(system, state, dt, &accel)
                                                : step_midpoint(system, state, dt, config, &accel);
      if (k + 1 == n_steps) next.t = config.t_end;
      state = std::move(next);
      accel = rhs(system, state).dV;
    } catch (const MidpointNoConvergence& err) {
      throw MidpointNoConvergence("step " + std::to_string(k + 1) + ": " + err.what(), err.trace);
    } catch (const std::exception& err) {
      std::ostringstream msg;
      msg << "step " << k + 1 << " from t = " << state.t << " failed: " << err.what();
      throw StepFailure(msg.str());
    }
    record(traj, system, state, config);
    for (const Observer& obs : observers) obs(StepView{state, accel, system, static_cast<int>(k + 1)});
  }
  traj.final_state = std::move(state);
  return traj;
}

double strain_history_residual(const Trajectory& traj) {
  if (traj.strain_history.empty() || traj.g_history.size() != traj.strain_history.size() ||
      traj.strain_history.size() != traj.times.size()) {
    throw ContractViolation("strain_history_residual: trajectory has no per-step strain and stress history");
  }
  const double a = traj.alpha / traj.beta;
  const std::size_t nq = traj.strain_history.front().size();
  std::vector<SymTensor> rec = traj.strain_history.front();
  for (std::size_t k = 0; k + 1 < traj.times.size(); ++k) {
    const double h = traj.times[k + 1] - traj.times[k];
    const double x = a * h;
    const double decay = std::exp(-x);
    // i0 = int_0^h e^{-a(h-s)} ds,  w1 = int_0^h e^{-a(h-s)} s/h ds,  w0 = i0 - w1
    const double i0 = -std::expm1(-x) / a;
    const double m1 = x < 1e-3 ? h * h * (0.5 - x / 3.0 + x * x / 8.0 - x * x * x / 30.0)
                               : (-std::expm1(-x) - x * decay) / (a * a);
    const double w1 = (h * i0 - m1) / h;
    const double w0 = i0 - w1;
    for (std::size_t q = 0; q < nq; ++q) {
      rec[q] = decay * rec[q] + (w0 / traj.beta) * traj.g_history[k][q] + (w1 / traj.beta) * traj.g_history[k + 1][q];
    }
  }
  double worst = 0.0;
  for (std::size_t q = 0; q < nq; ++q) worst = std::max(worst, norm(traj.strain_history.back()[q] - rec[q]));
  return worst;
}

}  // namespace strainlimit
