#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCholesky>

#include "strainlimit/fespace.hpp"
#include "strainlimit/scenarios.hpp"

namespace strainlimit {

/// Galerkin coefficients at time t. U and V live on the interior dofs; the
/// full displacement is u0(t) + sum_j U_j w_j.
struct State {
  double t = 0.0;
  Eigen::VectorXd U;
  Eigen::VectorXd V;
  /// Stress per quadrature point from the last right-hand-side evaluation at (t, U, V).
  std::vector<SymTensor> stress;
};

enum class Scheme { RK4, ImplicitMidpoint };

struct SolverConfig {
  double dt = 1e-3;
  Scheme scheme = Scheme::ImplicitMidpoint;
  double t_end = 1.0;
  double midpoint_tolerance = 1e-11;
  int midpoint_max_iter = 50;
  /// Keep (U, V) after every step in the trajectory.
  bool record_states = false;
  /// Keep per-quadrature-point eps(u) and G_n(T) after every step.
  bool record_history = false;

  /// Throws InvalidInput unless dt > 0 and t_end >= 0.
  void validate() const;
};

/// Per-quadrature-point kinematics of the full field u = u0 + sum U_j w_j.
struct QPFields {
  std::vector<SymTensor> strain;       // eps(u)
  std::vector<SymTensor> strain_rate;  // d/dt eps(u)
  std::vector<SmallVector> velocity;   // d/dt u
  std::vector<SmallVector> lift_velocity;
  std::vector<SymTensor> lift_strain_rate;  // d/dt eps(u0)
  std::vector<SmallVector> acceleration;  // d2/dt2 u, needs the coefficient acceleration
  std::vector<SmallVector> forcing;
};

/**
 * The first-order system U' = V, M V' = F_f(t) - S(t, U, V) - M0(t).
 * Lift data at quadrature points are cached for the most recent few times.
 */
class GalerkinSystem {
 public:
  GalerkinSystem(const Scenario& scenario, const FESpace& space);

  const Scenario& scenario() const { return *scenario_; }
  const FESpace& space() const { return *space_; }
  const ConstitutiveModel& model() const { return scenario_->model; }
  const SparseMatrix& mass() const { return mass_; }
  int size() const { return space_->n_interior(); }

  /// Interpolated initial data: U = V = 0 (the lift carries u_I and v0).
  State initial_state() const;

  /// alpha eps(u) + beta d/dt eps(u) at every quadrature point.
  std::vector<SymTensor> strain_expression(double t, const Eigen::VectorXd& U, const Eigen::VectorXd& V) const;

  /// T = G_n^-1 of the strain expression, warm started from `hint` when given.
  /// Inversion failures are rethrown with the time and quadrature point.
  std::vector<SymTensor> stresses(double t, std::span<const SymTensor> strain_expr,
                                  std::span<const SymTensor> hint = {}) const;

  /// Coefficient acceleration M^-1 (F_f - S - M0); fills `stress` when non-null.
  Eigen::VectorXd acceleration(double t, const Eigen::VectorXd& U, const Eigen::VectorXd& V,
                               std::span<const SymTensor> hint = {}, std::vector<SymTensor>* stress = nullptr) const;

  /// F_f(t) - M0(t) over interior dofs.
  const Eigen::VectorXd& external_load(double t) const;

  /// sum_qp w B^T (dT/dE) B at the given stresses.
  SparseMatrix tangent_stiffness(std::span<const SymTensor> stress) const;

  QPFields fields(const State& state, const Eigen::VectorXd* accel = nullptr) const;

  Eigen::VectorXd solve_mass(const Eigen::VectorXd& rhs) const { return mass_solver_.solve(rhs); }

 private:
  struct LiftData {
    double t;
    std::vector<SmallMatrix> grad;
    std::vector<SmallMatrix> dt_grad;
    Eigen::VectorXd load;
  };
  const LiftData& lift_at(double t) const;

  const Scenario* scenario_;
  const FESpace* space_;
  SparseMatrix mass_;
  Eigen::SimplicialLDLT<SparseMatrix> mass_solver_;
  mutable std::array<std::optional<LiftData>, 4> lift_cache_;
  mutable int lift_next_ = 0;
};

/// dU = V, dV = M^-1 (F_f - S - M0). Updates the state's stress cache.
struct Derivative {
  Eigen::VectorXd dU;
  Eigen::VectorXd dV;
};
Derivative rhs(const GalerkinSystem& system, State& state);

/// Classical RK4. `k1_accel` may supply the acceleration at the current state.
State step_rk4(const GalerkinSystem& system, const State& state, double dt,
               const Eigen::VectorXd* k1_accel = nullptr);

/**
 * Implicit midpoint rule
 *   U1 = U0 + dt (V0 + V1) / 2,   M (V1 - V0) = dt (F(tm) - S(tm, Um, Vm)),
 * solved for V1 by Newton's method with the consistent tangent. Throws
 * MidpointNoConvergence with the update norms when the tolerance is not met.
 */
State step_midpoint(const GalerkinSystem& system, const State& state, double dt, const SolverConfig& config,
                    const Eigen::VectorXd* accel = nullptr);

/// Read-only view handed to observers after every accepted step (and once at t = 0).
struct StepView {
  const State& state;
  /// Coefficient acceleration at the state.
  const Eigen::VectorXd& accel;
  const GalerkinSystem& system;
  int step;
};
using Observer = std::function<void(const StepView&)>;

struct Trajectory {
  std::vector<double> times;
  State final_state;
  /// U, V per recorded time (when SolverConfig::record_states).
  std::vector<Eigen::VectorXd> U;
  std::vector<Eigen::VectorXd> V;
  /// eps(u) and G_n(T) per recorded time and quadrature point (when record_history).
  std::vector<std::vector<SymTensor>> strain_history;
  std::vector<std::vector<SymTensor>> g_history;
  double alpha = 1.0;
  double beta = 1.0;

  int steps() const { return static_cast<int>(times.size()) - 1; }
};

/// Integrates from t = 0 to config.t_end; the last step is shortened when
/// t_end is not a multiple of dt. Failures are rethrown as StepFailure naming
/// the step and time.
Trajectory run(const Scenario& scenario, const FESpace& space, const SolverConfig& config,
               std::span<const Observer> observers = {}, std::optional<State> initial = std::nullopt);

/**
 * max over quadrature points of |eps(t_end) - eps_rec(t_end)|, where
 *   eps_rec(t) = e^{-a t} eps(0) + (1/beta) int_0^t e^{-a (t - s)} G_n(T(s)) ds,   a = alpha / beta,
 * with the recorded G_n(T) history interpolated linearly between steps and
 * the exponential weight integrated exactly. Throws ContractViolation without
 * a recorded history.
 */
double strain_history_residual(const Trajectory& trajectory);

}  // namespace strainlimit
