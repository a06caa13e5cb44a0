#pragma once

#include <vector>

#include "strainlimit/dynamics.hpp"

namespace strainlimit {

/**
 * Energy bookkeeping of a state:
 *   kinetic     = 1/2 int |d/dt u|^2
 *   elastic     = int psi(eps),  psi(eps) = F*(alpha |eps|) / alpha,  F the potential of G_n
 *   dissipation = (1/beta) int (T - T0) . (G_n(T) - G_n(T0)),   G_n(T0) = alpha eps
 *   external    = int f . (d/dt u - d/dt u0) + int T . d/dt eps(u0) + int d/dt u0 . d2/dt2 u
 * The external power collects everything supplied through the forcing and the
 * lift; for f = 0 and a lift at rest it vanishes. All integrals use the space's
 * quadrature, for which d/dt (kinetic + elastic) = external - dissipation holds
 * along exact solutions of the Galerkin system.
 *
 * When the potential is strain limiting, there is no regulariser and
 * alpha |eps| >= L somewhere, elastic is kUnbounded and the dissipation is NaN.
 */
struct EnergyLedger {
  double t = 0.0;
  double kinetic = 0.0;
  double elastic = 0.0;
  double dissipation_rate = 0.0;
  double external_power = 0.0;
  /// Trapezoidal time integrals since t = 0 (filled by EnergyRecorder).
  double dissipation_cum = 0.0;
  double external_cum = 0.0;
  /// KE + EE - (KE + EE)(0) + dissipation_cum - external_cum; NaN while suspended.
  double balance_residual = 0.0;

  bool finite() const;
};

/// Ledger of a state with the given coefficient acceleration; cumulative fields are zero.
EnergyLedger energy_snapshot(const GalerkinSystem& system, const State& state, const Eigen::VectorXd& accel);

/// Observer accumulating ledgers step by step.
class EnergyRecorder {
 public:
  void operator()(const StepView& view);
  const std::vector<EnergyLedger>& rows() const { return rows_; }

 private:
  std::vector<EnergyLedger> rows_;
};

/// max_t |balance_residual|; NaN when the residual was suspended at any recorded time.
double energy_balance_residual(const std::vector<EnergyLedger>& rows);

/// Largest step-to-step increase of KE + EE (<= 0 means nonincreasing).
double max_energy_increase(const std::vector<EnergyLedger>& rows);

/// Strain-limit monitor of a state.
struct MonitorRecord {
  double t = 0.0;
  /// max_qp |alpha eps + beta d/dt eps|
  double max_strain_expr = 0.0;
  /// L - max_strain_expr with L the limit of the unregularised potential (kUnbounded if none).
  double margin = 0.0;
  double max_eps = 0.0;
  double max_stress = 0.0;
};

MonitorRecord monitor_snapshot(const GalerkinSystem& system, const State& state);

class StrainMonitor {
 public:
  void operator()(const StepView& view) { rows_.push_back(monitor_snapshot(view.system, view.state)); }
  const std::vector<MonitorRecord>& rows() const { return rows_; }

 private:
  std::vector<MonitorRecord> rows_;
};

}  // namespace strainlimit
