#include "strainlimit/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "strainlimit/errors.hpp"

namespace strainlimit {

bool EnergyLedger::finite() const { return std::isfinite(elastic) && std::isfinite(dissipation_rate); }

EnergyLedger energy_snapshot(const GalerkinSystem& system, const State& state, const Eigen::VectorXd& accel) {
  const ConstitutiveModel& model = system.model();
  const FESpace& space = system.space();
  if (static_cast<int>(state.stress.size()) != space.n_qp()) {
    throw ContractViolation("energy_snapshot: state has no stress cache");
  }
  const QPFields f = system.fields(state, &accel);
  const double alpha = model.alpha;
  const double limit = model.limit() * (1.0 - 1e-12);

  EnergyLedger led;
  led.t = state.t;
  bool suspended = false;
  for (int q = 0; q < space.n_qp(); ++q) {
    const double w = space.quadrature()[q].weight;
    const SymTensor& t = state.stress[q];
    led.kinetic += 0.5 * w * f.velocity[q].squaredNorm();

    const SymTensor e0 = alpha * f.strain[q];
    const double e0n = norm(e0);
    if (e0n >= limit) suspended = true;
    if (!suspended) {
      const SymTensor t0 = invert(model, e0);
      const double r0 = norm(t0);
      led.elastic += w * (e0n * r0 - model.potential_value(r0)) / alpha;
      led.dissipation_rate += w * dissipation_pair(model, t, t0) / model.beta;
    }

    led.external_power += w * (f.forcing[q].dot(f.velocity[q] - f.lift_velocity[q]) +
                               dot(t, f.lift_strain_rate[q]) + f.lift_velocity[q].dot(f.acceleration[q]));
  }
  if (suspended) {
    led.elastic = kUnbounded;
    led.dissipation_rate = std::numeric_limits<double>::quiet_NaN();
  }
  return led;
}

void EnergyRecorder::operator()(const StepView& view) {
  EnergyLedger led = energy_snapshot(view.system, view.state, view.accel);
  if (!rows_.empty()) {
    const EnergyLedger& prev = rows_.back();
    const double h = led.t - prev.t;
    led.dissipation_cum = prev.dissipation_cum + 0.5 * h * (prev.dissipation_rate + led.dissipation_rate);
    led.external_cum = prev.external_cum + 0.5 * h * (prev.external_power + led.external_power);
  }
  const EnergyLedger& first = rows_.empty() ? led : rows_.front();
  led.balance_residual = led.kinetic + led.elastic - (first.kinetic + first.elastic) + led.dissipation_cum -
                         led.external_cum;
  if (!led.finite() || !first.finite()) led.balance_residual = std::numeric_limits<double>::quiet_NaN();
  rows_.push_back(led);
}

double energy_balance_residual(const std::vector<EnergyLedger>& rows) {
  double worst = 0.0;
  for (const EnergyLedger& r : rows) {
    if (std::isnan(r.balance_residual)) return std::numeric_limits<double>::quiet_NaN();
    worst = std::max(worst, std::abs(r.balance_residual));
  }
  return worst;
}

double max_energy_increase(const std::vector<EnergyLedger>& rows) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < rows.size(); ++k) {
    worst = std::max(worst, (rows[k].kinetic + rows[k].elastic) - (rows[k - 1].kinetic + rows[k - 1].elastic));
  }
  return rows.size() < 2 ? 0.0 : worst;
}

MonitorRecord monitor_snapshot(const GalerkinSystem& system, const State& state) {
  const auto expr = system.strain_expression(state.t, state.U, state.V);
  const QPFields f = system.fields(state);
  MonitorRecord rec;
  rec.t = state.t;
  for (std::size_t q = 0; q < expr.size(); ++q) {
    rec.max_strain_expr = std::max(rec.max_strain_expr, norm(expr[q]));
    rec.max_eps = std::max(rec.max_eps, norm(f.strain[q]));
  }
  for (const SymTensor& t : state.stress) rec.max_stress = std::max(rec.max_stress, norm(t));
  const double limit = system.model().potential.limit();
  rec.margin = std::isfinite(limit) ? limit - rec.max_strain_expr : kUnbounded;
  return rec;
}

}  // namespace strainlimit
