#include "strainlimit/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "strainlimit/errors.hpp"

namespace strainlimit {
namespace {

// Fields read at t = 0 and frozen in time.
AnalyticField frozen_value(const AnalyticField& u) {
  auto v = u.value;
  auto g = u.grad;
  return AnalyticField::steady(
      u.dim, [v](const SmallVector& x) { return v(0.0, x); }, [g](const SmallVector& x) { return g(0.0, x); });
}

AnalyticField frozen_rate(const AnalyticField& u) {
  auto v = u.dt_value;
  auto g = u.dt_grad;
  return AnalyticField::steady(
      u.dim, [v](const SmallVector& x) { return v(0.0, x); }, [g](const SmallVector& x) { return g(0.0, x); });
}

double reference_limit(const ConstitutiveModel& model) {
  const double l = model.potential.limit();
  return std::isfinite(l) ? l : 1.0;
}

// max over quadrature points and time samples of |alpha eps(u) + beta d/dt eps(u)|
double sup_strain_expression(const AnalyticField& u, const ConstitutiveModel& model, const FESpace& space,
                             double t_end, int time_samples) {
  const int nt = t_end > 0.0 ? std::max(time_samples, 2) : 1;
  double sup = 0.0;
  for (int k = 0; k < nt; ++k) {
    const double t = nt == 1 ? 0.0 : t_end * k / (nt - 1);
    for (const QuadPoint& qp : space.quadrature()) {
      sup = std::max(sup, norm(strain_expression(u, model.alpha, model.beta, t, qp.x)));
    }
  }
  return sup;
}

// exp(1 - 1/(1 - r^2)) for r < 1, with r the scaled distance to the centre
AnalyticField unit_bump(const MeshSpec& mesh) {
  const int d = mesh.dim;
  SmallVector centre(d), half(d);
  for (int j = 0; j < d; ++j) {
    centre[j] = 0.5 * (mesh.domain[2 * j] + mesh.domain[2 * j + 1]);
    half[j] = 0.25 * (mesh.domain[2 * j + 1] - mesh.domain[2 * j]);
  }
  SmallVector dir = SmallVector::Ones(d) / std::sqrt(static_cast<double>(d));
  auto profile = [centre, half](const SmallVector& x, SmallVector* grad) {
    const SmallVector z = (x - centre).cwiseQuotient(half);
    const double r2 = z.squaredNorm();
    if (grad) grad->setZero(x.size());
    if (r2 >= 1.0) return 0.0;
    const double b = std::exp(1.0 - 1.0 / (1.0 - r2));
    if (grad) {
      const double factor = -b / ((1.0 - r2) * (1.0 - r2));
      *grad = factor * 2.0 * z.cwiseQuotient(half);
    }
    return b;
  };
  return AnalyticField::steady(
      d, [profile, dir](const SmallVector& x) { return (profile(x, nullptr) * dir).eval(); },
      [profile, dir, d](const SmallVector& x) {
        SmallVector g(d);
        profile(x, &g);
        return (dir * g.transpose()).eval();
      });
}

AnalyticField scaled(const AnalyticField& u, double s) {
  return AnalyticField::modulated(
      u, [s](double) { return s; }, [](double) { return 0.0; }, [](double) { return 0.0; });
}

}  // namespace

Mesh MeshSpec::build() const {
  if (dim == 1) {
    if (domain.size() != 2 || cells.size() != 1) throw InvalidInput("MeshSpec: 1D needs domain 'a b' and one cell count");
    return Mesh::interval(domain[0], domain[1], cells[0]);
  }
  if (dim == 2) {
    if (domain.size() != 4 || cells.size() != 2) {
      throw InvalidInput("MeshSpec: 2D needs domain 'a b c d' and two cell counts");
    }
    return Mesh::rectangle(domain[0], domain[1], domain[2], domain[3], cells[0], cells[1]);
  }
  throw InvalidInput("MeshSpec: dim must be 1 or 2");
}

AnalyticField lift_static_bc(const AnalyticField& u_initial, const AnalyticField& v0, double alpha, double beta) {
  const double a = alpha / beta;
  auto ui = u_initial.value;
  auto gi = u_initial.grad;
  auto vv = v0.value;
  auto gv = v0.grad;
  AnalyticField f;
  f.dim = u_initial.dim;
  // u_I + v0 (1 - e^{-a t}) / a
  f.value = [=](double t, const SmallVector& x) { return (ui(0.0, x) + vv(0.0, x) * (-std::expm1(-a * t) / a)).eval(); };
  f.grad = [=](double t, const SmallVector& x) { return (gi(0.0, x) + gv(0.0, x) * (-std::expm1(-a * t) / a)).eval(); };
  f.dt_value = [=](double t, const SmallVector& x) { return (vv(0.0, x) * std::exp(-a * t)).eval(); };
  f.dt_grad = [=](double t, const SmallVector& x) { return (gv(0.0, x) * std::exp(-a * t)).eval(); };
  f.dtt_value = [=](double t, const SmallVector& x) { return (vv(0.0, x) * (-a * std::exp(-a * t))).eval(); };
  f.time_smoothness = 1000;
  return f;
}

AnalyticField lift_timedep_bc(const AnalyticField& u_tilde, const AnalyticField& v0, double alpha, double beta,
                              std::span<const SmallVector> boundary_points) {
  for (const SmallVector& x : boundary_points) {
    const double mismatch = (v0.value(0.0, x) - u_tilde.dt_value(0.0, x)).norm();
    if (mismatch > 1e-10) {
      throw InvalidData("lift_timedep_bc: v0 differs from the boundary velocity at t = 0 by " +
                        std::to_string(mismatch));
    }
  }
  const double a = alpha / beta;
  const AnalyticField ut = u_tilde;
  auto vv = v0.value;
  auto gv = v0.grad;
  AnalyticField f;
  f.dim = u_tilde.dim;
  // u_tilde + (v0 - dt u_tilde(0)) (1 - e^{-a t}) / a
  f.value = [=](double t, const SmallVector& x) {
    return (ut.value(t, x) + (vv(0.0, x) - ut.dt_value(0.0, x)) * (-std::expm1(-a * t) / a)).eval();
  };
  f.grad = [=](double t, const SmallVector& x) {
    return (ut.grad(t, x) + (gv(0.0, x) - ut.dt_grad(0.0, x)) * (-std::expm1(-a * t) / a)).eval();
  };
  f.dt_value = [=](double t, const SmallVector& x) {
    return (ut.dt_value(t, x) + (vv(0.0, x) - ut.dt_value(0.0, x)) * std::exp(-a * t)).eval();
  };
  f.dt_grad = [=](double t, const SmallVector& x) {
    return (ut.dt_grad(t, x) + (gv(0.0, x) - ut.dt_grad(0.0, x)) * std::exp(-a * t)).eval();
  };
  f.dtt_value = [=](double t, const SmallVector& x) {
    return (ut.dtt_value(t, x) - a * (vv(0.0, x) - ut.dt_value(0.0, x)) * std::exp(-a * t)).eval();
  };
  f.time_smoothness = u_tilde.time_smoothness;
  return f;
}

std::vector<SmallVector> boundary_points(const FESpace& space) {
  std::vector<SmallVector> pts;
  for (int i = 0; i < space.mesh().n_nodes(); ++i) {
    if (space.mesh().on_boundary(i)) pts.push_back(space.mesh().node(i));
  }
  return pts;
}

double safety_margin(const Scenario& scenario, const FESpace& space, int time_samples) {
  const double limit = scenario.model.potential.limit();
  if (!std::isfinite(limit)) return kUnbounded;
  return limit - sup_strain_expression(scenario.lift, scenario.model, space, scenario.t_end, time_samples);
}

Scenario manufactured(std::string name, const AnalyticField& u_exact, const ConstitutiveModel& model,
                      const MeshSpec& mesh, double t_end, const FESpace& space) {
  model.validate();
  const double limit = model.potential.limit();
  const double sup = sup_strain_expression(u_exact, model, space, t_end, 64);
  if (std::isfinite(limit) && !(sup < 0.95 * limit)) {
    throw InvalidData("manufactured: sup |alpha eps + beta d/dt eps| = " + std::to_string(sup) +
                      " is not below 0.95 L = " + std::to_string(0.95 * limit));
  }

  Scenario s;
  s.name = std::move(name);
  s.mesh = mesh;
  s.model = model;
  s.t_end = t_end;
  s.exact = u_exact;

  // Static boundary data let the static lift carry only the initial data.
  bool steady_boundary = true;
  const auto bpts = boundary_points(space);
  for (int k = 0; k < 16 && steady_boundary; ++k) {
    const double t = t_end * k / 15.0;
    for (const SmallVector& x : bpts) {
      if ((u_exact.value(t, x) - u_exact.value(0.0, x)).norm() > 1e-14) {
        steady_boundary = false;
        break;
      }
    }
  }
  if (steady_boundary) {
    s.lift = lift_static_bc(frozen_value(u_exact), frozen_rate(u_exact), model.alpha, model.beta);
  } else {
    s.lift = lift_timedep_bc(u_exact, frozen_rate(u_exact), model.alpha, model.beta, bpts);
  }

  const int d = mesh.dim;
  SmallVector steps(d);
  for (int j = 0; j < d; ++j) steps[j] = 1e-4 * (mesh.domain[2 * j + 1] - mesh.domain[2 * j]);
  s.forcing = [u_exact, model, steps, d](double t, const SmallVector& x) {
    auto stress = [&](const SmallVector& y) {
      return invert(model, strain_expression(u_exact, model.alpha, model.beta, t, y));
    };
    SmallVector div = SmallVector::Zero(d);
    for (int j = 0; j < d; ++j) {
      auto central = [&](double h) {
        SmallVector xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        return (stress(xp) - stress(xm)) * (0.5 / h);
      };
      // two-step Richardson: (4 D(h/2) - D(h)) / 3
      const SymTensor dj = (central(0.5 * steps[j]) * 4.0 - central(steps[j])) * (1.0 / 3.0);
      for (int i = 0; i < d; ++i) div[i] += dj(i, j);
    }
    return (u_exact.dtt_value(t, x) - div).eval();
  };
  return s;
}

Scenario gaussian_pluck(const ConstitutiveModel& model, const MeshSpec& mesh, double t_end, double margin,
                        double amplitude_scale) {
  model.validate();
  const FESpace space(mesh.build());
  const AnalyticField bump = unit_bump(mesh);
  const double unit_sup = sup_strain_expression(bump, model, space, 0.0, 1);
  const double amplitude = amplitude_scale * (reference_limit(model) - margin) / unit_sup;

  Scenario s;
  s.name = "gaussian-pluck";
  s.mesh = mesh;
  s.model = model;
  s.t_end = t_end;
  s.lift = lift_static_bc(scaled(bump, amplitude), AnalyticField::zero(mesh.dim), model.alpha, model.beta);
  return s;
}

Scenario near_limit(const ConstitutiveModel& model, const MeshSpec& mesh, double t_end, double amplitude_scale) {
  Scenario s = gaussian_pluck(model, mesh, t_end, 0.02, amplitude_scale);
  s.name = "near-limit";
  return s;
}

Scenario standing_wave(const ConstitutiveModel& model, const MeshSpec& mesh, double t_end, double amplitude_scale) {
  model.validate();
  const int d = mesh.dim;
  const double a = mesh.domain[0];
  const double kx = std::numbers::pi / (mesh.domain[1] - mesh.domain[0]);
  const double c = d == 2 ? mesh.domain[2] : 0.0;
  const double ky = d == 2 ? std::numbers::pi / (mesh.domain[3] - mesh.domain[2]) : 0.0;
  const double omega = kx;
  // sup |alpha eps + beta d/dt eps| <= A sqrt(kx^2 + ky^2/2) sqrt(alpha^2 + beta^2 omega^2)
  const double gain = std::sqrt(kx * kx + 0.5 * ky * ky) *
                      std::sqrt(model.alpha * model.alpha + model.beta * model.beta * omega * omega);
  const double amp = amplitude_scale * 0.5 * reference_limit(model) / gain;

  const AnalyticField shape = AnalyticField::steady(
      d,
      [=](const SmallVector& x) {
        SmallVector v = SmallVector::Zero(d);
        v[0] = amp * std::sin(kx * (x[0] - a)) * (d == 2 ? std::sin(ky * (x[1] - c)) : 1.0);
        return v;
      },
      [=](const SmallVector& x) {
        SmallMatrix g = SmallMatrix::Zero(d, d);
        const double sy = d == 2 ? std::sin(ky * (x[1] - c)) : 1.0;
        g(0, 0) = amp * kx * std::cos(kx * (x[0] - a)) * sy;
        if (d == 2) g(0, 1) = amp * ky * std::sin(kx * (x[0] - a)) * std::cos(ky * (x[1] - c));
        return g;
      });
  const AnalyticField u = AnalyticField::modulated(
      shape, [omega](double t) { return std::cos(omega * t); },
      [omega](double t) { return -omega * std::sin(omega * t); },
      [omega](double t) { return -omega * omega * std::cos(omega * t); });
  const FESpace space(mesh.build());
  return manufactured("standing-wave", u, model, mesh, t_end, space);
}

Scenario linear_ramp(const ConstitutiveModel& model, const MeshSpec& mesh, double t_end, double amplitude_scale) {
  model.validate();
  const int d = mesh.dim;
  // u = s x, eps = s I, |alpha eps| = alpha s sqrt(d)
  const double s = amplitude_scale * 0.5 * reference_limit(model) / (model.alpha * std::sqrt(static_cast<double>(d)));
  const AnalyticField u = AnalyticField::steady(
      d, [s](const SmallVector& x) { return (s * x).eval(); },
      [s, d](const SmallVector&) { return (s * SmallMatrix::Identity(d, d)).eval(); });
  const FESpace space(mesh.build());
  return manufactured("linear-ramp", u, model, mesh, t_end, space);
}

std::vector<std::string> scenario_names() {
  return {"gaussian-pluck", "near-limit", "standing-wave", "manufactured:standing-wave", "manufactured:linear-ramp"};
}

Scenario make_scenario(const std::string& name, const ConstitutiveModel& model, const MeshSpec& mesh, double t_end,
                       double amplitude_scale) {
  if (name == "gaussian-pluck") return gaussian_pluck(model, mesh, t_end, 0.3, amplitude_scale);
  if (name == "near-limit") return near_limit(model, mesh, t_end, amplitude_scale);
  if (name == "standing-wave" || name == "manufactured:standing-wave") {
    return standing_wave(model, mesh, t_end, amplitude_scale);
  }
  if (name == "manufactured:linear-ramp") return linear_ramp(model, mesh, t_end, amplitude_scale);
  throw InvalidInput("unknown scenario '" + name + "'");
}

}  // namespace strainlimit
