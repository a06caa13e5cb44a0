#include "strainlimit/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <random>

#include <Eigen/Eigenvalues>

#include "strainlimit/constitutive.hpp"
#include "strainlimit/errors.hpp"
#include "strainlimit/fespace.hpp"
#include "strainlimit/scenarios.hpp"

namespace strainlimit {
namespace {

struct Variant {
  std::string label;
  ConstitutiveModel model;
  double max_radius;
  /// Finite differences need |T| well away from a kink at T = 0.
  double fd_min_radius;
};

ConstitutiveModel make_model(ScalarPotential pot, std::optional<int> n,
                             RegularizerKind kind = RegularizerKind::LinearTikhonov, double reg_p = 2.0) {
  ConstitutiveModel m;
  m.potential = pot;
  m.reg_n = n;
  m.reg_kind = kind;
  m.reg_exponent = reg_p;
  return m;
}

std::vector<Variant> variants() {
  return {
      {"prototype q=1 n=10", make_model(ScalarPotential::prototype(1.0), 10), 1e3, 1e-2},
      {"prototype q=2 n=10", make_model(ScalarPotential::prototype(2.0), 10), 1e3, 0.0},
      {"prototype q=10 n=10", make_model(ScalarPotential::prototype(10.0), 10), 1e3, 0.0},
      {"prototype q=2", make_model(ScalarPotential::prototype(2.0), std::nullopt), 10.0, 0.0},
      {"powerlaw p=3 power-reg n=10",
       make_model(ScalarPotential::power_law(3.0), 10, RegularizerKind::PowerTikhonov, 3.0), 1e2, 0.0},
      {"powerlaw p=1.5 n=10", make_model(ScalarPotential::power_law(1.5), 10), 1e2, 1e-2},
      {"linear n=10", make_model(ScalarPotential::linear(), 10), 1e3, 0.0},
  };
}

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  /// Random direction scaled to a log-uniform radius in [lo, hi].
  SymTensor tensor(int dim, double lo, double hi) {
    SymTensor t(dim);
    double nrm = 0.0;
    while (nrm == 0.0) {
      for (int k = 0; k < t.size(); ++k) t[k] = normal_(rng_);
      nrm = norm(t);
    }
    const double r = std::exp(std::log(lo) + uniform_(rng_) * (std::log(hi) - std::log(lo)));
    return (r / nrm) * t;
  }
  double uniform(double a, double b) { return a + (b - a) * uniform_(rng_); }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_;
  std::uniform_real_distribution<double> uniform_;
};

/// Tracks max of a nonnegative "violation ratio" quantity.
struct Tally {
  double worst = 0.0;
  long samples = 0;
  bool ok = true;
  void add(double value, double bound) {
    ++samples;
    worst = std::max(worst, value);
    if (!(value <= bound)) ok = false;
  }
};

PropertyResult result(std::string group, std::string name, const Tally& t, double bound) {
  return {std::move(group), std::move(name), t.ok, t.worst, bound, t.samples};
}

}  // namespace

std::vector<PropertyResult> constitutive_properties(const PropertyOptions& opt) {
  std::vector<PropertyResult> out;
  Sampler s(opt.seed);
  for (const Variant& v : variants()) {
    const ConstitutiveModel& m = v.model;
    const double limit = m.limit();
    Tally mono, bounded, round_trip, forward, newton, fenchel, jac;
    for (int dim = 1; dim <= 3; ++dim) {
      for (int i = 0; i < opt.samples; ++i) {
        const SymTensor t = s.tensor(dim, 1e-4, v.max_radius);
        const SymTensor w = s.tensor(dim, 1e-4, v.max_radius);
        const SymTensor gt = g_apply(m, t);
        const double tn = norm(t);

        // pairing >= -1e-14; report the negative part
        mono.add(std::max(0.0, -dot(gt - g_apply(m, w), t - w)), 1e-14);
        if (std::isfinite(limit)) bounded.add(std::max(0.0, norm(gt) - limit), 0.0);

        round_trip.add(norm(invert(m, gt) - t) / (1.0 + tn), 1e-10);
        // g_apply(invert(E)) = E on the admissible set
        const SymTensor e = std::isfinite(limit) ? s.tensor(dim, 1e-4, 0.999 * limit) : s.tensor(dim, 1e-4, 1e3);
        forward.add(norm(g_apply(m, invert(m, e)) - e) / (1.0 + norm(e)), 1e-10);
        if (i % 10 == 0) newton.add(norm(invert_tensor_newton(m, gt) - t) / (1.0 + tn), 1e-10);

        fenchel.add(fenchel_residual(m, t) / (1.0 + tn), 1e-8);

        if (tn >= v.fd_min_radius) {
          const SymTensor dir = s.tensor(dim, 1.0, 1.0);
          const double h = 1e-5 * std::max(1.0, tn);
          if (tn > 2.0 * h || v.fd_min_radius == 0.0) {
            const PackedOperator j = g_jacobian(m, t);
            const SymTensor fd = (1.0 / (2.0 * h)) * (g_apply(m, t + h * dir) - g_apply(m, t - h * dir));
            const double jn = j.operatorNorm();
            jac.add(norm(fd - apply(j, dir)) / std::max(1.0, jn), 1e-6);
          }
        }
      }
    }
    const std::string g = "constitutive";
    out.push_back(result(g, v.label + ": monotonicity deficit", mono, 1e-14));
    if (std::isfinite(limit)) out.push_back(result(g, v.label + ": |G| - L", bounded, 0.0));
    out.push_back(result(g, v.label + ": invert(G(T)) - T", round_trip, 1e-10));
    out.push_back(result(g, v.label + ": G(invert(E)) - E", forward, 1e-10));
    out.push_back(result(g, v.label + ": tensor Newton inverse - T", newton, 1e-10));
    out.push_back(result(g, v.label + ": Fenchel residual", fenchel, 1e-8));
    out.push_back(result(g, v.label + ": Jacobian vs central differences", jac, 1e-6));
  }

  // norm bound |A_n(T)| <= 3 (1/n + 1/(1 + |T|)) for the prototype family
  Tally bound;
  for (double q : {1.0, 2.0, 10.0}) {
    for (int n : {1, 10, 100}) {
      const ConstitutiveModel m = make_model(ScalarPotential::prototype(q), n);
      for (int dim = 1; dim <= 3; ++dim) {
        std::vector<SymTensor> ts{SymTensor::zero(dim)};
        for (double r : {0.1, 1.0, 10.0, 100.0, 1000.0}) {
          for (int k = 0; k < 8; ++k) ts.push_back(s.tensor(dim, r, r));
        }
        for (const SymTensor& t : ts) {
          const double ratio = g_jacobian(m, t).operatorNorm() / (3.0 * (1.0 / n + 1.0 / (1.0 + norm(t))));
          bound.add(ratio, 1.0);
          if (!jacobian_norm_bound_check(m, t)) bound.ok = false;
        }
      }
    }
  }
  out.push_back(result("constitutive", "Jacobian norm / 3 (1/n + 1/(1+|T|))", bound, 1.0));
  return out;
}

std::vector<PropertyResult> closed_form_values() {
  std::vector<PropertyResult> out;
  auto check = [&](const std::string& name, double got, double want, double tol) {
    Tally t;
    t.add(std::abs(got - want), tol);
    out.push_back(result("closed-form", name, t, tol));
  };
  const ConstitutiveModel q2 = make_model(ScalarPotential::prototype(2.0), std::nullopt);
  const ConstitutiveModel q1 = make_model(ScalarPotential::prototype(1.0), std::nullopt);
  const SymTensor one = SymTensor::identity(1);
  check("prototype q=2: G(1) = 1/sqrt(2)", g_apply(q2, one)[0], 1.0 / std::sqrt(2.0), 1e-10);
  check("prototype q=2: G^-1(0.6) = 0.75", invert(q2, 0.6 * one)[0], 0.75, 1e-10);
  check("prototype q=2: phi*(0.6) = 0.2", phi_star(q2.potential, 0.6), 0.2, 1e-10);
  check("prototype q=1: G(3) = 0.75", g_apply(q1, 3.0 * one)[0], 0.75, 1e-12);
  check("prototype q=2: (2-1)(G(2) - G(1))", dissipation_pair(q2, 2.0 * one, one),
        2.0 / std::sqrt(5.0) - 1.0 / std::sqrt(2.0), 1e-12);
  {
    Tally t;
    t.add(is_unbounded(phi_star(q1.potential, 1.0)) ? 0.0 : 1.0, 0.0);
    out.push_back(result("closed-form", "prototype q=1: phi*(1) unbounded", t, 0.0));
  }
  {
    const ConstitutiveModel m = make_model(ScalarPotential::prototype(2.0), 10);
    const PackedOperator j = g_jacobian(m, SymTensor::zero(2));
    Tally t;
    t.add((j - 1.1 * PackedOperator::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-15);
    out.push_back(result("closed-form", "prototype q=2 n=10: Jacobian at 0 = 1.1 I", t, 1e-15));
  }
  return out;
}

std::vector<PropertyResult> lift_properties(int samples, std::uint64_t seed) {
  std::vector<PropertyResult> out;
  Sampler s(seed);
  const double alpha = 0.7;
  const double beta = 1.3;
  for (int dim = 1; dim <= 2; ++dim) {
    const double pi = std::acos(-1.0);
    // bubble vanishing on the boundary of [0, 1]^d, with its gradient
    auto bubble = [dim, pi](const SmallVector& x) {
      double b = 1.0;
      for (int j = 0; j < dim; ++j) b *= std::sin(pi * x[j]);
      return b;
    };
    auto bubble_grad = [dim, pi](const SmallVector& x) {
      SmallVector g(dim);
      for (int j = 0; j < dim; ++j) {
        double v = pi * std::cos(pi * x[j]);
        for (int k = 0; k < dim; ++k) {
          if (k != j) v *= std::sin(pi * x[k]);
        }
        g[j] = v;
      }
      return g;
    };
    SmallVector dir_a(dim), dir_b(dim);
    for (int j = 0; j < dim; ++j) {
      dir_a[j] = 1.0 + 0.5 * j;
      dir_b[j] = 0.3 - 0.8 * j;
    }

    // u_I = x-dependent smooth field (not vanishing on the boundary), v0 = bubble * dir_b
    const AnalyticField u_i = AnalyticField::steady(
        dim,
        [dir_a, dim](const SmallVector& x) {
          SmallVector v(dim);
          for (int c = 0; c < dim; ++c) v[c] = dir_a[c] * std::cos(x.sum() + c) + 0.2 * x[c] * x[c];
          return v;
        },
        [dir_a, dim](const SmallVector& x) {
          SmallMatrix g(dim, dim);
          for (int c = 0; c < dim; ++c) {
            for (int j = 0; j < dim; ++j) g(c, j) = -dir_a[c] * std::sin(x.sum() + c) + (c == j ? 0.4 * x[c] : 0.0);
          }
          return g;
        });
    const AnalyticField v0 = AnalyticField::steady(
        dim, [=](const SmallVector& x) { return (bubble(x) * dir_b).eval(); },
        [=](const SmallVector& x) { return (dir_b * bubble_grad(x).transpose()).eval(); });

    // u_tilde(t, x) = u_I(x) (1 + t^2 / 2) + t w(x), so d/dt u_tilde(0) = w
    const AnalyticField wfield = AnalyticField::steady(
        dim,
        [dim](const SmallVector& x) {
          SmallVector v(dim);
          for (int c = 0; c < dim; ++c) v[c] = std::sin(2.0 * x[c] + 0.5) * (1.0 + x.sum());
          return v;
        },
        [dim](const SmallVector& x) {
          SmallMatrix g(dim, dim);
          for (int c = 0; c < dim; ++c) {
            for (int j = 0; j < dim; ++j) {
              g(c, j) = std::sin(2.0 * x[c] + 0.5) + (c == j ? 2.0 * std::cos(2.0 * x[c] + 0.5) * (1.0 + x.sum()) : 0.0);
            }
          }
          return g;
        });
    const AnalyticField u_tilde = AnalyticField::sum(
        AnalyticField::modulated(
            u_i, [](double t) { return 1.0 + 0.5 * t * t; }, [](double t) { return t; }, [](double) { return 1.0; }),
        AnalyticField::modulated(
            wfield, [](double t) { return t; }, [](double) { return 1.0; }, [](double) { return 0.0; }));
    // compatible initial velocity: w on the boundary, plus an interior bubble
    const AnalyticField v0_td = AnalyticField::sum(wfield, v0);

    std::vector<SmallVector> bpts;
    const Mesh mesh = dim == 1 ? Mesh::interval(0.0, 1.0, 8) : Mesh::rectangle(0.0, 1.0, 0.0, 1.0, 4, 4);
    for (int i = 0; i < mesh.n_nodes(); ++i) {
      if (mesh.on_boundary(i)) bpts.push_back(mesh.node(i));
    }

    const AnalyticField st = lift_static_bc(u_i, v0, alpha, beta);
    const AnalyticField td = lift_timedep_bc(u_tilde, v0_td, alpha, beta, bpts);

    Tally st_init, st_expr, st_bdry, td_init, td_rate, td_expr, td_bdry;
    auto random_point = [&]() {
      SmallVector x(dim);
      for (int j = 0; j < dim; ++j) x[j] = s.uniform(0.0, 1.0);
      return x;
    };
    auto boundary_point = [&]() {
      SmallVector x = random_point();
      const int j = static_cast<int>(s.uniform(0.0, dim));
      x[std::min(j, dim - 1)] = s.uniform(0.0, 1.0) < 0.5 ? 0.0 : 1.0;
      return x;
    };
    for (int k = 0; k < samples; ++k) {
      const SmallVector x = random_point();
      const SmallVector xb = boundary_point();
      const double t = s.uniform(0.0, 2.0);

      st_init.add(std::max((st.value(0.0, x) - u_i.value(0.0, x)).norm(),
                           (st.dt_value(0.0, x) - v0.value(0.0, x)).norm()),
                  1e-12);
      const SymTensor target = alpha * strain_of(u_i, 0.0, x) + beta * strain_of(v0, 0.0, x);
      st_expr.add(norm(strain_expression(st, alpha, beta, t, x) - target), 1e-10);
      st_bdry.add((st.value(t, xb) - u_i.value(0.0, xb)).norm(), 1e-12);

      td_init.add(std::max((td.value(0.0, x) - u_tilde.value(0.0, x)).norm(),
                           (td.dt_value(0.0, x) - v0_td.value(0.0, x)).norm()),
                  1e-12);
      const SmallVector rate = u_tilde.dt_value(t, x) +
                               (v0_td.value(0.0, x) - u_tilde.dt_value(0.0, x)) * std::exp(-alpha * t / beta);
      td_rate.add((td.dt_value(t, x) - rate).norm(), 1e-12);
      const SymTensor expected = alpha * strain_of(u_tilde, t, x) +
                                 beta * (strain_rate_of(u_tilde, t, x) - strain_rate_of(u_tilde, 0.0, x) +
                                         strain_of(v0_td, 0.0, x));
      td_expr.add(norm(strain_expression(td, alpha, beta, t, x) - expected), 1e-10);
      td_bdry.add((td.value(t, xb) - u_tilde.value(t, xb)).norm(), 1e-12);
    }
    const std::string g = "lift d=" + std::to_string(dim);
    out.push_back(result(g, "static: u0(0) = u_I, d/dt u0(0) = v0", st_init, 1e-12));
    out.push_back(result(g, "static: alpha eps + beta d/dt eps constant in time", st_expr, 1e-10));
    out.push_back(result(g, "static: boundary values preserved", st_bdry, 1e-12));
    out.push_back(result(g, "time-dependent: u0(0) = u_I, d/dt u0(0) = v0", td_init, 1e-12));
    out.push_back(result(g, "time-dependent: d/dt u0 identity", td_rate, 1e-12));
    out.push_back(result(g, "time-dependent: alpha eps + beta d/dt eps identity", td_expr, 1e-10));
    out.push_back(result(g, "time-dependent: u0 = u_tilde on the boundary", td_bdry, 1e-12));

    // incompatible initial velocity must be rejected
    Tally reject;
    bool threw = false;
    try {
      (void)lift_timedep_bc(u_tilde, v0, alpha, beta, bpts);
    } catch (const InvalidData&) {
      threw = true;
    }
    reject.add(threw ? 0.0 : 1.0, 0.0);
    out.push_back(result(g, "time-dependent: incompatible v0 rejected", reject, 0.0));
  }
  return out;
}

std::vector<PropertyResult> property_suite(const PropertyOptions& options) {
  std::vector<PropertyResult> all = closed_form_values();
  for (auto&& r : constitutive_properties(options)) all.push_back(std::move(r));
  for (auto&& r : lift_properties(100)) all.push_back(std::move(r));
  return all;
}

bool print_results(std::ostream& out, const std::vector<PropertyResult>& results) {
  bool all = true;
  for (const PropertyResult& r : results) {
    all = all && r.passed;
    out << (r.passed ? "PASS " : "FAIL ") << '[' << r.group << "] " << r.name << ": worst " << std::setprecision(3)
        << std::scientific << r.worst << " (bound " << r.bound << ", " << r.samples << " samples)"
        << std::defaultfloat << '\n';
  }
  return all;
}

}  // namespace strainlimit
