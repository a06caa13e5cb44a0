#include "strainlimit/analytic_field.hpp"

#include <utility>

namespace strainlimit {

AnalyticField AnalyticField::zero(int dim) {
  AnalyticField f;
  f.dim = dim;
  auto zv = [dim](double, const SmallVector&) { return SmallVector::Zero(dim).eval(); };
  auto zg = [dim](double, const SmallVector&) { return SmallMatrix::Zero(dim, dim).eval(); };
  f.value = zv;
  f.dt_value = zv;
  f.dtt_value = zv;
  f.grad = zg;
  f.dt_grad = zg;
  f.time_smoothness = 1000;
  return f;
}

AnalyticField AnalyticField::steady(int dim, std::function<SmallVector(const SmallVector&)> v,
                                    std::function<SmallMatrix(const SmallVector&)> g) {
  AnalyticField f = zero(dim);
  f.value = [v = std::move(v)](double, const SmallVector& x) { return v(x); };
  f.grad = [g = std::move(g)](double, const SmallVector& x) { return g(x); };
  return f;
}

AnalyticField AnalyticField::modulated(const AnalyticField& spatial, std::function<double(double)> theta,
                                       std::function<double(double)> dtheta,
                                       std::function<double(double)> ddtheta) {
  AnalyticField f;
  f.dim = spatial.dim;
  auto v = spatial.value;
  auto g = spatial.grad;
  f.value = [v, theta](double t, const SmallVector& x) { return (theta(t) * v(0.0, x)).eval(); };
  f.dt_value = [v, dtheta](double t, const SmallVector& x) { return (dtheta(t) * v(0.0, x)).eval(); };
  f.dtt_value = [v, ddtheta](double t, const SmallVector& x) { return (ddtheta(t) * v(0.0, x)).eval(); };
  f.grad = [g, theta](double t, const SmallVector& x) { return (theta(t) * g(0.0, x)).eval(); };
  f.dt_grad = [g, dtheta](double t, const SmallVector& x) { return (dtheta(t) * g(0.0, x)).eval(); };
  f.time_smoothness = 2;
  return f;
}

AnalyticField AnalyticField::sum(const AnalyticField& a, const AnalyticField& b) {
  AnalyticField f;
  f.dim = a.dim;
  auto add_v = [](AnalyticField::ValueFn p, AnalyticField::ValueFn q) {
    return [p, q](double t, const SmallVector& x) { return (p(t, x) + q(t, x)).eval(); };
  };
  auto add_g = [](AnalyticField::GradFn p, AnalyticField::GradFn q) {
    return [p, q](double t, const SmallVector& x) { return (p(t, x) + q(t, x)).eval(); };
  };
  f.value = add_v(a.value, b.value);
  f.dt_value = add_v(a.dt_value, b.dt_value);
  f.dtt_value = add_v(a.dtt_value, b.dtt_value);
  f.grad = add_g(a.grad, b.grad);
  f.dt_grad = add_g(a.dt_grad, b.dt_grad);
  f.time_smoothness = std::min(a.time_smoothness, b.time_smoothness);
  return f;
}

SymTensor strain_of(const AnalyticField& u, double t, const SmallVector& x) { return sym_part(u.grad(t, x)); }

SymTensor strain_rate_of(const AnalyticField& u, double t, const SmallVector& x) {
  return sym_part(u.dt_grad(t, x));
}

SymTensor strain_expression(const AnalyticField& u, double alpha, double beta, double t, const SmallVector& x) {
  return sym_part(alpha * u.grad(t, x) + beta * u.dt_grad(t, x));
}

}  // namespace strainlimit
