#include "hsp/field.hpp"

#include <memory>

#include "hsp/expression.hpp"

namespace hsp {

ScalarField linear_field(int n, double h) {
  ScalarField u;
  u.dim = n;
  u.eval = [h](const HalfSpacePoint& x) { return h * x.height(); };
  u.declared_h = h;
  u.name = "linear";
  return u;
}

ScalarField constant_field(int n, double c) {
  ScalarField u;
  u.dim = n;
  u.eval = [c](const HalfSpacePoint&) { return c; };
  u.name = "constant";
  return u;
}

ScalarField expression_field(const std::string& text, int n) {
  auto ex = std::make_shared<const Expression>(text, n);
  ScalarField u;
  u.dim = n;
  u.eval = [ex](const HalfSpacePoint& x) { return (*ex)(x.coords().span()); };
  u.name = text;
  return u;
}

ScalarField combine(double a, const ScalarField& u, double b, const ScalarField& v) {
  if (u.dim != v.dim) throw std::invalid_argument("cannot combine fields of different dimension");
  ScalarField w;
  w.dim = u.dim;
  w.eval = [a, b, fu = u.eval, fv = v.eval](const HalfSpacePoint& x) { return a * fu(x) + b * fv(x); };
  if (u.declared_h && v.declared_h) w.declared_h = a * *u.declared_h + b * *v.declared_h;
  w.provenance = u.provenance == v.provenance ? u.provenance : Provenance::user;
  w.name = "combination";
  w.singular = u.singular;
  w.singular.insert(w.singular.end(), v.singular.begin(), v.singular.end());
  w.boundary_features = u.boundary_features;
  w.boundary_features.insert(w.boundary_features.end(), v.boundary_features.begin(), v.boundary_features.end());
  return w;
}

double discrete_laplacian(const ScalarField& u, const HalfSpacePoint& x, double step) {
  const double c = u(x);
  double s = 0;
  for (int i = 0; i < x.dim(); ++i) {
    HalfSpacePoint p = x, m = x;
    p[i] += step;
    m[i] -= step;
    s += u(p) + u(m) - 2.0 * c;
  }
  return s / (step * step);
}

}  // namespace hsp
