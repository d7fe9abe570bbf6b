#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hsp/point.hpp"

namespace hsp {

enum class Provenance { assembled, corpus, user };

/// A function u on the open half-space. Evaluation may return +-inf as a
/// sentinel (e.g. at an atom of the Green potential).
struct ScalarField {
  int dim = 0;
  std::function<double(const HalfSpacePoint&)> eval;
  std::optional<double> declared_h;
  Provenance provenance = Provenance::user;
  std::string name;
  /// Interior points where u is singular or sharply peaked.
  std::vector<Coords> singular;
  /// Boundary points y' near which u is rough (mass of the boundary data).
  std::vector<Coords> boundary_features;

  double operator()(const HalfSpacePoint& x) const { return eval(x); }
};

ScalarField linear_field(int n, double h);
ScalarField constant_field(int n, double c);
/// Field given by an expression over x1..xN (see Expression).
ScalarField expression_field(const std::string& text, int n);
/// a*u + b*v pointwise; singular points and features are merged.
ScalarField combine(double a, const ScalarField& u, double b, const ScalarField& v);

/// 2N-point centred Laplacian of u at x with the given step.
double discrete_laplacian(const ScalarField& u, const HalfSpacePoint& x, double step);

}  // namespace hsp
