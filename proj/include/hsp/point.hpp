#pragma once

#include <array>
#include <cmath>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>

namespace hsp {

/// Largest supported half-space dimension N.
inline constexpr int kMaxDim = 8;
/// Largest coordinate count anywhere in the library (the Huber lift adds 2).
inline constexpr int kMaxCoords = kMaxDim + 2;

/// Fixed-capacity coordinate vector. All geometry in the library is low
/// dimensional, so points live on the stack.
class Coords {
 public:
  Coords() = default;
  explicit Coords(int size) : size_(size) {
    if (size < 0 || size > kMaxCoords) throw std::invalid_argument("coordinate count out of range");
  }
  Coords(std::initializer_list<double> values) : Coords(static_cast<int>(values.size())) {
    int i = 0;
    for (double v : values) c_[i++] = v;
  }
  explicit Coords(std::span<const double> values) : Coords(static_cast<int>(values.size())) {
    for (int i = 0; i < size_; ++i) c_[i] = values[i];
  }

  int size() const { return size_; }
  double operator[](int i) const { return c_[i]; }
  double& operator[](int i) { return c_[i]; }
  std::span<const double> span() const { return {c_.data(), static_cast<size_t>(size_)}; }
  std::span<double> span() { return {c_.data(), static_cast<size_t>(size_)}; }
  const double* data() const { return c_.data(); }
  double* data() { return c_.data(); }

  double norm2() const {
    double s = 0;
    for (int i = 0; i < size_; ++i) s += c_[i] * c_[i];
    return s;
  }
  double norm() const { return std::sqrt(norm2()); }

  friend bool operator==(const Coords& a, const Coords& b) {
    if (a.size_ != b.size_) return false;
    for (int i = 0; i < a.size_; ++i)
      if (a.c_[i] != b.c_[i]) return false;
    return true;
  }

 private:
  std::array<double, kMaxCoords> c_{};
  int size_ = 0;
};

inline double dist2(const Coords& a, const Coords& b) {
  double s = 0;
  for (int i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

/// A point (x', x_N) of R^N. The last coordinate is the height x_N.
/// Heights may be negative (mirror images); operations that need interior
/// points check `interior()` themselves.
class HalfSpacePoint {
 public:
  HalfSpacePoint() = default;
  explicit HalfSpacePoint(const Coords& coords) : c_(coords) {
    if (coords.size() < 2 || coords.size() > kMaxDim)
      throw std::invalid_argument("half-space dimension must lie in [2, " + std::to_string(kMaxDim) + "]");
  }
  HalfSpacePoint(std::initializer_list<double> coords) : HalfSpacePoint(Coords(coords)) {}
  HalfSpacePoint(std::span<const double> tangential, double height)
      : HalfSpacePoint(join(tangential, height)) {}

  int dim() const { return c_.size(); }
  double height() const { return c_[c_.size() - 1]; }
  std::span<const double> tangential() const { return c_.span().first(c_.size() - 1); }
  const Coords& coords() const { return c_; }
  Coords& coords() { return c_; }
  double operator[](int i) const { return c_[i]; }
  double& operator[](int i) { return c_[i]; }
  bool interior() const { return height() > 0; }
  bool on_boundary() const { return height() == 0; }

  HalfSpacePoint with_height(double h) const {
    HalfSpacePoint p = *this;
    p[dim() - 1] = h;
    return p;
  }

  double norm() const { return c_.norm(); }
  double tangential_norm2() const {
    double s = 0;
    for (int i = 0; i + 1 < dim(); ++i) s += c_[i] * c_[i];
    return s;
  }

  friend bool operator==(const HalfSpacePoint& a, const HalfSpacePoint& b) { return a.c_ == b.c_; }

 private:
  static Coords join(std::span<const double> tangential, double height) {
    Coords c(static_cast<int>(tangential.size()) + 1);
    for (size_t i = 0; i < tangential.size(); ++i) c[static_cast<int>(i)] = tangential[i];
    c[static_cast<int>(tangential.size())] = height;
    return c;
  }

  Coords c_;
};

/// A point y' of the boundary hyperplane, identified with R^{N-1}.
using BoundaryPoint = Coords;

inline HalfSpacePoint lift_to_boundary(const BoundaryPoint& yprime) {
  return HalfSpacePoint(yprime.span(), 0.0);
}

inline double dist2(const HalfSpacePoint& a, const HalfSpacePoint& b) { return dist2(a.coords(), b.coords()); }

/// |x - y|_* = max{|x' - y'|, |x_N - y_N|}.
inline double cylindrical_distance(const HalfSpacePoint& a, const HalfSpacePoint& b) {
  double t = 0;
  for (int i = 0; i + 1 < a.dim(); ++i) {
    const double d = a[i] - b[i];
    t += d * d;
  }
  return std::max(std::sqrt(t), std::abs(a.height() - b.height()));
}

/// Reflection across the boundary hyperplane: (x', x_N) -> (x', -x_N).
inline HalfSpacePoint mirror(const HalfSpacePoint& x) { return x.with_height(-x.height()); }

/// Cylindrical ball B*_R(x) intersected with the open half-space.
struct CylinderBall {
  HalfSpacePoint center;
  double radius = 0;

  CylinderBall() = default;
  CylinderBall(HalfSpacePoint c, double r) : center(std::move(c)), radius(r) {
    if (!(r > 0)) throw std::invalid_argument("cylinder ball radius must be positive");
  }
  bool contains(const HalfSpacePoint& y) const {
    return y.height() > 0 && cylindrical_distance(center, y) < radius;
  }
  /// Membership in the annulus A*_R = B*_{2R} \ B*_R.
  bool annulus_contains(const HalfSpacePoint& y) const {
    if (y.height() <= 0) return false;
    const double d = cylindrical_distance(center, y);
    return d >= radius && d < 2 * radius;
  }
};

}  // namespace hsp
