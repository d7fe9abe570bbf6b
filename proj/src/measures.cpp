#include "hsp/measures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <random>

#include "hsp/domains.hpp"
#include "hsp/expression.hpp"
#include "hsp/kernels.hpp"

namespace hsp {

using nlohmann::json;

double Envelope::operator()(double r) const {
  switch (kind) {
    case Kind::compact:
      return r <= radius ? amp : 0.0;
    case Kind::power:
      return amp * std::pow(1.0 + r, -exponent);
    case Kind::gaussian: {
      const double t = std::max(r - radius, 0.0) / scale;
      return amp * std::exp(-t * t);
    }
  }
  return kInfinity;
}

double Envelope::tail(double R, int k) const {
  if (k != 0 && k != -2) throw std::invalid_argument("envelope tail power must be 0 or -2");
  switch (kind) {
    case Kind::compact:
      if (R >= radius) return 0.0;
      return k == 0 ? amp * (radius - R) : amp * (1.0 / R - 1.0 / radius);
    case Kind::power:
      if (k == 0) return exponent > 1 ? amp * std::pow(1.0 + R, 1.0 - exponent) / (exponent - 1.0) : kInfinity;
      // \int_R^\infty (1+r)^{-p} r^{-2} dr <= (1+R)^{-p} / R   (p >= 0)
      return exponent >= 0 ? amp * std::pow(1.0 + R, -exponent) / R : kInfinity;
    case Kind::gaussian: {
      const double over = std::max(radius - R, 0.0);
      const double t0 = amp * (over + 0.5 * scale * std::sqrt(std::numbers::pi) *
                                           std::erfc(std::max(R - radius, 0.0) / scale));
      return k == 0 ? t0 : t0 / (R * R);
    }
  }
  return kInfinity;
}

namespace {

Coords to_coords(const json& j, int n, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    throw MeasureError(std::string(what) + " must be an array of " + std::to_string(n) + " numbers");
  Coords c(n);
  for (int i = 0; i < n; ++i) {
    if (!j[i].is_number()) throw MeasureError(std::string(what) + " must contain numbers");
    c[i] = j[i].get<double>();
  }
  return c;
}

json from_coords(const Coords& c) {
  json a = json::array();
  for (int i = 0; i < c.size(); ++i) a.push_back(c[i]);
  return a;
}

double num(const json& p, const char* key, double dflt) {
  if (!p.contains(key)) return dflt;
  if (!p[key].is_number()) throw MeasureError(std::string("parameter '") + key + "' must be a number");
  return p[key].get<double>();
}

Coords coords_or_zero(const json& p, const char* key, int n) {
  return p.contains(key) ? to_coords(p[key], n, key) : Coords(n);
}

Envelope envelope_from_support(const json& s, int d, std::optional<Box>& box) {
  Envelope e;
  if (s.contains("box")) {
    const json& b = s["box"];
    if (!b.contains("lo") || !b.contains("hi")) throw MeasureError("support box needs lo and hi");
    box = Box(to_coords(b["lo"], d, "support.box.lo"), to_coords(b["hi"], d, "support.box.hi"));
    double r = 0;
    for (int i = 0; i < d; ++i) {
      const double m = std::max(std::abs(box->lo[i]), std::abs(box->hi[i]));
      r += m * m;
    }
    e.kind = Envelope::Kind::compact;
    e.radius = std::sqrt(r);
    e.amp = kInfinity;
    return e;
  }
  if (!s.contains("decay")) throw MeasureError("support descriptor needs 'box' or 'decay'");
  const json& dk = s["decay"];
  e.amp = num(s, "constant", 1.0);
  if (dk.is_string()) {
    const auto v = dk.get<std::string>();
    if (v != "inf" && v != "gaussian") throw MeasureError("decay must be a number, \"inf\" or \"gaussian\"");
    e.kind = Envelope::Kind::gaussian;
    e.scale = num(s, "scale", 1.0);
    e.radius = num(s, "offset", 0.0);
    if (!(e.scale > 0)) throw MeasureError("gaussian decay scale must be positive");
    return e;
  }
  if (!dk.is_number()) throw MeasureError("decay must be a number, \"inf\" or \"gaussian\"");
  e.kind = Envelope::Kind::power;
  e.exponent = dk.get<double>();
  return e;
}

json support_to_json(const Density& d) {
  const Envelope& e = d.envelope;
  if (d.support) return {{"box", {{"lo", from_coords(d.support->lo)}, {"hi", from_coords(d.support->hi)}}}};
  if (e.kind == Envelope::Kind::power) return {{"decay", e.exponent}, {"constant", e.amp}};
  return {{"decay", "gaussian"}, {"constant", e.amp}, {"scale", e.scale}, {"offset", e.radius}};
}

// Clip a box to the closed half-space when it lives in the interior.
std::optional<Box> clip(std::optional<Box> b, Side side) {
  if (!b || side == Side::boundary) return b;
  const int n = b->dim();
  b->lo[n - 1] = std::max(b->lo[n - 1], 0.0);
  if (b->hi[n - 1] <= b->lo[n - 1]) throw MeasureError("density support lies outside the half-space");
  return b;
}

}  // namespace

Density named_density(const std::string& name_in, int d, Side side, const json& params) {
  const json p = params.is_null() ? json::object() : params;
  if (!p.is_object()) throw MeasureError("density params must be an object");
  Density out;
  out.name = name_in == "lebesgue" ? "constant" : name_in;
  json np;
  if (out.name == "gauss") {
    const double amp = num(p, "amp", 1.0), s = num(p, "scale", 1.0);
    const Coords c = coords_or_zero(p, "center", d);
    if (!(s > 0)) throw MeasureError("gauss scale must be positive");
    out.f = [amp, s, c](const Coords& y) { return amp * std::exp(-dist2(y, c) / (s * s)); };
    out.envelope = {Envelope::Kind::gaussian, std::abs(amp), c.norm(), 0.0, s};
    out.peaks = {c};
    np = {{"amp", amp}, {"center", from_coords(c)}, {"scale", s}};
  } else if (out.name == "uniform_box") {
    if (!p.contains("lo") || !p.contains("hi")) throw MeasureError("uniform_box needs lo and hi");
    const double amp = num(p, "amp", 1.0);
    const Box b(to_coords(p["lo"], d, "lo"), to_coords(p["hi"], d, "hi"));
    out.f = [amp, b](const Coords& y) { return b.contains(y) ? amp : 0.0; };
    out.support = b;
    double r = 0;
    for (int i = 0; i < d; ++i) r += std::pow(std::max(std::abs(b.lo[i]), std::abs(b.hi[i])), 2);
    out.envelope = {Envelope::Kind::compact, std::abs(amp), std::sqrt(r), 0.0, 1.0};
    np = {{"amp", amp}, {"lo", from_coords(b.lo)}, {"hi", from_coords(b.hi)}};
  } else if (out.name == "bump") {
    const double amp = num(p, "amp", 1.0), w = num(p, "width", 1.0);
    const Coords c = coords_or_zero(p, "center", d);
    if (!(w > 0)) throw MeasureError("bump width must be positive");
    out.f = [amp, w, c](const Coords& y) {
      const double q = dist2(y, c) / (w * w);
      return q < 1.0 ? amp * std::exp(1.0 - 1.0 / (1.0 - q)) : 0.0;
    };
    Coords lo(d), hi(d);
    for (int i = 0; i < d; ++i) {
      lo[i] = c[i] - w;
      hi[i] = c[i] + w;
    }
    out.support = Box(lo, hi);
    out.envelope = {Envelope::Kind::compact, std::abs(amp), c.norm() + w, 0.0, 1.0};
    out.peaks = {c};
    np = {{"amp", amp}, {"center", from_coords(c)}, {"width", w}};
  } else if (out.name == "constant") {
    const double amp = num(p, "amp", 1.0);
    out.f = [amp](const Coords&) { return amp; };
    out.envelope = {Envelope::Kind::power, std::abs(amp), 0.0, 0.0, 1.0};
    np = {{"amp", amp}};
  } else {
    throw MeasureError("unknown density '" + name_in + "' (gauss, uniform_box, bump, constant, expression)");
  }
  out.support = clip(out.support, side);
  out.document = {{"name", out.name}, {"params", np}};
  return out;
}

namespace {

Density expression_density(const json& doc, int d, Side side) {
  Density out;
  out.name = "expression";
  const auto text = doc["expression"].get<std::string>();
  auto ex = std::make_shared<const Expression>(text, d);
  out.f = [ex](const Coords& y) { return (*ex)(y.span()); };
  if (!doc.contains("support")) throw MeasureError("expression densities must declare a support descriptor");
  std::optional<Box> box;
  out.envelope = envelope_from_support(doc["support"], d, box);
  if (box) {
    const Box b = *box;
    auto inner = out.f;
    out.f = [inner, b](const Coords& y) { return b.contains(y) ? inner(y) : 0.0; };
  }
  out.support = clip(box, side);
  out.document = {{"name", "expression"}, {"expression", text}};
  return out;
}

// Points spread over far shells; used to spot-check declared decay.
std::vector<Coords> far_samples(const Envelope& e, int d, Side side) {
  double r0 = 8.0;
  if (e.kind == Envelope::Kind::compact) r0 = 2.0 * (1.0 + e.radius);
  if (e.kind == Envelope::Kind::gaussian) r0 = e.radius + 3.0 * e.scale;
  std::mt19937_64 rng(0x5eedULL);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Coords> pts;
  for (int k = 0; k < 32; ++k) {
    Coords c(d);
    double nrm = 0;
    for (int i = 0; i < d; ++i) {
      c[i] = g(rng);
      nrm += c[i] * c[i];
    }
    nrm = std::sqrt(nrm);
    const double r = r0 * (1.0 + 3.0 * u(rng));
    for (int i = 0; i < d; ++i) c[i] *= r / nrm;
    if (side == Side::interior) c[d - 1] = std::abs(c[d - 1]);
    pts.push_back(c);
  }
  return pts;
}

void spot_check(const Density& den, int d, Side side) {
  for (const Coords& y : far_samples(den.envelope, d, side)) {
    const double v = std::abs(den(y));
    const double bound = den.envelope(y.norm());
    if (!(v <= 10.0 * bound + 1e-300))
      throw MeasureError("density '" + den.name + "' violates its declared decay at |y| = " + std::to_string(y.norm()));
  }
}

// Near-field samples used to check the sign of densities.
bool sign_check(const Density& den, int d, Side side, double sign) {
  std::mt19937_64 rng(0x51a7ULL);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double r = 4.0;
  if (den.support) {
    for (int i = 0; i < d; ++i) r = std::max(r, std::max(std::abs(den.support->lo[i]), std::abs(den.support->hi[i])));
  }
  for (const Coords& p : den.peaks) r = std::max(r, 2.0 * p.norm());
  for (int k = 0; k < 256; ++k) {
    Coords y(d);
    for (int i = 0; i < d; ++i) y[i] = r * u(rng);
    if (side == Side::interior) y[d - 1] = std::abs(y[d - 1]);
    if (sign * den(y) < 0) return false;
  }
  return true;
}

template <Side S>
Measure<S> parse(const json& doc, bool allow_signed) {
  Measure<S> m;
  m.dim = doc.at("dim").get<int>();
  if (m.dim < 2 || m.dim > kMaxDim) throw MeasureError("dim must lie in [2, " + std::to_string(kMaxDim) + "]");
  const int d = m.coord_dim();
  std::string mode = doc.value("mode", std::string("signed"));
  if (mode != "signed" && mode != "positive") throw MeasureError("mode must be 'signed' or 'positive'");
  const bool signed_ok = allow_signed && mode == "signed";

  if (doc.contains("atoms")) {
    if (!doc["atoms"].is_array()) throw MeasureError("atoms must be a list");
    for (const json& a : doc["atoms"]) {
      if (!a.contains("loc") || !a.contains("w")) throw MeasureError("atom needs loc and w");
      Atom at{to_coords(a["loc"], d, "atom loc"), a["w"].get<double>()};
      if (!std::isfinite(at.w)) throw MeasureError("atom weight must be finite");
      if (S == Side::interior && !(at.loc[d - 1] > 0))
        throw MeasureError("atom not interior: height " + std::to_string(at.loc[d - 1]) + " <= 0");
      if (at.w < 0) {
        if (!signed_ok) throw MeasureError("negative weight in positive-only context");
        at.w = -at.w;
        m.negative.atoms.push_back(at);
        m.is_signed = true;
      } else if (at.w > 0) {
        m.positive.atoms.push_back(at);
      }
    }
  }
  if (doc.contains("density")) {
    json list = doc["density"];
    if (list.is_object()) list = json::array({list});
    if (!list.is_array()) throw MeasureError("density must be an object or a list");
    for (const json& dd : list) {
      if (!dd.is_object()) throw MeasureError("density entry must be an object");
      Density den;
      bool negative = false;
      if (dd.contains("expression")) {
        den = expression_density(dd, d, S);
        const auto part = dd.value("part", std::string("positive"));
        if (part != "positive" && part != "negative") throw MeasureError("density part must be positive or negative");
        negative = part == "negative";
        den.document["part"] = part;
      } else {
        if (!dd.contains("name")) throw MeasureError("density needs a name or an expression");
        den = named_density(dd["name"].get<std::string>(), d, S, dd.value("params", json::object()));
        if (dd.contains("support")) {
          std::optional<Box> box;
          den.envelope = envelope_from_support(dd["support"], d, box);
          if (box) den.support = clip(box, S);
          den.document["support"] = dd["support"];
        }
        const double amp = den.document["params"].value("amp", 1.0);
        if (amp < 0) {
          negative = true;
          json np = den.document["params"];
          np["amp"] = -amp;
          Density flipped = named_density(den.document["name"], d, S, np);
          flipped.envelope = den.envelope;
          flipped.envelope.amp = std::abs(flipped.envelope.amp);
          flipped.support = den.support;
          flipped.document = den.document;
          den = std::move(flipped);
        }
      }
      if (!den.document.contains("support")) den.document["support"] = support_to_json(den);
      if (negative && !signed_ok) throw MeasureError("negative density in positive-only context");
      if (!sign_check(den, d, S, 1.0)) throw MeasureError("density '" + den.name + "' takes negative values");
      spot_check(den, d, S);
      if (negative) {
        m.negative.densities.push_back(std::move(den));
        m.is_signed = true;
      } else {
        m.positive.densities.push_back(std::move(den));
      }
    }
  }
  return m;
}

template <Side S>
json serialize_impl(const Measure<S>& m) {
  json j;
  j["dim"] = m.dim;
  j["side"] = S == Side::interior ? "interior" : "boundary";
  j["mode"] = "signed";
  json atoms = json::array();
  for (const Atom& a : m.positive.atoms) atoms.push_back({{"loc", from_coords(a.loc)}, {"w", a.w}});
  for (const Atom& a : m.negative.atoms) atoms.push_back({{"loc", from_coords(a.loc)}, {"w", -a.w}});
  j["atoms"] = atoms;
  json dens = json::array();
  for (const Density& d : m.positive.densities) dens.push_back(d.document);
  for (const Density& d : m.negative.densities) dens.push_back(d.document);
  j["density"] = dens;
  return j;
}

}  // namespace

AnyMeasure load_measure(const json& doc, bool allow_signed) {
  if (!doc.is_object()) throw MeasureError("measure document must be an object");
  if (!doc.contains("dim")) throw MeasureError("measure document needs 'dim'");
  const auto side = doc.value("side", std::string("interior"));
  try {
    if (side == "interior") return parse<Side::interior>(doc, allow_signed);
    if (side == "boundary") return parse<Side::boundary>(doc, allow_signed);
  } catch (const json::exception& e) {
    throw MeasureError(std::string("malformed measure document: ") + e.what());
  } catch (const ExpressionError& e) {
    throw MeasureError(e.what());
  }
  throw MeasureError("side must be 'interior' or 'boundary'");
}

AnyMeasure load_measure_file(const std::string& path, bool allow_signed) {
  std::ifstream in(path);
  if (!in) throw MeasureError("cannot open measure file " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw MeasureError("malformed measure file " + path + ": " + e.what());
  }
  return load_measure(doc, allow_signed);
}

json serialize(const InteriorMeasure& m) {
  json j = serialize_impl(m);
  // reflect negative densities back into signed amplitudes
  for (std::size_t i = m.positive.densities.size(); i < j["density"].size(); ++i) {
    json& d = j["density"][i];
    if (d.contains("params")) d["params"]["amp"] = -d["params"].value("amp", 1.0);
  }
  return j;
}

json serialize(const BoundaryMeasure& m) {
  json j = serialize_impl(m);
  for (std::size_t i = m.positive.densities.size(); i < j["density"].size(); ++i) {
    json& d = j["density"][i];
    if (d.contains("params")) d["params"]["amp"] = -d["params"].value("amp", 1.0);
  }
  return j;
}

InteriorMeasure dirac(const HalfSpacePoint& at, double w) {
  if (!at.interior()) throw MeasureError("atom not interior");
  InteriorMeasure m = InteriorMeasure::zero(at.dim());
  if (w >= 0) {
    m.positive.atoms.push_back({at.coords(), w});
  } else {
    m.negative.atoms.push_back({at.coords(), -w});
    m.is_signed = true;
  }
  return m;
}

BoundaryMeasure boundary_dirac(const BoundaryPoint& at, double w) {
  BoundaryMeasure m = BoundaryMeasure::zero(at.size() + 1);
  if (w >= 0) {
    m.positive.atoms.push_back({at, w});
  } else {
    m.negative.atoms.push_back({at, -w});
    m.is_signed = true;
  }
  return m;
}

namespace {

std::vector<Coords> with_origin(int d, std::vector<Coords> pts) {
  pts.insert(pts.begin(), Coords(d));
  return pts;
}

double density_part(const MeasurePart& part, const std::function<double(const Density&)>& each) {
  double s = 0;
  for (const Density& d : part.densities) s += each(d);
  return s;
}

}  // namespace

double weighted_mass(const InteriorMeasure& mu, const CylinderBall& region, const QuadratureSpec& q) {
  if (mu.dim != region.center.dim()) throw std::invalid_argument("measure and region dimensions differ");
  const int n = mu.dim;
  double total = 0;
  for (const MeasurePart* part : {&mu.positive, &mu.negative}) {
    for (const Atom& a : part->atoms)
      if (region.contains(HalfSpacePoint(a.loc))) total += a.loc[n - 1] * a.w;
  }
  const HalfSpacePoint& x = region.center;
  const double R = region.radius;
  auto one = [&](const Density& den) -> double {
    if (den.support) {
      Box b = *den.support;
      for (int i = 0; i + 1 < n; ++i) {
        b.lo[i] = std::max(b.lo[i], x[i] - R);
        b.hi[i] = std::min(b.hi[i], x[i] + R);
      }
      b.lo[n - 1] = std::max({b.lo[n - 1], x.height() - R, 0.0});
      b.hi[n - 1] = std::min(b.hi[n - 1], x.height() + R);
      for (int i = 0; i < n; ++i)
        if (!(b.hi[i] > b.lo[i])) return 0.0;
      auto pieces = cylinder_box(x, R, b, [&den, n](const Coords& y) { return y[n - 1] * std::abs(den(y)); },
                                 den.peaks);
      return integrate_checked(pieces, q, "weighted_mass").value;
    }
    auto pieces = cylinder_ball(x, R, [&den, n](const Coords& y) { return y[n - 1] * std::abs(den(y)); }, den.peaks);
    return integrate_checked(pieces, q, "weighted_mass").value;
  };
  total += density_part(mu.positive, one) + density_part(mu.negative, one);
  return total;
}

double total_decay_functional(const InteriorMeasure& mu, const QuadratureSpec& q) {
  const int n = mu.dim;
  double total = 0;
  auto weight = [n](const Coords& y) { return y[n - 1] / (1.0 + std::pow(y.norm(), n)); };
  for (const MeasurePart* part : {&mu.positive, &mu.negative})
    for (const Atom& a : part->atoms) total += weight(a.loc) * a.w;
  const double half_sigma = 0.5 * sphere_measure(n);
  auto one = [&](const Density& den) -> double {
    Integrand f = [&den, weight](std::span<const double> y) {
      const Coords c(y);
      return weight(c) * std::abs(den(c));
    };
    if (den.support) {
      Piece p;
      p.box = *den.support;
      p.f = f;
      return integrate_checked(std::span<const Piece>(&p, 1), q, "total_decay_functional").value;
    }
    // y_N/(1+|y|^N) <= r^{1-N}, half-sphere area sigma_N r^{N-1} / 2
    const TailedResult r = integrate_with_tail(
        [&](double L) { return truncated_box(n, true, L, f, with_origin(n, den.peaks)); },
        [&](double L) { return half_sigma * den.envelope.tail(L, 0); }, 8.0, q, "total_decay_functional");
    return r.value;
  };
  total += density_part(mu.positive, one) + density_part(mu.negative, one);
  return total;
}

double total_decay_functional(const BoundaryMeasure& nu, const QuadratureSpec& q) {
  const int n = nu.dim;
  const int d = n - 1;
  double total = 0;
  auto weight = [n](const Coords& y) { return 1.0 / (1.0 + std::pow(y.norm(), n)); };
  for (const MeasurePart* part : {&nu.positive, &nu.negative})
    for (const Atom& a : part->atoms) total += weight(a.loc) * a.w;
  const double sigma = sphere_measure(d);
  auto one = [&](const Density& den) -> double {
    Integrand f = [&den, weight](std::span<const double> y) {
      const Coords c(y);
      return weight(c) * std::abs(den(c));
    };
    if (den.support) {
      Piece p;
      p.box = *den.support;
      p.f = f;
      return integrate_checked(std::span<const Piece>(&p, 1), q, "total_decay_functional").value;
    }
    // 1/(1+r^N) <= r^{-N}, sphere area sigma_{N-1} r^{N-2}
    const TailedResult r = integrate_with_tail(
        [&](double L) { return truncated_box(d, false, L, f, with_origin(d, den.peaks)); },
        [&](double L) { return sigma * den.envelope.tail(L, -2); }, 8.0, q, "total_decay_functional");
    return r.value;
  };
  total += density_part(nu.positive, one) + density_part(nu.negative, one);
  return total;
}

}  // namespace hsp
