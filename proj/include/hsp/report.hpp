#pragma once

#include <cmath>
#include <cstdio>
#include <string>

#include <json.hpp>

namespace hsp {

/// Round-trippable, locale-independent number text for CSV reports.
inline std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// JSON has no inf/nan; they are written as strings.
inline nlohmann::json jnum(double v) {
  if (std::isfinite(v)) return v;
  return fmt(v);
}

}  // namespace hsp
