#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "hsp/point.hpp"

namespace hsp {

/// Van der Corput radical inverse of i in the given base.
inline double radical_inverse(std::uint64_t i, unsigned base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

inline unsigned nth_prime(int k) {
  static constexpr unsigned primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  return primes[k];
}

/// Halton point i in [0,1)^d with a Cranley-Patterson rotation `shift`.
inline Coords halton(std::uint64_t i, int d, const std::vector<double>& shift = {}) {
  Coords c(d);
  for (int k = 0; k < d; ++k) {
    double v = radical_inverse(i + 1, nth_prime(k));
    if (!shift.empty()) {
      v += shift[k];
      v -= static_cast<double>(static_cast<long long>(v));
    }
    c[k] = v;
  }
  return c;
}

inline std::vector<double> random_shift(int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> s(d);
  for (double& v : s) v = u(rng);
  return s;
}

}  // namespace hsp
