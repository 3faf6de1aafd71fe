#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <string>

namespace tf {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int abs_int(const Int& x) { return x < 0 ? Int(-x) : x; }

// log of a positive big integer, safe against double overflow
inline double log_int(const Int& x) {
  if (x <= 0) throw std::domain_error("log_int: nonpositive argument");
  unsigned bits = boost::multiprecision::msb(x);
  if (bits <= 900) return std::log(x.convert_to<double>());
  Int m = x >> (bits - 52);
  return std::log(m.convert_to<double>()) + double(bits - 52) * std::log(2.0);
}

inline double log_rat(const Rat& q) {
  if (q <= 0) throw std::domain_error("log_rat: nonpositive argument");
  return log_int(numerator(q)) - log_int(denominator(q));
}

inline Rat rat_pow(const Rat& q, long e) {
  Rat r = 1;
  Rat base = e >= 0 ? q : Rat(1) / q;
  long n = e >= 0 ? e : -e;
  for (long i = 0; i < n; ++i) r *= base;
  return r;
}

// splitmix64: tiny, portable, and deterministic across platforms, which the
// seeded corpora rely on (std distributions are not bit-stable).
struct Rng {
  uint64_t state;
  explicit Rng(uint64_t seed) : state(seed) {}
  uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  uint64_t below(uint64_t n) { return n ? next() % n : 0; }
  long long range(long long lo, long long hi) {  // inclusive
    return lo + (long long)below(uint64_t(hi - lo + 1));
  }
  bool chance(double prob) { return double(next() >> 11) * 0x1.0p-53 < prob; }
};

}  // namespace tf
