#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace torus {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Error taxonomy shared by all modules; the CLI maps these to exit codes.
struct SingularMatrixError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct GapViolationError : std::runtime_error {
  long index;
  GapViolationError(const std::string& msg, long idx)
      : std::runtime_error(msg), index(idx) {}
};
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PrecisionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnsupportedDimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Nonnegative remainder, 0 <= r < |b|.
inline Int mod_floor(const Int& a, const Int& b) {
  Int r = a % b;
  if (r < 0) r += boost::multiprecision::abs(b);
  return r;
}

inline Int rat_floor(const Rat& q) {
  return floor_div(numerator(q), denominator(q));
}

// Fractional part in [0,1), exact.
inline Rat rat_frac(const Rat& q) { return q - Rat(rat_floor(q)); }

// Conversion to double accurate to ~1 ulp, safe for huge numerators and
// denominators (naive double(num)/double(den) overflows).
double rat_to_double(const Rat& q);

// Fractionu/v with 0 <= u < v mapped into [0,1) with ~62 bits kept.
double unit_fraction_to_double(const Int& u, const Int& v);

// Certified bounds l <= sqrt(q) <= u with u - l <= 2^-bits * (denominator
// granularity); q must be >= 0.
void rat_sqrt_bounds(const Rat& q, unsigned bits, Rat& lo, Rat& hi);

// Directed-rounding conversions: result is guaranteed <= (resp >=) x.
double rat_to_double_down(const Rat& x);
double rat_to_double_up(const Rat& x);

std::string rat_to_string(const Rat& q);

// Parses "p/q", decimal strings ("0.25", "-3.5e-2" is not supported; plain
// decimals only) and integer strings into exact rationals.
Rat parse_rational(const std::string& s);

}  // namespace torus
