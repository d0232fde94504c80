#include "torus/numeric.hpp"

#include <cmath>
#include <sstream>

namespace torus {

double rat_to_double(const Rat& q) {
  if (q == 0) return 0.0;
  bool neg = q < 0;
  Int u = boost::multiprecision::abs(numerator(q));
  Int v = denominator(q);
  // Scale so that floor(u * 2^shift / v) carries ~80 significant bits, then
  // let the double rounding happen once.
  long bu = static_cast<long>(msb(u));
  long bv = static_cast<long>(msb(v));
  long shift = 80 - (bu - bv);
  Int m;
  if (shift >= 0) {
    m = (u << shift) / v;
  } else {
    m = u / (v << (-shift));
  }
  double d = std::ldexp(m.convert_to<double>(), static_cast<int>(-shift));
  return neg ? -d : d;
}

double unit_fraction_to_double(const Int& u, const Int& v) {
  Int m = (u << 62) / v;
  return std::ldexp(m.convert_to<double>(), -62);
}

void rat_sqrt_bounds(const Rat& q, unsigned bits, Rat& lo, Rat& hi) {
  if (q < 0) throw std::domain_error("rat_sqrt_bounds: negative argument");
  if (q == 0) {
    lo = 0;
    hi = 0;
    return;
  }
  const Int& a = numerator(q);
  const Int& b = denominator(q);
  // sqrt(a/b) = sqrt(a*b) / b; isolate sqrt(a*b * 4^bits) between
  // consecutive integers.
  Int scaled = a * b;
  scaled <<= 2 * bits;
  Int s = boost::multiprecision::sqrt(scaled);  // floor square root
  Int den = b << bits;
  lo = Rat(s, den);
  hi = Rat(s + 1, den);
}

double rat_to_double_down(const Rat& x) {
  double d = rat_to_double(x);
  while (Rat(d) > x) d = std::nextafter(d, -INFINITY);
  return d;
}

double rat_to_double_up(const Rat& x) {
  double d = rat_to_double(x);
  while (Rat(d) < x) d = std::nextafter(d, INFINITY);
  return d;
}

std::string rat_to_string(const Rat& q) {
  std::ostringstream os;
  os << numerator(q);
  if (denominator(q) != 1) os << "/" << denominator(q);
  return os.str();
}

Rat parse_rational(const std::string& s) {
  if (s.empty()) throw ConfigError("empty rational literal");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Int num(s.substr(0, slash));
    Int den(s.substr(slash + 1));
    if (den == 0) throw ConfigError("rational with zero denominator: " + s);
    return Rat(num, den);
  }
  auto dot = s.find('.');
  if (dot == std::string::npos) return Rat(Int(s));
  std::string head = s.substr(0, dot);
  std::string tail = s.substr(dot + 1);
  for (char c : tail)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw ConfigError("bad decimal literal: " + s);
  bool neg = !head.empty() && head[0] == '-';
  if (head == "-" || head == "+") head += "0";
  Int ipart = head.empty() ? Int(0) : Int(head);
  Int scale = 1;
  for (size_t i = 0; i < tail.size(); ++i) scale *= 10;
  Int frac = tail.empty() ? Int(0) : Int(tail);
  Rat r = Rat(boost::multiprecision::abs(ipart)) + Rat(frac, scale);
  return neg ? -r : r;
}

}  // namespace torus
