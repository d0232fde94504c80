#include "torus/poly.hpp"

#include <algorithm>

namespace torus::poly {

int degree(const IntPoly& p) { return static_cast<int>(p.size()) - 1; }
int degree(const RatPoly& p) { return static_cast<int>(p.size()) - 1; }

void trim(IntPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

void trim(RatPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

RatPoly to_rat(const IntPoly& p) {
  RatPoly r(p.size());
  for (size_t i = 0; i < p.size(); ++i) r[i] = Rat(p[i]);
  return r;
}

IntPoly primitive_int(const RatPoly& p0) {
  RatPoly p = p0;
  trim(p);
  if (p.empty()) return {};
  Int den_lcm = 1;
  for (const auto& c : p) {
    Int d = denominator(c);
    den_lcm = boost::multiprecision::lcm(den_lcm, d);
  }
  IntPoly ip(p.size());
  Int content = 0;
  for (size_t i = 0; i < p.size(); ++i) {
    ip[i] = numerator(p[i]) * (den_lcm / denominator(p[i]));
    content = boost::multiprecision::gcd(content, ip[i]);
  }
  if (content > 1) {
    for (auto& c : ip) c /= content;
  }
  return ip;
}

IntPoly derivative(const IntPoly& p) {
  if (p.size() <= 1) return {};
  IntPoly d(p.size() - 1);
  for (size_t i = 1; i < p.size(); ++i) d[i - 1] = p[i] * Int(i);
  return d;
}

Rat eval(const RatPoly& p, const Rat& x) {
  Rat acc = 0;
  for (size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
  return acc;
}

void divmod(const RatPoly& a, const RatPoly& b, RatPoly& q, RatPoly& r) {
  r = a;
  trim(r);
  RatPoly bb = b;
  trim(bb);
  if (bb.empty()) throw std::invalid_argument("poly division by zero");
  int db = degree(bb);
  q.assign(std::max(0, degree(r) - db + 1), Rat(0));
  while (degree(r) >= db) {
    int dr = degree(r);
    Rat c = r.back() / bb.back();
    q[dr - db] = c;
    for (int i = 0; i <= db; ++i) r[dr - db + i] -= c * bb[i];
    trim(r);
  }
  trim(q);
}

int sign_at(const IntPoly& p, const Rat& x) {
  if (p.empty()) return 0;
  // Homogenized Horner: sign of sum a_i u^i v^(n-i) with x = u/v, v > 0.
  const Int& u = numerator(x);
  const Int& v = denominator(x);
  Int acc = p.back();
  Int vp = 1;
  for (size_t i = p.size() - 1; i-- > 0;) {
    vp *= v;
    acc = acc * u + p[i] * vp;
  }
  if (acc == 0) return 0;
  return acc > 0 ? 1 : -1;
}

static RatPoly rat_gcd(RatPoly a, RatPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    RatPoly q, r;
    divmod(a, b, q, r);
    a = std::move(b);
    b = std::move(r);
    // Rescale to primitive to keep coefficient growth bounded.
    if (!b.empty()) b = to_rat(primitive_int(b));
  }
  return a;
}

IntPoly squarefree_part(const IntPoly& p) {
  IntPoly pp = p;
  trim(pp);
  if (degree(pp) <= 1) return pp;
  RatPoly g = rat_gcd(to_rat(pp), to_rat(derivative(pp)));
  if (degree(g) <= 0) return pp;
  RatPoly q, r;
  divmod(to_rat(pp), g, q, r);
  if (!r.empty()) throw std::logic_error("squarefree_part: inexact division");
  return primitive_int(q);
}

SturmChain::SturmChain(const IntPoly& squarefree) {
  IntPoly p0 = squarefree;
  trim(p0);
  if (p0.empty()) throw std::invalid_argument("Sturm chain of zero polynomial");
  seq.push_back(p0);
  IntPoly p1 = derivative(p0);
  trim(p1);
  if (p1.empty()) return;
  seq.push_back(p1);
  // s_{k+1} = -rem(s_{k-1}, s_k), rescaled to a primitive integer polynomial.
  // Computing the true rational remainder (not a pseudo-remainder) keeps the
  // sign structure of the chain intact; the positive rescale is harmless.
  for (;;) {
    RatPoly q, r;
    divmod(to_rat(seq[seq.size() - 2]), to_rat(seq.back()), q, r);
    if (r.empty()) break;
    for (auto& c : r) c = -c;
    seq.push_back(primitive_int(r));
  }
}

int SturmChain::variations(const Rat& x) const {
  int count = 0;
  int prev = 0;
  for (const auto& p : seq) {
    int s = sign_at(p, x);
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++count;
    prev = s;
  }
  return count;
}

int SturmChain::count_roots_open(const Rat& a, const Rat& b) const {
  if (!(a < b)) throw std::invalid_argument("count_roots_open: need a < b");
  if (sign_at(seq.front(), a) == 0 || sign_at(seq.front(), b) == 0)
    throw std::invalid_argument("count_roots_open: endpoint is a root");
  return variations(a) - variations(b);
}

}  // namespace torus::poly
