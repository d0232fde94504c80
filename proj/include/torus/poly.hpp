#pragma once

#include <vector>

#include "torus/numeric.hpp"

namespace torus::poly {

// Polynomials with exact coefficients, ascending order (coeff[i] of x^i).
// Degree of the zero polynomial is -1 by convention.
using IntPoly = std::vector<Int>;
using RatPoly = std::vector<Rat>;

int degree(const IntPoly& p);
int degree(const RatPoly& p);
void trim(IntPoly& p);
void trim(RatPoly& p);

RatPoly to_rat(const IntPoly& p);

// Largest positive rational scaling that makes the polynomial primitive
// integer (content 1); sign of the leading coefficient is preserved.
IntPoly primitive_int(const RatPoly& p);

IntPoly derivative(const IntPoly& p);
Rat eval(const RatPoly& p, const Rat& x);

// Quotient/remainder over the rationals; b must be nonzero.
void divmod(const RatPoly& a, const RatPoly& b, RatPoly& q, RatPoly& r);

// Sign of p at a rational point, computed with integer arithmetic only.
int sign_at(const IntPoly& p, const Rat& x);

// p / gcd(p, p'): same distinct roots, all simple.
IntPoly squarefree_part(const IntPoly& p);

// Canonical Sturm chain of a squarefree polynomial.
struct SturmChain {
  std::vector<IntPoly> seq;

  explicit SturmChain(const IntPoly& squarefree);

  int variations(const Rat& x) const;

  // Number of distinct real roots in the open interval (a, b); both
  // endpoints must not be roots of the leading polynomial.
  int count_roots_open(const Rat& a, const Rat& b) const;
};

}  // namespace torus::poly
