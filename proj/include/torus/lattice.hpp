#pragma once

#include <complex>
#include <vector>

#include "torus/linalg.hpp"

namespace torus::lattice {

using linalg::IntMatrix;
using linalg::RationalMatrix;

// Gamma = A^-1 Z^d for a nonsingular integral A; contains Z^d automatically.
struct Overlattice {
  IntMatrix generator;

  explicit Overlattice(IntMatrix a);
};

// The |det A| integer vectors p with A^-1 p in [0,1)^d, representing the
// quotient A^-1 Z^d / Z^d (via p <-> A^-1 p).
struct CosetSet {
  IntMatrix source;
  std::vector<std::vector<Int>> reps;
};

// Enumerates representatives by scanning the integer bounding box of
// A [0,1)^d with exact membership tests. Throws CapacityError when |det A|
// exceeds the cap.
CosetSet coset_reps(const IntMatrix& a, long long det_cap = 100000);

// k in Gamma* iff (A^T)^-1 k is integral, decided exactly.
bool dual_contains(const IntMatrix& a, const std::vector<Int>& k);

// S(k) = sum over P of e(-<k, A^-1 p>). Equals |det A| on the dual lattice
// and vanishes off it (up to floating error in e(.)).
std::complex<double> exp_sum(const IntMatrix& a, const std::vector<Int>& k,
                             long long det_cap = 100000);

// Same sum evaluated over an explicitly given representative set; used to
// check independence of the choice of representatives.
std::complex<double> exp_sum_over(const IntMatrix& a,
                                  const std::vector<std::vector<Int>>& reps,
                                  const std::vector<Int>& k);

// A lattice given by a rational basis (columns generate).
class GeneralLattice {
 public:
  explicit GeneralLattice(RationalMatrix basis);

  const RationalMatrix& basis() const { return basis_; }
  int dim() const { return basis_.dim(); }

  // Certified lower bound on the norm of any nonzero lattice vector:
  // ||B z||_2 >= sigma_min(B) ||z||_2 >= sigma_min(B) for integer z != 0.
  double discreteness_lower_bound() const;

 private:
  RationalMatrix basis_;
  mutable double sigma_cache_ = -1.0;
};

// Truncated kernel sum of Lemma-key type:
//   sum over t in Gamma \ {0}, |t_i| <= radius, of prod_i min(r_i, 1/(t_i^2 r_i eps)),
// with the 1/0 = +infinity convention (the min is r_i when t_i = 0).
// tail_bound is a certified overestimate of the omitted mass.
struct KernelSum {
  double value;
  double tail_bound;
  long long points;  // lattice points accumulated
};

KernelSum kernel_sum(const GeneralLattice& lat, const std::vector<double>& r,
                     double eps, double radius, long long point_cap = 20000000);

}  // namespace torus::lattice
