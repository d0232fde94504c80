#pragma once

#include <complex>
#include <vector>

#include "torus/lattice.hpp"
#include "torus/point.hpp"

namespace torus::approxfn {

using linalg::IntMatrix;

enum class Side { Upper, Lower };

// Trapezoid approximant of the indicator of [-r, r]: value 1 on the plateau,
// linear ramp down to the support edge, 0 outside. The upper side majorizes
// the indicator (plateau r, support r(1+eps)); the lower side minorizes it
// (plateau (1-eps) r, support r).
struct TrapezoidSpec {
  double r;
  double eps;
  Side side;

  double plateau() const { return side == Side::Upper ? r : (1.0 - eps) * r; }
  double support() const { return side == Side::Upper ? r * (1.0 + eps) : r; }
};

// Piecewise-linear evaluation; x in [-1, 1].
double chi_eval(const TrapezoidSpec& spec, double x);

// Exact transform of the trapezoid: the convolution of two centered boxes of
// half-widths a = (plateau+support)/2 and b = (support-plateau)/2, so
//   chi^(k) = 2a sinc(2 a k) sinc(2 b k),  chi^(0) = plateau + support.
double trapezoid_fourier_1d(const TrapezoidSpec& spec, double k);

// Exact rational value of h^(0) = psi * (1 +/- eps/2)^d.
Rat h_fourier_zero_exact(const std::vector<Rat>& radii, const Rat& eps, Side side);

// Fourier coefficient h^(k) of the periodized approximant for the target
// centered at y with box A: zero unless k = A^T k' for integral k', and then
// e(-<k', y>) prod_i chi_i^(k'_i).
std::complex<double> h_fourier(const IntMatrix& a, const TorusPoint& y,
                               const std::vector<double>& radii, double eps,
                               Side side, const std::vector<Int>& k);

// Same coefficient indexed directly by k' (the dual-side index); used when a
// caller iterates over the support lattice A^T Z^d.
std::complex<double> h_fourier_from_kprime(const TorusPoint& y,
                                           const std::vector<double>& radii,
                                           double eps, Side side,
                                           const std::vector<long long>& kprime);

// Truncated sum_k |h^(k)| over |k'_i| <= truncation, against the reference
// scale 2^{2d} + eps^{-d/2}.
struct L1CheckResult {
  double truncated_sum;
  double reference;
  double ratio;
};
L1CheckResult fourier_l1_check(const std::vector<double>& radii, double eps,
                               Side side, long truncation);

// eps(n) schedules driven by the running total of psi.
struct ApproxParams {
  enum class Mode { Expectation, Overlap };
  Mode mode = Mode::Overlap;
  double xi = 0.1;      // expectation mode: exponent 1 - xi
  double delta = 1.0;   // overlap mode: exponent delta, default 2/(d+1)

  static ApproxParams expectation(double xi = 0.1);
  static ApproxParams overlap_for_dim(int d);
};

std::vector<double> epsilon_schedule(const ApproxParams& params,
                                     const std::vector<double>& psi_prefix);

}  // namespace torus::approxfn
