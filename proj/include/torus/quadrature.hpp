#pragma once

#include <complex>
#include <functional>

#include "torus/approxfn.hpp"

namespace torus::quad {

using Complex = std::complex<double>;
using Fn = std::function<Complex(double)>;

// Recursive adaptive Simpson on [a, b].
Complex adaptive_simpson(const Fn& f, double a, double b, double tol,
                         int max_depth = 30);

// Adaptive Simpson with the range pre-split on the oscillation scale
// `freq_hint` (cycles over the whole interval).
Complex oscillatory_integral(const Fn& f, double a, double b, double freq_hint,
                             double tol);

// The periodized trapezoid approximant h(x) = sum_{q in Z^d} chi(Ax - y - q),
// evaluated literally (at most 2^d boxes meet any point).
double periodized_approximant(const linalg::IntMatrix& a, const TorusPoint& y,
                              const std::vector<double>& radii, double eps,
                              approxfn::Side side, const std::vector<double>& x);

// integral over [0,1)^d of h(x) prod_i w_i(x_i) for d in {1, 2}.
//
// h is piecewise quadratic along x1 for fixed x2 with computable breakpoints,
// so the inner integral uses per-piece Gauss-Legendre (chunked on the weight
// oscillation scale) and only the outer variable needs adaptivity. This is
// the independent oracle for the Fourier-side measure computations; it never
// touches the closed-form transforms.
Complex integrate_periodized(const linalg::IntMatrix& a, const TorusPoint& y,
                             const std::vector<double>& radii, double eps,
                             approxfn::Side side, const std::vector<Fn>& weights,
                             double tol, double weight_freq_hint = 1.0);

}  // namespace torus::quad
