#include "torus/lattice.hpp"

#include <cmath>

namespace torus::lattice {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

Overlattice::Overlattice(IntMatrix a) : generator(std::move(a)) {
  if (determinant(generator) == 0)
    throw SingularMatrixError("overlattice generator is singular");
}

CosetSet coset_reps(const IntMatrix& a, long long det_cap) {
  Int det = determinant(a);
  if (det == 0) throw SingularMatrixError("coset_reps of singular matrix");
  Int adet = boost::multiprecision::abs(det);
  if (adet > det_cap)
    throw CapacityError("coset enumeration cap exceeded: |det| = " + adet.str());

  const int d = a.dim();
  RationalMatrix ainv = linalg::inverse_rational(a);

  // Integer bounding box of A [0,1)^d, padded by one on each side.
  std::vector<Int> lo(d), hi(d);
  for (int i = 0; i < d; ++i) {
    Int mn = 0, mx = 0;
    for (int j = 0; j < d; ++j) {
      if (a.at(i, j) < 0) mn += a.at(i, j);
      else mx += a.at(i, j);
    }
    lo[i] = mn - 1;
    hi[i] = mx + 1;
  }

  CosetSet out{a, {}};
  out.reps.reserve(adet.convert_to<size_t>());
  std::vector<Int> p(d);
  // Odometer over the box.
  std::vector<Int> cur(lo);
  for (;;) {
    // Membership: A^-1 p in [0,1)^d, exact.
    bool inside = true;
    for (int i = 0; i < d && inside; ++i) {
      Rat c = 0;
      for (int j = 0; j < d; ++j) c += ainv.at(i, j) * Rat(cur[j]);
      if (c < 0 || c >= 1) inside = false;
    }
    if (inside) out.reps.push_back(cur);

    int axis = d - 1;
    while (axis >= 0) {
      ++cur[axis];
      if (cur[axis] <= hi[axis]) break;
      cur[axis] = lo[axis];
      --axis;
    }
    if (axis < 0) break;
  }

  if (Int(out.reps.size()) != adet)
    throw std::logic_error("coset_reps: representative count != |det|");
  return out;
}

bool dual_contains(const IntMatrix& a, const std::vector<Int>& k) {
  if (static_cast<int>(k.size()) != a.dim())
    throw std::invalid_argument("dual_contains: dimension mismatch");
  RationalMatrix atinv = linalg::inverse_rational(linalg::transpose(a));
  for (int i = 0; i < a.dim(); ++i) {
    Rat c = 0;
    for (int j = 0; j < a.dim(); ++j) c += atinv.at(i, j) * Rat(k[j]);
    if (denominator(c) != 1) return false;
  }
  return true;
}

std::complex<double> exp_sum_over(const IntMatrix& a,
                                  const std::vector<std::vector<Int>>& reps,
                                  const std::vector<Int>& k) {
  RationalMatrix ainv = linalg::inverse_rational(a);
  long double re = 0, im = 0;
  for (const auto& p : reps) {
    // <k, A^-1 p> reduced mod 1 exactly before any floating step.
    Rat phase = 0;
    for (int i = 0; i < a.dim(); ++i) {
      Rat c = 0;
      for (int j = 0; j < a.dim(); ++j) c += ainv.at(i, j) * Rat(p[j]);
      phase += Rat(k[i]) * c;
    }
    phase = rat_frac(phase);
    long double ang = -kTwoPi * static_cast<long double>(rat_to_double(phase));
    re += cosl(ang);
    im += sinl(ang);
  }
  return {static_cast<double>(re), static_cast<double>(im)};
}

std::complex<double> exp_sum(const IntMatrix& a, const std::vector<Int>& k,
                             long long det_cap) {
  CosetSet cs = coset_reps(a, det_cap);
  return exp_sum_over(a, cs.reps, k);
}

GeneralLattice::GeneralLattice(RationalMatrix basis) : basis_(std::move(basis)) {
  if (determinant(basis_) == 0)
    throw SingularMatrixError("lattice basis is singular");
}

double GeneralLattice::discreteness_lower_bound() const {
  if (sigma_cache_ < 0) {
    auto si = linalg::smallest_singular_value(basis_, 1e-9);
    sigma_cache_ = si.lo_double();
  }
  return sigma_cache_;
}

namespace {

double kernel_factor(double t, double r, double eps) {
  if (t == 0.0) return r;
  return std::min(r, 1.0 / (t * t * r * eps));
}

// One-dimensional comparison sums over the grid c Z used by the tail bound.
// full_line_sum includes t = 0 and both signs; tail_beyond covers |t| > x.
double grid_line_sum(double c, double r, double eps) {
  double m = std::floor(1.0 / (c * r * std::sqrt(eps)));
  double head = m * r;
  double tail = (1.0 / (c * c * r * eps)) * (m >= 1 ? 1.0 / m : 1.6449340668482264);
  return r + 2.0 * (head + tail);
}

double grid_tail_beyond(double c, double x, double r, double eps) {
  double m = std::floor(1.0 / (c * r * std::sqrt(eps)));
  double k0 = std::max(0.0, std::floor(x / c));
  double sum = 0.0;
  if (k0 < m) sum += r * (m - k0);
  double kstart = std::max(k0, m);
  sum += (1.0 / (c * c * r * eps)) * (kstart >= 1 ? 1.0 / kstart : 1.6449340668482264);
  return 2.0 * sum;
}

}  // namespace

KernelSum kernel_sum(const GeneralLattice& lat, const std::vector<double>& r,
                     double eps, double radius, long long point_cap) {
  const int d = lat.dim();
  if (static_cast<int>(r.size()) != d)
    throw std::invalid_argument("kernel_sum: radii dimension mismatch");
  for (double ri : r)
    if (!(ri > 0 && ri <= 1)) throw std::invalid_argument("kernel_sum: r_i must be in (0,1]");
  if (!(eps > 0 && eps <= 1)) throw std::invalid_argument("kernel_sum: eps must be in (0,1]");
  double sigma = lat.discreteness_lower_bound();
  if (radius < 10 * sigma)
    throw std::invalid_argument("kernel_sum: truncation radius below 10x discreteness bound");

  // Integer coordinate box covering the preimage of [-radius, radius]^d.
  RationalMatrix binv = linalg::inverse_rational(lat.basis());
  std::vector<long long> zmax(d);
  double box_points = 1;
  for (int i = 0; i < d; ++i) {
    double bound = 0;
    for (int j = 0; j < d; ++j) bound += std::abs(rat_to_double(binv.at(i, j))) * radius;
    zmax[i] = static_cast<long long>(std::floor(bound)) + 1;
    box_points *= 2.0 * static_cast<double>(zmax[i]) + 1.0;
  }
  if (box_points > static_cast<double>(point_cap))
    throw CapacityError(
        "kernel_sum enumeration cap exceeded; use a more discrete lattice or a "
        "smaller truncation radius");

  std::vector<std::vector<double>> basis_d(d, std::vector<double>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) basis_d[i][j] = rat_to_double(lat.basis().at(i, j));

  double value = 0;
  long long used = 0;
  std::vector<long long> z(d, 0);
  for (int i = 0; i < d; ++i) z[i] = -zmax[i];
  std::vector<double> t(d);
  for (;;) {
    bool zero = true;
    for (int i = 0; i < d; ++i)
      if (z[i] != 0) {
        zero = false;
        break;
      }
    if (!zero) {
      bool inbox = true;
      for (int i = 0; i < d && inbox; ++i) {
        double ti = 0;
        for (int j = 0; j < d; ++j) ti += basis_d[i][j] * static_cast<double>(z[j]);
        t[i] = ti;
        if (std::abs(ti) > radius) inbox = false;
      }
      if (inbox) {
        double term = 1;
        for (int i = 0; i < d; ++i) term *= kernel_factor(t[i], r[i], eps);
        value += term;
        ++used;
      }
    }
    int axis = d - 1;
    while (axis >= 0) {
      ++z[axis];
      if (z[axis] <= zmax[axis]) break;
      z[axis] = -zmax[axis];
      --axis;
    }
    if (axis < 0) break;
  }

  // Tail bound: points of Gamma outside the box map injectively (per sign
  // orthant) onto the grid c Z^d with c = sigma/sqrt(d), the kernel only
  // growing under the shift. Union-bound over which coordinate is large and
  // factorize; the 1/m integral comparison closes each 1-d series.
  double c = sigma / std::sqrt(static_cast<double>(d));
  double tail = 0;
  for (int i = 0; i < d; ++i) {
    double prod = grid_tail_beyond(c, std::max(0.0, radius - c), r[i], eps);
    for (int j = 0; j < d; ++j)
      if (j != i) prod *= grid_line_sum(c, r[j], eps);
    tail += prod;
  }
  return KernelSum{value, tail, used};
}

}  // namespace torus::lattice
