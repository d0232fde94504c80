#include "torus/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace torus::quad {

namespace {

struct SimpsonState {
  const Fn* f;
  double tol;
  int max_depth;
};

Complex simpson_rec(const SimpsonState& st, double a, double b, Complex fa,
                    Complex fm, Complex fb, Complex whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  Complex flm = (*st.f)(lm), frm = (*st.f)(rm);
  Complex left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  Complex right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  Complex delta = left + right - whole;
  if (depth >= st.max_depth || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_rec(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
         simpson_rec(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

// 12-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kGLx[6] = {0.1252334085114689, 0.3678314989981802,
                            0.5873179542866175, 0.7699026741943047,
                            0.9041172563704749, 0.9815606342467192};
constexpr double kGLw[6] = {0.2491470458134028, 0.2334925365383548,
                            0.2031674267230659, 0.1600783285433462,
                            0.1069393259953184, 0.0471753363865118};

template <typename F>
Complex gauss12(const F& f, double a, double b) {
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  Complex acc(0, 0);
  for (int i = 0; i < 6; ++i) {
    acc += kGLw[i] * (f(c + h * kGLx[i]) + f(c - h * kGLx[i]));
  }
  return acc * h;
}

}  // namespace

Complex adaptive_simpson(const Fn& f, double a, double b, double tol, int max_depth) {
  if (a == b) return {0, 0};
  SimpsonState st{&f, tol, max_depth};
  double m = 0.5 * (a + b);
  Complex fa = f(a), fm = f(m), fb = f(b);
  Complex whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(st, a, b, fa, fm, fb, whole, tol, 0);
}

Complex oscillatory_integral(const Fn& f, double a, double b, double freq_hint,
                             double tol) {
  int panels = std::max(1, static_cast<int>(std::ceil(4.0 * std::abs(freq_hint))) );
  panels = std::min(panels, 4096);
  Complex acc(0, 0);
  double h = (b - a) / panels;
  for (int i = 0; i < panels; ++i)
    acc += adaptive_simpson(f, a + i * h, a + (i + 1) * h, tol / panels);
  return acc;
}

double periodized_approximant(const linalg::IntMatrix& a, const TorusPoint& y,
                              const std::vector<double>& radii, double eps,
                              approxfn::Side side, const std::vector<double>& x) {
  const int d = a.dim();
  std::vector<double> w(d);
  for (int i = 0; i < d; ++i) {
    double acc = 0;
    for (int j = 0; j < d; ++j) acc += rat_to_double(Rat(a.at(i, j))) * x[j];
    acc -= rat_to_double(y[i]);
    w[i] = acc;
  }
  // Enumerate integer q with every coordinate inside the support window.
  double total = 0;
  std::vector<long long> qlo(d), qhi(d);
  for (int i = 0; i < d; ++i) {
    approxfn::TrapezoidSpec spec{radii[i], eps, side};
    double s = spec.support();
    qlo[i] = static_cast<long long>(std::ceil(w[i] - s));
    qhi[i] = static_cast<long long>(std::floor(w[i] + s));
    if (qlo[i] > qhi[i]) return 0.0;
  }
  std::vector<long long> q(qlo);
  for (;;) {
    double prod = 1;
    for (int i = 0; i < d && prod != 0; ++i) {
      approxfn::TrapezoidSpec spec{radii[i], eps, side};
      prod *= approxfn::chi_eval(spec, w[i] - static_cast<double>(q[i]));
    }
    total += prod;
    int axis = d - 1;
    while (axis >= 0) {
      ++q[axis];
      if (q[axis] <= qhi[axis]) break;
      q[axis] = qlo[axis];
      --axis;
    }
    if (axis < 0) break;
  }
  return total;
}

namespace {

// x1-breakpoints of h(., x2) in [0, 1]: solutions of
// a_{j0} x1 + (row tail) = y_j + q + c for c in {+-plateau, +-support}.
std::vector<double> inner_breakpoints(const linalg::IntMatrix& a,
                                      const TorusPoint& y,
                                      const std::vector<double>& radii,
                                      double eps, approxfn::Side side,
                                      double x2) {
  const int d = a.dim();
  std::vector<double> pts;
  pts.push_back(0.0);
  pts.push_back(1.0);
  for (int j = 0; j < d; ++j) {
    double aj0 = rat_to_double(Rat(a.at(j, 0)));
    if (aj0 == 0.0) continue;
    double tail = -rat_to_double(y[j]);
    if (d == 2) tail += rat_to_double(Rat(a.at(j, 1))) * x2;
    approxfn::TrapezoidSpec spec{radii[j], eps, side};
    const double cs[4] = {-spec.support(), -spec.plateau(), spec.plateau(),
                          spec.support()};
    // Row value ranges over tail + aj0 * [0,1]; q must land the edge inside.
    double lo = tail + std::min(0.0, aj0) - spec.support() - 1;
    double hi = tail + std::max(0.0, aj0) + spec.support() + 1;
    for (long long qv = static_cast<long long>(std::floor(lo));
         qv <= static_cast<long long>(std::ceil(hi)); ++qv) {
      for (double c : cs) {
        double x1 = (static_cast<double>(qv) + c - tail) / aj0;
        if (x1 > 0.0 && x1 < 1.0) pts.push_back(x1);
      }
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace

Complex integrate_periodized(const linalg::IntMatrix& a, const TorusPoint& y,
                             const std::vector<double>& radii, double eps,
                             approxfn::Side side, const std::vector<Fn>& weights,
                             double tol, double weight_freq_hint) {
  const int d = a.dim();
  if (d != 1 && d != 2)
    throw UnsupportedDimensionError("integrate_periodized supports d in {1,2}");
  if (static_cast<int>(weights.size()) != d)
    throw std::invalid_argument("integrate_periodized: weight count mismatch");

  double max_step = 0.25 / (1.0 + std::abs(weight_freq_hint));

  auto inner = [&](double x2) -> Complex {
    std::vector<double> pts = inner_breakpoints(a, y, radii, eps, side, x2);
    Complex acc(0, 0);
    std::vector<double> xv(d);
    if (d == 2) xv[1] = x2;
    auto integrand = [&](double x1) {
      xv[0] = x1;
      return weights[0](x1) * periodized_approximant(a, y, radii, eps, side, xv);
    };
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
      double lo = pts[i], hi = pts[i + 1];
      int chunks = std::max(1, static_cast<int>(std::ceil((hi - lo) / max_step)));
      double h = (hi - lo) / chunks;
      for (int cidx = 0; cidx < chunks; ++cidx)
        acc += gauss12(integrand, lo + cidx * h, lo + (cidx + 1) * h);
    }
    return acc;
  };

  if (d == 1) return inner(0.0);

  Fn outer = [&](double x2) { return weights[1](x2) * inner(x2); };
  return oscillatory_integral(outer, 0.0, 1.0,
                              4.0 + std::abs(weight_freq_hint), tol);
}

}  // namespace torus::quad
