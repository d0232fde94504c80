#include "torus/approxfn.hpp"

#include <cmath>

namespace torus::approxfn {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

double sinc(double u) {
  if (u == 0.0) return 1.0;
  return std::sin(M_PI * u) / (M_PI * u);
}

void check_spec(double r, double eps) {
  if (!(r > 0 && r < 0.5)) throw std::invalid_argument("trapezoid r must be in (0, 1/2)");
  if (!(eps > 0 && eps <= 1)) throw std::invalid_argument("trapezoid eps must be in (0, 1]");
}
}  // namespace

double chi_eval(const TrapezoidSpec& spec, double x) {
  check_spec(spec.r, spec.eps);
  double a = std::abs(x);
  double p = spec.plateau();
  double s = spec.support();
  if (a <= p) return 1.0;
  if (a >= s) return 0.0;
  return (s - a) / (s - p);
}

double trapezoid_fourier_1d(const TrapezoidSpec& spec, double k) {
  check_spec(spec.r, spec.eps);
  double a = 0.5 * (spec.plateau() + spec.support());
  double b = 0.5 * (spec.support() - spec.plateau());
  return 2.0 * a * sinc(2.0 * a * k) * sinc(2.0 * b * k);
}

Rat h_fourier_zero_exact(const std::vector<Rat>& radii, const Rat& eps, Side side) {
  Rat factor = side == Side::Upper ? Rat(1) + eps / 2 : Rat(1) - eps / 2;
  Rat out = 1;
  for (const auto& r : radii) out *= 2 * r * factor;
  return out;
}

std::complex<double> h_fourier_from_kprime(const TorusPoint& y,
                                           const std::vector<double>& radii,
                                           double eps, Side side,
                                           const std::vector<long long>& kprime) {
  double mag = 1.0;
  for (size_t i = 0; i < radii.size(); ++i) {
    TrapezoidSpec spec{radii[i], eps, side};
    mag *= trapezoid_fourier_1d(spec, static_cast<double>(kprime[i]));
  }
  // Phase e(-<k', y>), reduced exactly before the trig call.
  Rat phase = 0;
  for (size_t i = 0; i < radii.size(); ++i)
    phase += Rat(Int(kprime[i])) * y[static_cast<int>(i)];
  double ang = -kTwoPi * rat_to_double(rat_frac(phase));
  return std::complex<double>(std::cos(ang), std::sin(ang)) * mag;
}

std::complex<double> h_fourier(const IntMatrix& a, const TorusPoint& y,
                               const std::vector<double>& radii, double eps,
                               Side side, const std::vector<Int>& k) {
  const int d = a.dim();
  if (static_cast<int>(k.size()) != d || y.dim() != d ||
      static_cast<int>(radii.size()) != d)
    throw std::invalid_argument("h_fourier: dimension mismatch");

  bool zero = true;
  for (const auto& ki : k)
    if (ki != 0) {
      zero = false;
      break;
    }
  if (zero) {
    std::vector<Rat> rr(radii.size());
    for (size_t i = 0; i < radii.size(); ++i) rr[i] = Rat(radii[i]);
    return {rat_to_double(h_fourier_zero_exact(rr, Rat(eps), side)), 0.0};
  }

  // k' = (A^T)^-1 k must be integral; otherwise the coefficient vanishes.
  linalg::RationalMatrix atinv = linalg::inverse_rational(linalg::transpose(a));
  std::vector<long long> kprime(d);
  for (int i = 0; i < d; ++i) {
    Rat c = 0;
    for (int j = 0; j < d; ++j) c += atinv.at(i, j) * Rat(k[j]);
    if (denominator(c) != 1) return {0.0, 0.0};
    kprime[i] = numerator(c).convert_to<long long>();
  }
  return h_fourier_from_kprime(y, radii, eps, side, kprime);
}

L1CheckResult fourier_l1_check(const std::vector<double>& radii, double eps,
                               Side side, long truncation) {
  const int d = static_cast<int>(radii.size());
  double min_r = radii[0];
  for (double r : radii) min_r = std::min(min_r, r);
  if (static_cast<double>(truncation) < 4.0 / (std::sqrt(eps) * min_r))
    throw std::invalid_argument("fourier_l1_check: truncation below 4/(sqrt(eps) min r)");

  // |h^(A^T k')| = prod_i |chi_i^(k'_i)|, so the L1 sum over the support
  // lattice factorizes into per-coordinate sums.
  double total = 1.0;
  for (int i = 0; i < d; ++i) {
    TrapezoidSpec spec{radii[i], eps, side};
    double s = std::abs(trapezoid_fourier_1d(spec, 0.0));
    for (long u = 1; u <= truncation; ++u)
      s += 2.0 * std::abs(trapezoid_fourier_1d(spec, static_cast<double>(u)));
    total *= s;
  }
  double reference = std::pow(4.0, d) + std::pow(eps, -0.5 * d);
  return {total, reference, total / reference};
}

ApproxParams ApproxParams::expectation(double xi) {
  ApproxParams p;
  p.mode = Mode::Expectation;
  p.xi = xi;
  return p;
}

ApproxParams ApproxParams::overlap_for_dim(int d) {
  ApproxParams p;
  p.mode = Mode::Overlap;
  p.delta = 2.0 / (d + 1);
  return p;
}

std::vector<double> epsilon_schedule(const ApproxParams& params,
                                     const std::vector<double>& psi_prefix) {
  double expnt = params.mode == ApproxParams::Mode::Expectation ? 1.0 - params.xi
                                                                : params.delta;
  std::vector<double> eps(psi_prefix.size());
  double cum = 0;
  for (size_t i = 0; i < psi_prefix.size(); ++i) {
    if (!(psi_prefix[i] > 0)) throw std::invalid_argument("psi values must be positive");
    cum += psi_prefix[i];
    eps[i] = std::min(1.0, std::pow(cum, -expnt));
  }
  return eps;
}

}  // namespace torus::approxfn
