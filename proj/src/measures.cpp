#include "torus/measures.hpp"

#include <mpfr.h>

#include <cmath>

#include "torus/rng.hpp"

namespace torus::measures {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::complex<double> unit_phase(double frac) {
  double ang = -kTwoPi * frac;
  return {std::cos(ang), std::sin(ang)};
}

// exp(-pi i t) sinc(t) = integral of e(-t x) over [0,1).
std::complex<double> box_transform(double t) {
  if (t == 0.0) return {1.0, 0.0};
  double s = std::sin(M_PI * t) / (M_PI * t);
  double ang = -M_PI * t;
  return std::complex<double>(std::cos(ang), std::sin(ang)) * s;
}

std::complex<double> smooth_factor(double t) {
  return box_transform(t) - 0.5 * (box_transform(t - 1.0) + box_transform(t + 1.0));
}

// Truncated self-similar product for the middle-thirds Cantor measure,
// with exact mod-1 reduction of t/3^k for integer t.
std::complex<double> cantor_factor_real(double t) {
  if (t == 0.0) return {1.0, 0.0};
  double a = std::abs(t);
  int K = 40 + std::max(0, static_cast<int>(std::ceil(std::log(a) / std::log(3.0))));
  std::complex<double> prod(1.0, 0.0);
  double scaled = t / 3.0;
  for (int k = 1; k <= K; ++k) {
    double frac = scaled - std::floor(scaled);
    double ang = kTwoPi * frac;
    prod *= std::complex<double>(std::cos(ang), std::sin(ang) * -1.0) * std::cos(ang);
    scaled /= 3.0;
  }
  return prod;
}

std::complex<double> cantor_factor_int(const Int& t) {
  if (t == 0) return {1.0, 0.0};
  Int a = boost::multiprecision::abs(t);
  int K = 40;
  Int p = 1;
  while (p < a) {
    p *= 3;
    ++K;
  }
  std::complex<double> prod(1.0, 0.0);
  Int pow3 = 1;
  for (int k = 1; k <= K; ++k) {
    pow3 *= 3;
    Int residue = mod_floor(t, pow3);
    double frac = unit_fraction_to_double(residue, pow3);
    double ang = kTwoPi * frac;
    prod *= std::complex<double>(std::cos(ang), -std::sin(ang)) * std::cos(ang);
  }
  return prod;
}

// floor(F^{-1}(u / 2^B) * 2^B) for F(x) = x - sin(2 pi x)/(2 pi), the CDF of
// the 1 - cos(2 pi x) density. Bisection over dyadics with MPFR comparisons.
Int smooth_inverse_cdf_bits(const Int& u_num, unsigned bits) {
  mpfr_prec_t prec = static_cast<mpfr_prec_t>(bits) + 64;
  mpfr_t u, lo, hi, mid, f, twopi;
  mpfr_inits2(prec, u, lo, hi, mid, f, twopi, static_cast<mpfr_ptr>(nullptr));

  mpfr_set_str(u, u_num.str().c_str(), 10, MPFR_RNDN);
  mpfr_div_2ui(u, u, bits, MPFR_RNDN);
  mpfr_const_pi(twopi, MPFR_RNDN);
  mpfr_mul_2ui(twopi, twopi, 1, MPFR_RNDN);

  mpfr_set_ui(lo, 0, MPFR_RNDN);
  mpfr_set_ui(hi, 1, MPFR_RNDN);
  for (unsigned step = 0; step < bits; ++step) {
    mpfr_add(mid, lo, hi, MPFR_RNDN);
    mpfr_div_2ui(mid, mid, 1, MPFR_RNDN);
    // f = mid - sin(2 pi mid) / (2 pi)
    mpfr_mul(f, mid, twopi, MPFR_RNDN);
    mpfr_sin(f, f, MPFR_RNDN);
    mpfr_div(f, f, twopi, MPFR_RNDN);
    mpfr_sub(f, mid, f, MPFR_RNDN);
    if (mpfr_cmp(f, u) <= 0)
      mpfr_set(lo, mid, MPFR_RNDN);
    else
      mpfr_set(hi, mid, MPFR_RNDN);
  }
  mpfr_mul_2ui(lo, lo, bits, MPFR_RNDN);
  mpfr_t fl;
  mpfr_init2(fl, prec);
  mpfr_floor(fl, lo);
  char* s = nullptr;
  mpfr_exp_t e;
  s = mpfr_get_str(nullptr, &e, 10, 0, fl, MPFR_RNDN);
  std::string digits(s);
  mpfr_free_str(s);
  mpfr_clears(u, lo, hi, mid, f, twopi, fl, static_cast<mpfr_ptr>(nullptr));

  bool neg = !digits.empty() && digits[0] == '-';
  if (neg) digits.erase(0, 1);
  if (e <= 0 || digits.empty()) return 0;
  std::string intpart = digits.substr(0, std::min<size_t>(digits.size(), e));
  intpart.append(static_cast<size_t>(e) - intpart.size(), '0');
  Int v(intpart);
  return neg ? Int(0) : v;
}

std::vector<double> default_direction(int dim) {
  std::vector<double> dir(dim, 0.0);
  dir[0] = 1.0;
  return dir;
}

}  // namespace

MeasureModel lebesgue(int dim) {
  MeasureModel m;
  m.name = "lebesgue";
  m.dim = dim;
  m.decay_claim = {DecayClass::Polynomial, 1.0};
  m.fourier = [dim](const std::vector<double>& t) {
    std::complex<double> prod(1.0, 0.0);
    for (int i = 0; i < dim; ++i) prod *= box_transform(t[i]);
    return prod;
  };
  m.fourier_int = [dim](const std::vector<Int>& t) {
    for (int i = 0; i < dim; ++i)
      if (t[i] != 0) return std::complex<double>(0.0, 0.0);
    return std::complex<double>(1.0, 0.0);
  };
  m.sampler = [dim](std::uint64_t seed, unsigned bits) {
    BitSource src(seed);
    std::vector<Rat> c(dim);
    Int den = Int(1) << bits;
    for (int i = 0; i < dim; ++i) c[i] = Rat(src.big_bits(bits), den);
    return TorusPoint(std::move(c));
  };
  m.density1d = [](double) { return 1.0; };
  return m;
}

MeasureModel smooth_density(int dim, int density_id) {
  if (density_id != 0) throw std::invalid_argument("unknown density_id");
  MeasureModel m;
  m.name = "smooth";
  m.dim = dim;
  m.decay_claim = {DecayClass::Polynomial, 3.0};
  m.fourier = [dim](const std::vector<double>& t) {
    std::complex<double> prod(1.0, 0.0);
    for (int i = 0; i < dim; ++i) prod *= smooth_factor(t[i]);
    return prod;
  };
  m.fourier_int = [dim](const std::vector<Int>& t) {
    std::complex<double> prod(1.0, 0.0);
    for (int i = 0; i < dim; ++i) {
      if (t[i] == 0) continue;
      if (t[i] == 1 || t[i] == -1)
        prod *= -0.5;
      else
        return std::complex<double>(0.0, 0.0);
    }
    return prod;
  };
  m.sampler = [dim](std::uint64_t seed, unsigned bits) {
    BitSource src(seed);
    std::vector<Rat> c(dim);
    Int den = Int(1) << bits;
    for (int i = 0; i < dim; ++i) {
      Int u = src.big_bits(bits);
      c[i] = Rat(smooth_inverse_cdf_bits(u, bits), den);
    }
    return TorusPoint(std::move(c));
  };
  m.density1d = [](double x) { return 1.0 - std::cos(kTwoPi * x); };
  return m;
}

MeasureModel cantor_middle_third(int dim) {
  MeasureModel m;
  m.name = "cantor";
  m.dim = dim;
  m.decay_claim = {DecayClass::None, 0.0};
  m.fourier = [dim](const std::vector<double>& t) {
    std::complex<double> prod(1.0, 0.0);
    for (int i = 0; i < dim; ++i) prod *= cantor_factor_real(t[i]);
    return prod;
  };
  m.fourier_int = [dim](const std::vector<Int>& t) {
    std::complex<double> prod(1.0, 0.0);
    for (int i = 0; i < dim; ++i) prod *= cantor_factor_int(t[i]);
    return prod;
  };
  m.sampler = [dim](std::uint64_t seed, unsigned bits) {
    BitSource src(seed);
    // 3^-digits <= 2^-bits keeps the ternary grid at least as fine as the
    // requested dyadic one.
    unsigned digits = static_cast<unsigned>(std::ceil(bits * 0.6309297535714574)) + 1;
    std::vector<Rat> c(dim);
    for (int i = 0; i < dim; ++i) {
      Int num = 0;
      for (unsigned k = 0; k < digits; ++k) {
        num *= 3;
        if (src.word() & 1) num += 2;
      }
      Int den = 1;
      for (unsigned k = 0; k < digits; ++k) den *= 3;
      c[i] = Rat(num, den);
    }
    return TorusPoint(std::move(c));
  };
  m.density1d = nullptr;
  return m;
}

FourierEstimate empirical_fourier(const MeasureModel& m, const std::vector<double>& t,
                                  long samples, std::uint64_t seed,
                                  unsigned precision_bits) {
  if (samples < 100) throw std::invalid_argument("empirical_fourier: need >= 100 samples");
  if (static_cast<int>(t.size()) != m.dim)
    throw std::invalid_argument("empirical_fourier: dimension mismatch");
  long double re = 0, im = 0;
  for (long j = 0; j < samples; ++j) {
    TorusPoint x = m.sampler(derive_seed(seed, static_cast<std::uint64_t>(j)), precision_bits);
    double phase = 0;
    for (int i = 0; i < m.dim; ++i) phase += t[i] * rat_to_double(x[i]);
    double ang = -kTwoPi * phase;
    re += std::cos(ang);
    im += std::sin(ang);
  }
  std::complex<double> v(static_cast<double>(re / samples), static_cast<double>(im / samples));
  return {v, 2.0 / std::sqrt(static_cast<double>(samples))};
}

DecayFit decay_fit(const MeasureModel& m, const std::vector<double>& t_grid,
                   DecayModel model, const std::vector<double>& direction) {
  if (t_grid.size() < 20) throw std::invalid_argument("decay_fit: need >= 20 grid points");
  double span = t_grid.back() / t_grid.front();
  if (!(span >= 1e4)) throw std::invalid_argument("decay_fit: grid must span >= 4 decades");
  std::vector<double> dir = direction.empty() ? default_direction(m.dim) : direction;

  std::vector<double> mags(t_grid.size());
  bool any_above = false;
  for (size_t i = 0; i < t_grid.size(); ++i) {
    std::vector<double> t(m.dim);
    for (int j = 0; j < m.dim; ++j) t[j] = dir[j] * t_grid[i];
    mags[i] = std::abs(m.fourier(t));
    if (mags[i] > 1e-15) any_above = true;
  }

  DecayFit fit;
  fit.model = model;
  if (!any_above) {
    fit.degenerate = true;
    return fit;
  }

  // Window maxima so transform zeros do not poison the logs.
  size_t window = std::max<size_t>(1, t_grid.size() / 25);
  std::vector<double> xs, ys;
  for (size_t start = 0; start < t_grid.size(); start += window) {
    size_t end = std::min(t_grid.size(), start + window);
    double best = 0, tmid = t_grid[(start + end - 1) / 2];
    for (size_t i = start; i < end; ++i) best = std::max(best, mags[i]);
    if (best < 1e-300) continue;
    double x = model == DecayModel::PolyLog ? std::log(std::log(tmid)) : std::log(tmid);
    xs.push_back(x);
    ys.push_back(std::log(best));
  }
  if (xs.size() < 2) {
    fit.degenerate = true;
    return fit;
  }

  double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
    syy += ys[i] * ys[i];
  }
  double denom = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss_res = 0, mean_y = sy / n, ss_tot = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    double pred = fit.intercept + fit.slope * xs[i];
    ss_res += (ys[i] - pred) * (ys[i] - pred);
    ss_tot += (ys[i] - mean_y) * (ys[i] - mean_y);
  }
  fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  fit.n_points = static_cast<int>(xs.size());
  return fit;
}

}  // namespace torus::measures
