#include "torus/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "torus/rng.hpp"

namespace torus::stats {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

double log_plus(double x) { return std::max(0.0, std::log(x)); }

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}
}  // namespace

void parallel_for(long count, int threads, const std::function<void(long)>& fn) {
  int nt = std::min<long>(resolve_threads(threads), count);
  if (nt <= 1) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<long> next(0);
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (int t = 0; t < nt; ++t) {
    pool.emplace_back([&]() {
      for (;;) {
        long i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

FitResult linear_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("linear_fit: need >= 2 points");
  double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  FitResult f;
  double denom = n * sxx - sx * sx;
  if (denom == 0) throw std::invalid_argument("linear_fit: degenerate abscissae");
  f.slope = (n * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / n;
  double mean_y = sy / n, ss_res = 0, ss_tot = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    double pred = f.intercept + f.slope * xs[i];
    ss_res += (ys[i] - pred) * (ys[i] - pred);
    ss_tot += (ys[i] - mean_y) * (ys[i] - mean_y);
  }
  f.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  f.n_points = static_cast<int>(xs.size());
  return f;
}

unsigned ExperimentConfig::effective_precision() const {
  unsigned required = static_cast<unsigned>(2 * N + 64);
  if (precision_bits == 0) return required;
  if (precision_bits < required && !allow_low_precision)
    throw PrecisionError("precision_bits " + std::to_string(precision_bits) +
                         " below required " + std::to_string(required) +
                         " (= 2N + 64); set allow_low_precision to override");
  return precision_bits;
}

std::complex<double> weyl_sum(const TorusPoint& x, const MatrixSequence& seq,
                              const std::vector<Int>& k, long N) {
  bool zero = true;
  for (const auto& ki : k)
    if (ki != 0) zero = false;
  if (zero) throw std::invalid_argument("weyl_sum: k must be nonzero");
  if (N < 1) throw std::invalid_argument("weyl_sum: N must be >= 1");

  orbit::OrbitStream s(x, seq);
  long double re = 0, im = 0;
  for (long n = 1; n <= N; ++n) {
    s.advance();
    Int acc = 0;
    for (size_t i = 0; i < k.size(); ++i) acc += k[i] * s.nums()[i];
    double frac = unit_fraction_to_double(mod_floor(acc, s.den()), s.den());
    double ang = -kTwoPi * frac;
    re += std::cos(ang);
    im += std::sin(ang);
  }
  return {static_cast<double>(re / N), static_cast<double>(im / N)};
}

double del_series_term(const MeasureModel& m, const MatrixSequence& seq,
                       const std::vector<Int>& k, long N) {
  bool zero = true;
  for (const auto& ki : k)
    if (ki != 0) zero = false;
  if (zero) throw std::invalid_argument("del_series_term: k must be nonzero");
  const int d = seq.dim();

  // w_n = A_n^T k; incremental for power sequences.
  std::vector<std::vector<Int>> w(N);
  if (seq.kind() == MatrixSequence::Kind::Power) {
    IntMatrix bt = linalg::transpose(seq.base());
    w[0] = linalg::apply(bt, k);
    for (long n = 1; n < N; ++n) w[n] = linalg::apply(bt, w[n - 1]);
  } else {
    for (long n = 0; n < N; ++n)
      w[n] = linalg::apply(linalg::transpose(seq.at(n + 1)), k);
  }

  long double off = 0;
  std::vector<Int> diff(d);
  for (long mi = 0; mi < N; ++mi)
    for (long n = mi + 1; n < N; ++n) {
      for (int i = 0; i < d; ++i) diff[i] = w[n][i] - w[mi][i];
      off += m.fourier_int(diff).real();
    }
  long double nn = static_cast<long double>(N);
  return static_cast<double>(1.0L / (nn * nn) + 2.0L * off / (nn * nn * nn));
}

FourierMeasureResult measure_of_target_fourier(const MeasureModel& m,
                                               const IntMatrix& a,
                                               const TargetSpec& target, long n,
                                               double eps, approxfn::Side side) {
  const int d = a.dim();
  std::vector<Rat> rr = target.radii_at(n);
  std::vector<double> radii(d);
  double min_r = 1;
  for (int i = 0; i < d; ++i) {
    radii[i] = rat_to_double(rr[i]);
    min_r = std::min(min_r, radii[i]);
  }
  long T = static_cast<long>(std::ceil(4.0 / (std::sqrt(eps) * min_r)));

  IntMatrix at = linalg::transpose(a);
  std::complex<double> acc(0, 0);
  std::vector<long long> kp(d, 0);
  std::vector<Int> kvec(d);
  std::vector<long long> idx(d, -T);
  for (;;) {
    for (int i = 0; i < d; ++i) kp[i] = idx[i];
    std::complex<double> h = approxfn::h_fourier_from_kprime(
        target.center, radii, eps, side, kp);
    if (std::abs(h) > 0) {
      // mu^(-A^T k')
      for (int i = 0; i < d; ++i) {
        Int v = 0;
        for (int j = 0; j < d; ++j) v += at.at(i, j) * Int(kp[j]);
        kvec[i] = -v;
      }
      acc += h * m.fourier_int(kvec);
    }
    int axis = d - 1;
    while (axis >= 0) {
      ++idx[axis];
      if (idx[axis] <= T) break;
      idx[axis] = -T;
      --axis;
    }
    if (axis < 0) break;
  }

  // Envelope tail: |chi^(u)| <= 1/(2 pi^2 a b u^2) with a, b the box
  // half-widths, summed beyond T and combined by a union bound.
  double tail = 0;
  std::vector<double> line(d), beyond(d);
  for (int i = 0; i < d; ++i) {
    approxfn::TrapezoidSpec spec{radii[i], eps, side};
    double av = 0.5 * (spec.plateau() + spec.support());
    double bv = 0.5 * (spec.support() - spec.plateau());
    double c2 = 1.0 / (2.0 * M_PI * M_PI * av * bv);
    beyond[i] = 2.0 * c2 / static_cast<double>(T);
    double s = std::abs(approxfn::trapezoid_fourier_1d(spec, 0));
    for (long u = 1; u <= T; ++u)
      s += 2.0 * std::abs(approxfn::trapezoid_fourier_1d(spec, static_cast<double>(u)));
    line[i] = s + beyond[i];
  }
  for (int i = 0; i < d; ++i) {
    double prod = beyond[i];
    for (int j = 0; j < d; ++j)
      if (j != i) prod *= line[j];
    tail += prod;
  }
  return {acc.real(), tail, std::abs(acc.imag())};
}

MCEstimate measure_of_target_mc(const MeasureModel& m, const IntMatrix& a,
                                const TargetSpec& target, long n, long samples,
                                std::uint64_t seed, unsigned precision_bits) {
  if (samples < 1000)
    throw std::invalid_argument("measure_of_target_mc: need >= 1000 samples");
  long hits = 0;
  for (long j = 0; j < samples; ++j) {
    TorusPoint x = m.sampler(derive_seed(seed, static_cast<std::uint64_t>(j)),
                             precision_bits);
    std::vector<Rat> v(a.dim());
    for (int i = 0; i < a.dim(); ++i) {
      Rat accu = 0;
      for (int j2 = 0; j2 < a.dim(); ++j2) accu += Rat(a.at(i, j2)) * x[j2];
      v[i] = accu;
    }
    if (orbit::hit(reduce_mod1(v), target, n)) ++hits;
  }
  double p = static_cast<double>(hits) / static_cast<double>(samples);
  double radius = 2.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(samples)) +
                  2.0 / static_cast<double>(samples);
  return {p, radius};
}

std::vector<PairRow> pair_correlation(const MeasureModel& m, const MatrixSequence& seq,
                                      const TargetSpec& target,
                                      const std::vector<std::pair<long, long>>& pairs,
                                      long samples, std::uint64_t seed, int threads) {
  if (samples < 10000)
    throw std::invalid_argument("pair_correlation: need >= 10^4 samples");
  long max_n = 0;
  for (const auto& [pm, pn] : pairs) max_n = std::max({max_n, pm, pn});
  unsigned bits = static_cast<unsigned>(2 * max_n + 64);

  // Needed orbit indices.
  std::vector<long> need;
  for (const auto& [pm, pn] : pairs) {
    need.push_back(pm);
    need.push_back(pn);
  }
  std::sort(need.begin(), need.end());
  need.erase(std::unique(need.begin(), need.end()), need.end());
  std::vector<long> slot(max_n + 1, -1);
  for (size_t i = 0; i < need.size(); ++i) slot[need[i]] = static_cast<long>(i);

  std::vector<std::vector<char>> hits(samples, std::vector<char>(need.size(), 0));
  parallel_for(samples, threads, [&](long j) {
    TorusPoint x = m.sampler(derive_seed(seed, static_cast<std::uint64_t>(j)), bits);
    orbit::OrbitStream s(x, seq);
    for (long n = 1; n <= max_n; ++n) {
      s.advance();
      if (slot[n] >= 0 && s.hits(target)) hits[j][slot[n]] = 1;
    }
  });

  std::vector<PairRow> rows;
  rows.reserve(pairs.size());
  for (const auto& [pm, pn] : pairs) {
    long joint = 0;
    for (long j = 0; j < samples; ++j)
      if (hits[j][slot[pm]] && hits[j][slot[pn]]) ++joint;
    double p = static_cast<double>(joint) / static_cast<double>(samples);
    double radius = 2.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(samples)) +
                    2.0 / static_cast<double>(samples);
    double psi_prod = target.psi(pm) * target.psi(pn);
    rows.push_back({pm, pn, p, radius, psi_prod, psi_prod > 0 ? p / psi_prod : 0.0});
  }
  return rows;
}

namespace {

std::vector<long> make_checkpoints(long N) {
  std::vector<long> cps;
  for (long c = 64; c < N; c *= 2) cps.push_back(c);
  cps.push_back(N);
  return cps;
}

}  // namespace

CountingResult counting_experiment(const ExperimentConfig& cfg) {
  const int d = cfg.sequence.dim();
  unsigned bits = cfg.effective_precision();
  double exponent = cfg.error_exponent < 0
                        ? static_cast<double>(d) / (d + 1)
                        : cfg.error_exponent;
  cfg.sequence.validate_prefix(std::min(cfg.N, cfg.sequence.max_index()));

  orbit::PsiProfile psis = orbit::psi_cumulative(cfg.target, cfg.N);
  std::vector<long> cps = make_checkpoints(cfg.N);

  CountingResult out;
  out.checkpoints = cps;
  out.records.resize(cfg.samples);
  std::vector<std::vector<long long>> cp_R(cfg.samples,
                                           std::vector<long long>(cps.size(), 0));

  parallel_for(cfg.samples, cfg.threads, [&](long id) {
    std::uint64_t sseed = derive_seed(cfg.seed, static_cast<std::uint64_t>(id));
    TorusPoint x = cfg.measure.sampler(sseed, bits);
    orbit::CountResult cr = orbit::count_hits(x, cfg.sequence, cfg.target, cfg.N);
    for (size_t c = 0; c < cps.size(); ++c) cp_R[id][c] = cr.count_at(cps[c]);

    SampleRecord rec;
    rec.sample_id = id;
    rec.seed = sseed;
    rec.N = cfg.N;
    rec.R = cr.total;
    rec.Psi = psis.total();
    rec.err = static_cast<double>(rec.R) - rec.Psi;
    double denom = std::pow(rec.Psi, exponent) *
                   std::pow(std::log(rec.Psi) + 2.0, cfg.log_power);
    rec.normalized_err = denom > 0 ? rec.err / denom : 0.0;
    out.records[id] = rec;
  });

  // Pooled regression of log |R - Psi| on log Psi across samples and
  // checkpoints. Zero errors are clamped at 0.5, below count resolution.
  std::vector<double> xs, ys;
  for (size_t c = 0; c < cps.size(); ++c) {
    double Psi_c = psis.cum[cps[c] - 1];
    if (Psi_c <= 0) continue;
    for (long id = 0; id < cfg.samples; ++id) {
      double err = std::abs(static_cast<double>(cp_R[id][c]) - Psi_c);
      xs.push_back(std::log(Psi_c));
      ys.push_back(std::log(std::max(err, 0.5)));
    }
  }
  out.fit = linear_fit(xs, ys);

  // Variance budget: empirical mean (R - Psi)^2 at each checkpoint against
  // 4 sum phi(n), phi(n) = psi(n) Psi(n)^{(d-1)/(d+1)} (log+ Psi(n) + 1) + 2 psi(n).
  std::vector<double> phi_cum(cps.size(), 0);
  {
    long double acc = 0;
    size_t c = 0;
    double dd = static_cast<double>(d);
    for (long n = 1; n <= cfg.N && c < cps.size(); ++n) {
      double psi_n = psis.psi[n - 1];
      double Psi_n = psis.cum[n - 1];
      acc += psi_n * std::pow(Psi_n, (dd - 1.0) / (dd + 1.0)) * (log_plus(Psi_n) + 1.0) +
             2.0 * psi_n;
      if (n == cps[c]) phi_cum[c++] = static_cast<double>(acc);
    }
  }
  for (size_t c = 0; c < cps.size(); ++c) {
    double Psi_c = psis.cum[cps[c] - 1];
    double msq = 0;
    for (long id = 0; id < cfg.samples; ++id) {
      double e = static_cast<double>(cp_R[id][c]) - Psi_c;
      msq += e * e;
    }
    msq /= static_cast<double>(cfg.samples);
    out.variance_budget.push_back({cps[c], Psi_c, msq, 4.0 * phi_cum[c]});
  }
  return out;
}

DichotomyResult dichotomy_experiment(const ExperimentConfig& cfg, Regime regime) {
  unsigned bits = cfg.effective_precision();
  cfg.sequence.validate_prefix(std::min(cfg.N, cfg.sequence.max_index()));
  orbit::PsiProfile psis = orbit::psi_cumulative(cfg.target, cfg.N);
  double Psi = psis.total();

  DichotomyResult out;
  out.records.resize(cfg.samples);
  parallel_for(cfg.samples, cfg.threads, [&](long id) {
    std::uint64_t sseed = derive_seed(cfg.seed, static_cast<std::uint64_t>(id));
    TorusPoint x = cfg.measure.sampler(sseed, bits);
    orbit::CountResult cr = orbit::count_hits(x, cfg.sequence, cfg.target, cfg.N);
    DichotomySample s;
    s.sample_id = id;
    s.seed = sseed;
    s.R = cr.total;
    s.Psi = Psi;
    s.ratio = Psi > 0 ? static_cast<double>(cr.total) / Psi : 0.0;
    s.last_hit = cr.hit_indices.empty() ? 0 : cr.hit_indices.back();
    out.records[id] = s;
  });

  std::vector<double> ratios;
  long late = 0;
  for (const auto& r : out.records) {
    out.max_R = std::max(out.max_R, r.R);
    ratios.push_back(r.ratio);
    if (r.last_hit > cfg.N / 2) ++late;
  }
  std::sort(ratios.begin(), ratios.end());
  out.median_ratio = ratios[ratios.size() / 2];

  if (regime == Regime::Convergent) {
    bool ok = late <= cfg.samples / 10 &&
              static_cast<double>(out.max_R) <= 20.0 * (1.0 + Psi);
    out.verdict = ok ? "convergent-consistent" : "convergent-inconsistent";
  } else {
    long with_hits = 0;
    for (const auto& r : out.records)
      if (r.R >= 1) ++with_hits;
    bool ok = with_hits >= cfg.samples - cfg.samples / 10 &&
              out.median_ratio >= 0.25 && out.median_ratio <= 4.0;
    out.verdict = ok ? "divergent-consistent" : "divergent-inconsistent";
  }
  return out;
}

Discrepancy star_discrepancy(const std::vector<TorusPoint>& points) {
  if (points.empty()) throw std::invalid_argument("star_discrepancy: empty set");
  int d = points.front().dim();
  size_t N = points.size();
  if (N > 10000) throw std::invalid_argument("star_discrepancy: N <= 10^4");
  if (d == 1) {
    std::vector<double> xs(N);
    for (size_t i = 0; i < N; ++i) xs[i] = rat_to_double(points[i][0]);
    std::sort(xs.begin(), xs.end());
    double worst = 0;
    for (size_t i = 1; i <= N; ++i) {
      double x = xs[i - 1];
      worst = std::max(worst, std::abs(static_cast<double>(i) / N - x));
      worst = std::max(worst, std::abs(x - static_cast<double>(i - 1) / N));
    }
    return {worst, 0.0};
  }
  if (d == 2) {
    constexpr int G = 256;
    std::vector<std::vector<long>> cell(G, std::vector<long>(G, 0));
    for (const auto& p : points) {
      int i = std::min(G - 1, static_cast<int>(rat_to_double(p[0]) * G));
      int j = std::min(G - 1, static_cast<int>(rat_to_double(p[1]) * G));
      ++cell[i][j];
    }
    // cum[i][j] = # points in [0, i/G) x [0, j/G)
    std::vector<std::vector<long>> cum(G + 1, std::vector<long>(G + 1, 0));
    for (int i = 1; i <= G; ++i)
      for (int j = 1; j <= G; ++j)
        cum[i][j] = cell[i - 1][j - 1] + cum[i - 1][j] + cum[i][j - 1] - cum[i - 1][j - 1];
    double worst = 0;
    for (int i = 0; i <= G; ++i)
      for (int j = 0; j <= G; ++j) {
        double a = static_cast<double>(i) / G, b = static_cast<double>(j) / G;
        double f = static_cast<double>(cum[i][j]) / static_cast<double>(N);
        worst = std::max(worst, std::abs(f - a * b));
      }
    return {worst, 2.0 / G};
  }
  throw UnsupportedDimensionError("star_discrepancy supports d in {1,2}");
}

}  // namespace torus::stats
