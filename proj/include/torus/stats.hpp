#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "torus/approxfn.hpp"
#include "torus/lattice.hpp"
#include "torus/measures.hpp"
#include "torus/orbit.hpp"

namespace torus::stats {

using linalg::IntMatrix;
using linalg::MatrixSequence;
using measures::MeasureModel;
using orbit::TargetSpec;

struct FitResult {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
  int n_points = 0;
};

FitResult linear_fit(const std::vector<double>& xs, const std::vector<double>& ys);

struct SampleRecord {
  long sample_id = 0;
  std::uint64_t seed = 0;
  long N = 0;
  long long R = 0;
  double Psi = 0;
  double err = 0;             // R - Psi
  double normalized_err = 0;  // err / (Psi^{d/(d+1)} (log Psi + 2)^2.5)
};

struct ExperimentConfig {
  MeasureModel measure;
  MatrixSequence sequence;
  TargetSpec target;
  long N = 0;
  int samples = 0;
  std::uint64_t seed = 1;
  unsigned precision_bits = 0;  // 0 = default 2N + 64
  bool allow_low_precision = false;
  double error_exponent = -1;   // < 0 = default d/(d+1)
  double log_power = 2.5;
  int threads = 0;              // 0 = hardware concurrency

  // Resolves the precision default and enforces B >= 2N + 64 unless
  // explicitly overridden; throws PrecisionError naming the required B.
  unsigned effective_precision() const;
};

// Weyl average (1/N) sum_{n<=N} e(-<k, A_n x>) along the exact orbit.
std::complex<double> weyl_sum(const TorusPoint& x, const MatrixSequence& seq,
                              const std::vector<Int>& k, long N);

// (1/N^3) sum_{m,n<=N} mu^((A_n - A_m)^T k), via the diagonal/off-diagonal
// split 1/N^2 + (2/N^3) sum_{m<n} Re mu^(...).
double del_series_term(const MeasureModel& m, const MatrixSequence& seq,
                       const std::vector<Int>& k, long N);

// Fourier-side measure of the target building block: truncated
// sum_k h^(k) mu^(-k) over k = A^T k', |k'_i| <= T with the preconditioned
// truncation T >= 4/(sqrt(eps) min r).
struct FourierMeasureResult {
  double value;       // real part of the truncated sum
  double tail_bound;  // envelope bound on the omitted |h^| mass
  double imag_resid;  // |imaginary part|, a numerical sanity signal
};
FourierMeasureResult measure_of_target_fourier(const MeasureModel& m,
                                               const IntMatrix& a,
                                               const TargetSpec& target, long n,
                                               double eps, approxfn::Side side);

// Monte Carlo estimate of mu(E_n^y) with its confidence radius.
struct MCEstimate {
  double value;
  double radius;
};
MCEstimate measure_of_target_mc(const MeasureModel& m, const IntMatrix& a,
                                const TargetSpec& target, long n, long samples,
                                std::uint64_t seed, unsigned precision_bits = 128);

struct PairRow {
  long m = 0;
  long n = 0;
  double estimate = 0;
  double radius = 0;
  double psi_product = 0;
  double ratio = 0;
};
std::vector<PairRow> pair_correlation(const MeasureModel& m, const MatrixSequence& seq,
                                      const TargetSpec& target,
                                      const std::vector<std::pair<long, long>>& pairs,
                                      long samples, std::uint64_t seed,
                                      int threads = 0);

struct CheckpointRow {
  long N = 0;
  double Psi = 0;
  double mean_sq_err = 0;
  double phi_budget = 0;  // 4 sum_{n<=N} phi(n)
};

struct CountingResult {
  std::vector<SampleRecord> records;  // sorted by sample_id
  FitResult fit;                      // pooled log|R-Psi| vs log Psi
  std::vector<long> checkpoints;
  std::vector<CheckpointRow> variance_budget;
};

CountingResult counting_experiment(const ExperimentConfig& cfg);

enum class Regime { Convergent, Divergent };

struct DichotomySample {
  long sample_id = 0;
  std::uint64_t seed = 0;
  long long R = 0;
  double Psi = 0;
  double ratio = 0;
  long last_hit = 0;  // 0 when no hits
};

struct DichotomyResult {
  std::vector<DichotomySample> records;
  long long max_R = 0;
  double median_ratio = 0;
  std::string verdict;
};

DichotomyResult dichotomy_experiment(const ExperimentConfig& cfg, Regime regime);

// Star discrepancy: exact sorted-points formula for d = 1; 256^2 corner-grid
// approximation for d = 2 (grid error O(1/256) reported).
struct Discrepancy {
  double value;
  double grid_error;  // 0 for the exact d=1 path
};
Discrepancy star_discrepancy(const std::vector<TorusPoint>& points);

// Chunked deterministic parallel map; results keyed by index.
void parallel_for(long count, int threads, const std::function<void(long)>& fn);

}  // namespace torus::stats
