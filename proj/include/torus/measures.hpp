#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "torus/point.hpp"

namespace torus::measures {

enum class DecayClass { Polylog, Polynomial, None, Unknown };

struct DecayClaim {
  DecayClass cls = DecayClass::Unknown;
  double s = 0;
};

// A measure on [0,1)^d given by a Fourier-transform evaluator and an exact
// sampler. All built-in models are coordinate products; density1d is the
// per-coordinate density when one exists (used by quadrature oracles).
struct MeasureModel {
  std::string name;
  int dim = 1;
  std::function<std::complex<double>(const std::vector<double>&)> fourier;
  // Exact integer frequencies; detects exact zeros (e.g. Lebesgue at any
  // nonzero integer vector) without overflow on huge arguments.
  std::function<std::complex<double>(const std::vector<Int>&)> fourier_int;
  std::function<TorusPoint(std::uint64_t seed, unsigned precision_bits)> sampler;
  std::function<double(double)> density1d;  // null when no density
  DecayClaim decay_claim;
};

MeasureModel lebesgue(int dim);
MeasureModel smooth_density(int dim, int density_id = 0);
MeasureModel cantor_middle_third(int dim);

// Monte Carlo transform estimate: mean of e(-2 pi i <t, x_j>) over M samples;
// the radius 2/sqrt(M) is a ~95% confidence bound.
struct FourierEstimate {
  std::complex<double> value;
  double radius;
};
FourierEstimate empirical_fourier(const MeasureModel& m, const std::vector<double>& t,
                                  long samples, std::uint64_t seed,
                                  unsigned precision_bits = 128);

enum class DecayModel { PolyLog, Polynomial };

struct DecayFit {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
  int n_points = 0;
  DecayModel model = DecayModel::PolyLog;
  bool degenerate = false;  // all grid values below 1e-15
};

// Least-squares fit of log(max-local |mu^|) against log log |t| (PolyLog)
// or log |t| (Polynomial). The grid must span >= 4 decades and hold >= 20
// points; local maxima over windows keep transform zeros out of the logs.
DecayFit decay_fit(const MeasureModel& m, const std::vector<double>& t_grid,
                   DecayModel model, const std::vector<double>& direction = {});

}  // namespace torus::measures
