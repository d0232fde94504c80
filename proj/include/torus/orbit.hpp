#pragma once

#include <optional>
#include <vector>

#include "torus/linalg.hpp"
#include "torus/point.hpp"

namespace torus::orbit {

using linalg::IntMatrix;
using linalg::MatrixSequence;

// Shrinking-target radii r(n). Power-kind values with an integer exponent are
// exact rationals; a real exponent is evaluated in double and embedded as the
// exact dyadic it produces, so hit tests stay exact either way.
class RadiiSpec {
 public:
  enum class Kind { Constant, Power, Table };

  static RadiiSpec constant(std::vector<Rat> values);
  // r_i(n) = c_i * n^(-exponent)
  static RadiiSpec power(std::vector<Rat> c, double exponent);
  static RadiiSpec table(std::vector<std::vector<Rat>> rows);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  std::vector<Rat> at(long n) const;  // raw values, no regularization/cap

 private:
  RadiiSpec() = default;
  Kind kind_ = Kind::Constant;
  int dim_ = 0;
  std::vector<Rat> values_;
  double exponent_ = 0;
  std::vector<std::vector<Rat>> table_;
};

// Radii are capped just below 1/2 so the parallelepiped stays a proper
// subset of the torus even when a formula reaches or exceeds 1/2.
inline const Rat& radius_cap() {
  static const Rat cap = Rat(1, 2) - Rat(1, 1 << 20);
  return cap;
}

struct TargetSpec {
  TorusPoint center;
  RadiiSpec radii;
  std::optional<double> tau;  // regularization exponent, > 1

  int dim() const { return center.dim(); }
  // min(max(r_i(n), n^-tau), cap), exact rationals.
  std::vector<Rat> radii_at(long n) const;
  Rat psi_exact(long n) const;  // 2^d prod r_i(n)
  double psi(long n) const;
};

// Replaces the radii by min(max(r_i(n), n^-tau), cap); tau > 1.
TargetSpec regularize_radii(TargetSpec t, double tau);

// ||p_i - y_i|| <= r_i(n) for every i, exact closed condition.
bool hit(const TorusPoint& p, const TargetSpec& target, long n);

// Streaming A_n x mod 1. Every coordinate is kept as num/den with one shared
// denominator that never changes, so the fast path is pure integer
// arithmetic with no rational normalization.
class OrbitStream {
 public:
  OrbitStream(const TorusPoint& x, const MatrixSequence& seq);

  // Advances to the next index; first call lands on n = 1 (A_1 x mod 1).
  void advance();
  long index() const { return n_; }
  const Int& den() const { return den_; }
  const std::vector<Int>& nums() const { return nums_; }
  TorusPoint point() const;

  // Exact hit test against the target at the current index.
  bool hits(const TargetSpec& target) const;

 private:
  const MatrixSequence* seq_;
  long n_ = 0;
  Int den_;
  std::vector<Int> nums_;  // A_n x mod 1, over den_
  std::vector<Int> x0_;    // original point, over den_
  bool const_ratio_;
  IntMatrix ratio_;
};

// Materialized orbit prefix (A_n x mod 1) for n = 1..N.
std::vector<TorusPoint> orbit_points(const TorusPoint& x, const MatrixSequence& seq, long N);

// Slow-path reference: A_n x mod 1 computed directly from A_n; used to
// cross-check the streaming fast path.
TorusPoint orbit_point_direct(const TorusPoint& x, const MatrixSequence& seq, long n);

struct CountResult {
  long long total = 0;           // R(x, N)
  std::vector<long> hit_indices; // ascending
  long long count_at(long n) const;  // R(x, n) from the trace
};

CountResult count_hits(const TorusPoint& x, const MatrixSequence& seq,
                       const TargetSpec& target, long N);

// psi(n) and the cumulative Psi(n), n = 1..N. Accumulation is compensated
// long double; constant radii also carry the exact rational total.
struct PsiProfile {
  std::vector<double> psi;       // psi[n-1] = psi(n)
  std::vector<double> cum;       // cum[n-1] = Psi(n)
  std::optional<Rat> exact_total;
  double total() const { return cum.empty() ? 0.0 : cum.back(); }
};

PsiProfile psi_cumulative(const TargetSpec& target, long N);

}  // namespace torus::orbit
