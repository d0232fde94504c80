#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "torus/numeric.hpp"

namespace torus::linalg {

// Dense square matrix with arbitrary-precision integer entries, row-major.
class IntMatrix {
 public:
  IntMatrix() : dim_(0) {}
  explicit IntMatrix(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * dim) {}
  IntMatrix(int dim, std::vector<Int> entries);

  static IntMatrix identity(int dim);
  static IntMatrix diagonal(std::vector<Int> d);
  static IntMatrix from_rows(const std::vector<std::vector<long long>>& rows);

  int dim() const { return dim_; }
  Int& at(int i, int j) { return a_[static_cast<size_t>(i) * dim_ + j]; }
  const Int& at(int i, int j) const { return a_[static_cast<size_t>(i) * dim_ + j]; }

  bool operator==(const IntMatrix& o) const = default;

 private:
  int dim_;
  std::vector<Int> a_;
};

class RationalMatrix {
 public:
  RationalMatrix() : dim_(0) {}
  explicit RationalMatrix(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * dim) {}

  static RationalMatrix from_int(const IntMatrix& m);
  static RationalMatrix identity(int dim);

  int dim() const { return dim_; }
  Rat& at(int i, int j) { return a_[static_cast<size_t>(i) * dim_ + j]; }
  const Rat& at(int i, int j) const { return a_[static_cast<size_t>(i) * dim_ + j]; }

  bool is_integral() const;
  IntMatrix to_int() const;  // requires is_integral()

  bool operator==(const RationalMatrix& o) const = default;

 private:
  int dim_;
  std::vector<Rat> a_;
};

IntMatrix mul(const IntMatrix& a, const IntMatrix& b);
IntMatrix sub(const IntMatrix& a, const IntMatrix& b);
IntMatrix transpose(const IntMatrix& m);
RationalMatrix mul(const RationalMatrix& a, const RationalMatrix& b);
RationalMatrix mul(const RationalMatrix& a, const IntMatrix& b);
RationalMatrix transpose(const RationalMatrix& m);
std::vector<Int> apply(const IntMatrix& m, const std::vector<Int>& v);
std::vector<Rat> apply(const RationalMatrix& m, const std::vector<Rat>& v);

// Exact determinant by fraction-free (Bareiss) elimination.
Int determinant(const IntMatrix& m);
Rat determinant(const RationalMatrix& m);

// Exact inverse; throws SingularMatrixError when det == 0.
RationalMatrix inverse_rational(const IntMatrix& m);
RationalMatrix inverse_rational(const RationalMatrix& m);

// Certified enclosure of the smallest singular value.
struct SigmaInterval {
  Rat lo, hi;  // lo <= sigma_min <= hi, hi - lo <= tol
  double lo_double() const { return rat_to_double_down(lo); }
  double hi_double() const { return rat_to_double_up(hi); }
};

SigmaInterval smallest_singular_value(const RationalMatrix& m, double tol = 1e-12);
SigmaInterval smallest_singular_value(const IntMatrix& m, double tol = 1e-12);

// All singular values strictly exceed 1, decided exactly (Sturm count of the
// characteristic polynomial of M^T M over (-1, 1], no floating tolerance).
bool is_expanding(const RationalMatrix& m);
bool is_expanding(const IntMatrix& m);

// Characteristic polynomial of a rational matrix (ascending coefficients,
// exact, by the Faddeev-LeVerrier recurrence). Exposed for tests.
std::vector<Rat> char_poly(const RationalMatrix& m);

// The expanding sequence (A_n). Power sequences cache the running power so
// sequential access costs one multiply per step.
class MatrixSequence {
 public:
  enum class Kind { Power, List, Generated };

  static MatrixSequence power(IntMatrix base);
  static MatrixSequence list(std::vector<IntMatrix> mats);
  static MatrixSequence generated(int dim, std::function<IntMatrix(long)> gen);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  const IntMatrix& base() const { return base_; }
  std::optional<double> claimed_gap;

  // A_n, 1-based.
  IntMatrix at(long n) const;
  long max_index() const;  // LONG_MAX unless Kind::List

  // True when the ratio A_{n+1} A_n^{-1} is the same integral matrix for all
  // n (power sequences); orbit iteration then avoids A_n entirely.
  bool constant_integral_ratio() const { return kind_ == Kind::Power; }

  // Ensures A_1..A_n are expanding; cached. Throws GapViolationError with the
  // offending index otherwise.
  void validate_prefix(long n) const;

 private:
  MatrixSequence() = default;
  Kind kind_ = Kind::Power;
  int dim_ = 0;
  IntMatrix base_;
  std::vector<IntMatrix> list_;
  std::function<IntMatrix(long)> gen_;

  // Cached immutable facts (running power, validated prefix); shared across
  // copies and guarded for concurrent use.
  struct Cache {
    std::mutex mu;
    long power_n = 0;
    IntMatrix power;
    long validated_upto = 0;
  };
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

// A_{n+1} A_n^{-1}, exact, with integrality flag.
struct RatioResult {
  RationalMatrix ratio;
  bool integral;
};
RatioResult ratio_matrix(const MatrixSequence& seq, long n);

// min over 1 <= n < N of the certified lower bound on sigma(A_{n+1} A_n^-1).
// Throws GapViolationError if some ratio is not expanding.
double gap_constant(const MatrixSequence& seq, long N, double tol = 1e-12);

}  // namespace torus::linalg
