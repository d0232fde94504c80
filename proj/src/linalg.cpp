#include "torus/linalg.hpp"

#include <climits>

#include "torus/poly.hpp"

namespace torus::linalg {

IntMatrix::IntMatrix(int dim, std::vector<Int> entries)
    : dim_(dim), a_(std::move(entries)) {
  if (dim_ < 1 || a_.size() != static_cast<size_t>(dim_) * dim_)
    throw std::invalid_argument("IntMatrix: bad entry count");
}

IntMatrix IntMatrix::identity(int dim) {
  IntMatrix m(dim);
  for (int i = 0; i < dim; ++i) m.at(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::diagonal(std::vector<Int> d) {
  IntMatrix m(static_cast<int>(d.size()));
  for (size_t i = 0; i < d.size(); ++i) m.at(static_cast<int>(i), static_cast<int>(i)) = std::move(d[i]);
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long long>>& rows) {
  int d = static_cast<int>(rows.size());
  IntMatrix m(d);
  for (int i = 0; i < d; ++i) {
    if (static_cast<int>(rows[i].size()) != d)
      throw std::invalid_argument("from_rows: ragged rows");
    for (int j = 0; j < d; ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

RationalMatrix RationalMatrix::from_int(const IntMatrix& m) {
  RationalMatrix r(m.dim());
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) r.at(i, j) = Rat(m.at(i, j));
  return r;
}

RationalMatrix RationalMatrix::identity(int dim) {
  RationalMatrix m(dim);
  for (int i = 0; i < dim; ++i) m.at(i, i) = 1;
  return m;
}

bool RationalMatrix::is_integral() const {
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      if (denominator(at(i, j)) != 1) return false;
  return true;
}

IntMatrix RationalMatrix::to_int() const {
  IntMatrix m(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) {
      if (denominator(at(i, j)) != 1)
        throw std::logic_error("to_int on non-integral matrix");
      m.at(i, j) = numerator(at(i, j));
    }
  return m;
}

IntMatrix mul(const IntMatrix& a, const IntMatrix& b) {
  int d = a.dim();
  IntMatrix c(d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      const Int& aik = a.at(i, k);
      if (aik == 0) continue;
      for (int j = 0; j < d; ++j) c.at(i, j) += aik * b.at(k, j);
    }
  return c;
}

IntMatrix sub(const IntMatrix& a, const IntMatrix& b) {
  int d = a.dim();
  IntMatrix c(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) c.at(i, j) = a.at(i, j) - b.at(i, j);
  return c;
}

IntMatrix transpose(const IntMatrix& m) {
  IntMatrix t(m.dim());
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) t.at(j, i) = m.at(i, j);
  return t;
}

RationalMatrix mul(const RationalMatrix& a, const RationalMatrix& b) {
  int d = a.dim();
  RationalMatrix c(d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      const Rat& aik = a.at(i, k);
      if (aik == 0) continue;
      for (int j = 0; j < d; ++j) c.at(i, j) += aik * b.at(k, j);
    }
  return c;
}

RationalMatrix mul(const RationalMatrix& a, const IntMatrix& b) {
  return mul(a, RationalMatrix::from_int(b));
}

RationalMatrix transpose(const RationalMatrix& m) {
  RationalMatrix t(m.dim());
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) t.at(j, i) = m.at(i, j);
  return t;
}

std::vector<Int> apply(const IntMatrix& m, const std::vector<Int>& v) {
  std::vector<Int> out(m.dim());
  for (int i = 0; i < m.dim(); ++i) {
    Int acc = 0;
    for (int j = 0; j < m.dim(); ++j) acc += m.at(i, j) * v[j];
    out[i] = std::move(acc);
  }
  return out;
}

std::vector<Rat> apply(const RationalMatrix& m, const std::vector<Rat>& v) {
  std::vector<Rat> out(m.dim());
  for (int i = 0; i < m.dim(); ++i) {
    Rat acc = 0;
    for (int j = 0; j < m.dim(); ++j) acc += m.at(i, j) * v[j];
    out[i] = std::move(acc);
  }
  return out;
}

Int determinant(const IntMatrix& m) {
  // Bareiss fraction-free elimination: every division below is exact.
  int n = m.dim();
  IntMatrix w = m;
  Int prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (w.at(k, k) == 0) {
      int piv = -1;
      for (int i = k + 1; i < n; ++i)
        if (w.at(i, k) != 0) {
          piv = i;
          break;
        }
      if (piv < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(w.at(k, j), w.at(piv, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j)
        w.at(i, j) = (w.at(i, j) * w.at(k, k) - w.at(i, k) * w.at(k, j)) / prev;
      w.at(i, k) = 0;
    }
    prev = w.at(k, k);
  }
  return sign > 0 ? w.at(n - 1, n - 1) : -w.at(n - 1, n - 1);
}

Rat determinant(const RationalMatrix& m) {
  // Clear denominators row by row, then run the integer path.
  int n = m.dim();
  IntMatrix w(n);
  Rat scale = 1;
  for (int i = 0; i < n; ++i) {
    Int l = 1;
    for (int j = 0; j < n; ++j) l = boost::multiprecision::lcm(l, denominator(m.at(i, j)));
    for (int j = 0; j < n; ++j)
      w.at(i, j) = numerator(m.at(i, j)) * (l / denominator(m.at(i, j)));
    scale /= Rat(l);
  }
  return scale * Rat(determinant(w));
}

RationalMatrix inverse_rational(const RationalMatrix& m) {
  // Gauss-Jordan on [M | I]; pivots chosen exactly.
  int n = m.dim();
  RationalMatrix a = m;
  RationalMatrix inv = RationalMatrix::identity(n);
  for (int k = 0; k < n; ++k) {
    int piv = -1;
    for (int i = k; i < n; ++i)
      if (a.at(i, k) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) throw SingularMatrixError("inverse of singular matrix");
    if (piv != k)
      for (int j = 0; j < n; ++j) {
        std::swap(a.at(k, j), a.at(piv, j));
        std::swap(inv.at(k, j), inv.at(piv, j));
      }
    Rat p = a.at(k, k);
    for (int j = 0; j < n; ++j) {
      a.at(k, j) /= p;
      inv.at(k, j) /= p;
    }
    for (int i = 0; i < n; ++i) {
      if (i == k || a.at(i, k) == 0) continue;
      Rat f = a.at(i, k);
      for (int j = 0; j < n; ++j) {
        a.at(i, j) -= f * a.at(k, j);
        inv.at(i, j) -= f * inv.at(k, j);
      }
    }
  }
  return inv;
}

RationalMatrix inverse_rational(const IntMatrix& m) {
  return inverse_rational(RationalMatrix::from_int(m));
}

std::vector<Rat> char_poly(const RationalMatrix& m) {
  // Faddeev-LeVerrier: p(x) = x^d + c_1 x^(d-1) + ... + c_d.
  int d = m.dim();
  RationalMatrix mk(d);  // starts as the zero matrix
  std::vector<Rat> c(d + 1);
  c[0] = 1;
  Rat ck = 1;
  for (int k = 1; k <= d; ++k) {
    for (int i = 0; i < d; ++i) mk.at(i, i) += ck;
    mk = mul(m, mk);
    Rat tr = 0;
    for (int i = 0; i < d; ++i) tr += mk.at(i, i);
    ck = -tr / k;
    c[k] = ck;
  }
  // Ascending order.
  std::vector<Rat> asc(d + 1);
  for (int i = 0; i <= d; ++i) asc[i] = c[d - i];
  return asc;
}

namespace {

// Gram matrix M^T M; its eigenvalues are the squared singular values.
RationalMatrix gram(const RationalMatrix& m) {
  return mul(transpose(m), m);
}

// Smallest eigenvalue of the Gram matrix is at most its smallest diagonal
// entry (Rayleigh quotient at a coordinate vector).
Rat min_diagonal(const RationalMatrix& g) {
  Rat v = g.at(0, 0);
  for (int i = 1; i < g.dim(); ++i) v = std::min(v, g.at(i, i));
  return v;
}

// A point near `target` inside (lo, hi) that is not a root of the chain's
// polynomial. Roots are finitely many, so a short scan of distinct rationals
// terminates.
Rat nonroot_near(const poly::SturmChain& chain, const Rat& lo, const Rat& hi,
                 const Rat& target) {
  static const int nums[] = {0, 1, -1, 2, -2, 3, -3, 5, -5, 7, -7, 11, -11};
  Rat width = hi - lo;
  for (int den = 32; ; den *= 2) {
    for (int nu : nums) {
      Rat x = target + width * Rat(nu, den);
      if (x <= lo || x >= hi) continue;
      if (poly::sign_at(chain.seq.front(), x) != 0) return x;
    }
  }
}

}  // namespace

SigmaInterval smallest_singular_value(const RationalMatrix& m, double tol) {
  if (m.dim() < 1) throw std::invalid_argument("empty matrix");
  RationalMatrix g = gram(m);
  poly::IntPoly chi = poly::primitive_int(char_poly(g));
  poly::IntPoly sf = poly::squarefree_part(chi);
  poly::SturmChain chain(sf);

  // Eigenvalues of the Gram matrix are real and >= 0; -1 is never a root.
  Rat lo = -1;
  Rat hi = min_diagonal(g) + 1;
  if (poly::sign_at(sf, hi) == 0) hi = nonroot_near(chain, min_diagonal(g), hi + 1, hi);
  if (chain.count_roots_open(lo, hi) < 1)
    throw std::logic_error("smallest_singular_value: lost the minimal eigenvalue");

  if (!(tol > 0)) throw std::invalid_argument("tol must be positive");
  Rat tol_rat(tol);
  // sqrt enclosure granularity must sit well below tol or the loop below
  // can never reach the target width.
  unsigned bits = 64;
  while (std::ldexp(1.0, -static_cast<int>(bits)) > tol / 16 && bits < 4096) bits += 32;
  Rat slo, shi, tmp;
  for (;;) {
    Rat lam_lo = lo < 0 ? Rat(0) : lo;
    rat_sqrt_bounds(lam_lo, bits, slo, tmp);
    rat_sqrt_bounds(hi, bits, tmp, shi);
    if (shi - slo <= tol_rat) break;
    Rat mid = nonroot_near(chain, lo, hi, (lo + hi) / 2);
    if (chain.count_roots_open(lo, mid) >= 1)
      hi = mid;
    else
      lo = mid;
  }
  return SigmaInterval{slo, shi};
}

SigmaInterval smallest_singular_value(const IntMatrix& m, double tol) {
  return smallest_singular_value(RationalMatrix::from_int(m), tol);
}

bool is_expanding(const RationalMatrix& m) {
  if (m.dim() < 1) throw std::invalid_argument("empty matrix");
  RationalMatrix g = gram(m);
  poly::IntPoly sf = poly::squarefree_part(poly::primitive_int(char_poly(g)));
  // sigma_min > 1 iff chi(M^T M) has no eigenvalue in [0, 1]. Eigenvalues are
  // >= 0, so it is enough that 1 is not a root and (-1, 1) holds no root.
  if (poly::sign_at(sf, Rat(1)) == 0) return false;
  poly::SturmChain chain(sf);
  return chain.count_roots_open(Rat(-1), Rat(1)) == 0;
}

bool is_expanding(const IntMatrix& m) {
  return is_expanding(RationalMatrix::from_int(m));
}

MatrixSequence MatrixSequence::power(IntMatrix base) {
  MatrixSequence s;
  s.kind_ = Kind::Power;
  s.dim_ = base.dim();
  s.base_ = std::move(base);
  if (determinant(s.base_) == 0)
    throw SingularMatrixError("power sequence base is singular");
  return s;
}

MatrixSequence MatrixSequence::list(std::vector<IntMatrix> mats) {
  if (mats.empty()) throw std::invalid_argument("empty matrix list");
  MatrixSequence s;
  s.kind_ = Kind::List;
  s.dim_ = mats.front().dim();
  for (const auto& m : mats)
    if (m.dim() != s.dim_) throw std::invalid_argument("mixed dimensions in list");
  s.list_ = std::move(mats);
  return s;
}

MatrixSequence MatrixSequence::generated(int dim, std::function<IntMatrix(long)> gen) {
  MatrixSequence s;
  s.kind_ = Kind::Generated;
  s.dim_ = dim;
  s.gen_ = std::move(gen);
  return s;
}

IntMatrix MatrixSequence::at(long n) const {
  if (n < 1) throw std::invalid_argument("sequence index must be >= 1");
  switch (kind_) {
    case Kind::Power: {
      std::lock_guard<std::mutex> lock(cache_->mu);
      if (cache_->power_n == 0 || cache_->power_n > n) {
        cache_->power = base_;
        cache_->power_n = 1;
      }
      while (cache_->power_n < n) {
        cache_->power = mul(base_, cache_->power);
        ++cache_->power_n;
      }
      return cache_->power;
    }
    case Kind::List:
      if (n > static_cast<long>(list_.size()))
        throw std::out_of_range("sequence index beyond list length");
      return list_[n - 1];
    case Kind::Generated:
      return gen_(n);
  }
  throw std::logic_error("unreachable");
}

long MatrixSequence::max_index() const {
  return kind_ == Kind::List ? static_cast<long>(list_.size()) : LONG_MAX;
}

void MatrixSequence::validate_prefix(long n) const {
  {
    std::lock_guard<std::mutex> lock(cache_->mu);
    if (cache_->validated_upto >= n) return;
  }
  if (kind_ == Kind::Power) {
    // sigma_min is supermultiplicative, so an expanding base makes every
    // power expanding; only the base needs checking.
    if (!is_expanding(base_))
      throw GapViolationError("power base matrix is not expanding", 1);
  } else {
    long start;
    {
      std::lock_guard<std::mutex> lock(cache_->mu);
      start = cache_->validated_upto + 1;
    }
    for (long i = start; i <= n; ++i) {
      if (!is_expanding(at(i)))
        throw GapViolationError("sequence element is not expanding at index " +
                                    std::to_string(i),
                                i);
    }
  }
  std::lock_guard<std::mutex> lock(cache_->mu);
  cache_->validated_upto = std::max(cache_->validated_upto, n);
}

RatioResult ratio_matrix(const MatrixSequence& seq, long n) {
  if (n < 1) throw std::invalid_argument("ratio index must be >= 1");
  if (seq.kind() == MatrixSequence::Kind::Power) {
    RationalMatrix r = RationalMatrix::from_int(seq.base());
    return {r, true};
  }
  IntMatrix an = seq.at(n);
  IntMatrix an1 = seq.at(n + 1);
  if (determinant(an) == 0)
    throw SingularMatrixError("ratio through singular A_n at index " + std::to_string(n));
  RationalMatrix r = mul(RationalMatrix::from_int(an1), inverse_rational(an));
  return {r, r.is_integral()};
}

double gap_constant(const MatrixSequence& seq, long N, double tol) {
  if (N < 2) throw std::invalid_argument("gap_constant needs N >= 2");
  double best = std::numeric_limits<double>::infinity();
  bool constant_ratio = seq.kind() == MatrixSequence::Kind::Power;
  long last = constant_ratio ? 1 : N - 1;
  for (long n = 1; n <= last; ++n) {
    RatioResult rr = ratio_matrix(seq, n);
    if (!is_expanding(rr.ratio))
      throw GapViolationError(
          "ratio A_{n+1} A_n^-1 not expanding at index " + std::to_string(n), n);
    SigmaInterval si = smallest_singular_value(rr.ratio, tol);
    best = std::min(best, si.lo_double());
  }
  return best;
}

}  // namespace torus::linalg
