#include "torus/orbit.hpp"

#include <algorithm>
#include <cmath>

namespace torus {

TorusPoint::TorusPoint(std::vector<Rat> coords) : c_(std::move(coords)) {
  for (const auto& x : c_)
    if (x < 0 || x >= 1)
      throw std::invalid_argument("TorusPoint coordinate outside [0,1)");
}

TorusPoint TorusPoint::zero(int dim) {
  return TorusPoint(std::vector<Rat>(dim, Rat(0)));
}

TorusPoint reduce_mod1(const std::vector<Rat>& v) {
  std::vector<Rat> c(v.size());
  for (size_t i = 0; i < v.size(); ++i) c[i] = rat_frac(v[i]);
  return TorusPoint(std::move(c));
}

}  // namespace torus

namespace torus::orbit {

RadiiSpec RadiiSpec::constant(std::vector<Rat> values) {
  RadiiSpec r;
  r.kind_ = Kind::Constant;
  r.dim_ = static_cast<int>(values.size());
  r.values_ = std::move(values);
  for (const auto& v : r.values_)
    if (v <= 0) throw std::invalid_argument("radii must be positive");
  return r;
}

RadiiSpec RadiiSpec::power(std::vector<Rat> c, double exponent) {
  RadiiSpec r;
  r.kind_ = Kind::Power;
  r.dim_ = static_cast<int>(c.size());
  r.values_ = std::move(c);
  r.exponent_ = exponent;
  for (const auto& v : r.values_)
    if (v <= 0) throw std::invalid_argument("radii coefficients must be positive");
  return r;
}

RadiiSpec RadiiSpec::table(std::vector<std::vector<Rat>> rows) {
  if (rows.empty()) throw std::invalid_argument("empty radii table");
  RadiiSpec r;
  r.kind_ = Kind::Table;
  r.dim_ = static_cast<int>(rows.front().size());
  r.table_ = std::move(rows);
  return r;
}

std::vector<Rat> RadiiSpec::at(long n) const {
  if (n < 1) throw std::invalid_argument("radii index must be >= 1");
  switch (kind_) {
    case Kind::Constant:
      return values_;
    case Kind::Power: {
      std::vector<Rat> out(values_);
      double e = exponent_;
      if (e == std::floor(e) && std::abs(e) < 64) {
        Int p = 1;
        for (long k = 0; k < static_cast<long>(std::abs(e)); ++k) p *= n;
        for (auto& v : out) {
          if (e >= 0) v /= Rat(p);
          else v *= Rat(p);
        }
      } else {
        Rat scale(std::pow(static_cast<double>(n), -e));
        for (auto& v : out) v *= scale;
      }
      return out;
    }
    case Kind::Table:
      if (n > static_cast<long>(table_.size()))
        throw std::out_of_range("radii table shorter than requested index");
      return table_[n - 1];
  }
  throw std::logic_error("unreachable");
}

std::vector<Rat> TargetSpec::radii_at(long n) const {
  std::vector<Rat> r = radii.at(n);
  if (tau) {
    Rat reg(std::pow(static_cast<double>(n), -*tau));
    for (auto& v : r) v = std::max(v, reg);
  }
  for (auto& v : r) {
    v = std::min(v, radius_cap());
    if (v <= 0) throw std::invalid_argument("radius must stay positive");
  }
  return r;
}

Rat TargetSpec::psi_exact(long n) const {
  Rat p = 1;
  for (const auto& r : radii_at(n)) p *= 2 * r;
  return p;
}

double TargetSpec::psi(long n) const { return rat_to_double(psi_exact(n)); }

TargetSpec regularize_radii(TargetSpec t, double tau) {
  if (!(tau > 1)) throw std::invalid_argument("tau must exceed 1");
  t.tau = tau;
  return t;
}

namespace {

// ||p - y|| <= r with p = pn/pd, all integer arithmetic.
bool coord_hit(const Int& pn, const Int& pd, const Rat& y, const Rat& r) {
  const Int& yn = numerator(y);
  const Int& yd = denominator(y);
  Int common = pd * yd;
  Int diff = mod_floor(pn * yd - yn * pd, common);
  Int wrap = common - diff;
  const Int& dist = diff < wrap ? diff : wrap;
  // dist/common <= rn/rd
  return dist * denominator(r) <= numerator(r) * common;
}

}  // namespace

bool hit(const TorusPoint& p, const TargetSpec& target, long n) {
  if (p.dim() != target.dim())
    throw std::invalid_argument("hit: dimension mismatch");
  std::vector<Rat> r = target.radii_at(n);
  for (int i = 0; i < p.dim(); ++i)
    if (!coord_hit(numerator(p[i]), denominator(p[i]), target.center[i], r[i]))
      return false;
  return true;
}

OrbitStream::OrbitStream(const TorusPoint& x, const MatrixSequence& seq)
    : seq_(&seq), const_ratio_(seq.constant_integral_ratio()) {
  const int d = seq.dim();
  if (x.dim() != d) throw std::invalid_argument("orbit: dimension mismatch");
  den_ = 1;
  for (int i = 0; i < d; ++i)
    den_ = boost::multiprecision::lcm(den_, denominator(x[i]));
  x0_.resize(d);
  for (int i = 0; i < d; ++i) x0_[i] = numerator(x[i]) * (den_ / denominator(x[i]));
  nums_ = x0_;
  if (const_ratio_) ratio_ = seq.base();
}

void OrbitStream::advance() {
  const int d = seq_->dim();
  std::vector<Int> next(d);
  if (n_ == 0 || const_ratio_) {
    const IntMatrix& m = const_ratio_ ? ratio_ : seq_->at(1);
    for (int i = 0; i < d; ++i) {
      Int acc = 0;
      for (int j = 0; j < d; ++j) acc += m.at(i, j) * nums_[j];
      next[i] = mod_floor(acc, den_);
    }
  } else {
    linalg::RatioResult rr = linalg::ratio_matrix(*seq_, n_);
    if (rr.integral) {
      IntMatrix q = rr.ratio.to_int();
      for (int i = 0; i < d; ++i) {
        Int acc = 0;
        for (int j = 0; j < d; ++j) acc += q.at(i, j) * nums_[j];
        next[i] = mod_floor(acc, den_);
      }
    } else {
      // Non-integral ratio: fall back to A_{n+1} x directly.
      IntMatrix a = seq_->at(n_ + 1);
      for (int i = 0; i < d; ++i) {
        Int acc = 0;
        for (int j = 0; j < d; ++j) acc += a.at(i, j) * x0_[j];
        next[i] = mod_floor(acc, den_);
      }
    }
  }
  nums_ = std::move(next);
  ++n_;
}

TorusPoint OrbitStream::point() const {
  std::vector<Rat> c(nums_.size());
  for (size_t i = 0; i < nums_.size(); ++i) c[i] = Rat(nums_[i], den_);
  return TorusPoint(std::move(c));
}

bool OrbitStream::hits(const TargetSpec& target) const {
  std::vector<Rat> r = target.radii_at(n_);
  for (size_t i = 0; i < nums_.size(); ++i)
    if (!coord_hit(nums_[i], den_, target.center[static_cast<int>(i)], r[i]))
      return false;
  return true;
}

std::vector<TorusPoint> orbit_points(const TorusPoint& x, const MatrixSequence& seq, long N) {
  std::vector<TorusPoint> out;
  out.reserve(N);
  OrbitStream s(x, seq);
  for (long n = 1; n <= N; ++n) {
    s.advance();
    out.push_back(s.point());
  }
  return out;
}

TorusPoint orbit_point_direct(const TorusPoint& x, const MatrixSequence& seq, long n) {
  IntMatrix a = seq.at(n);
  std::vector<Rat> v(a.dim());
  for (int i = 0; i < a.dim(); ++i) {
    Rat acc = 0;
    for (int j = 0; j < a.dim(); ++j) acc += Rat(a.at(i, j)) * x[j];
    v[i] = acc;
  }
  return reduce_mod1(v);
}

long long CountResult::count_at(long n) const {
  auto it = std::upper_bound(hit_indices.begin(), hit_indices.end(), n);
  return static_cast<long long>(it - hit_indices.begin());
}

CountResult count_hits(const TorusPoint& x, const MatrixSequence& seq,
                       const TargetSpec& target, long N) {
  seq.validate_prefix(std::min(N, seq.max_index()));
  CountResult res;
  OrbitStream s(x, seq);
  for (long n = 1; n <= N; ++n) {
    s.advance();
    if (s.hits(target)) res.hit_indices.push_back(n);
  }
  res.total = static_cast<long long>(res.hit_indices.size());
  return res;
}

PsiProfile psi_cumulative(const TargetSpec& target, long N) {
  PsiProfile p;
  p.psi.resize(N);
  p.cum.resize(N);
  long double acc = 0, comp = 0;
  for (long n = 1; n <= N; ++n) {
    double v = target.psi(n);
    p.psi[n - 1] = v;
    long double y = static_cast<long double>(v) - comp;
    long double t = acc + y;
    comp = (t - acc) - y;
    acc = t;
    p.cum[n - 1] = static_cast<double>(acc);
  }
  if (target.radii.kind() == RadiiSpec::Kind::Constant)
    p.exact_total = target.psi_exact(1) * N;
  return p;
}

}  // namespace torus::orbit
