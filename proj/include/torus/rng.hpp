#pragma once

#include <cstdint>
#include <random>

#include "torus/numeric.hpp"

namespace torus {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Per-sample seeds derive deterministically from (master seed, stream id).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(master ^ splitmix64(stream + 0x12fad5c9ULL));
}

// Deterministic bit source. mt19937_64 output is fixed by the standard, and
// all derived draws below avoid implementation-defined distributions.
class BitSource {
 public:
  explicit BitSource(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t word() { return eng_(); }

  // Uniform integer in [0, n), n >= 1, by rejection.
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    for (;;) {
      std::uint64_t w = eng_();
      if (w < limit) return w % n;
    }
  }

  // Uniform in [lo, hi] inclusive.
  long long range(long long lo, long long hi) {
    return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  // Uniform dyadic in [0,1) with 53 bits.
  double unit() { return static_cast<double>(eng_() >> 11) * 0x1p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  // Uniform integer with exactly `bits` random low bits.
  Int big_bits(unsigned bits) {
    Int v = 0;
    unsigned produced = 0;
    while (produced < bits) {
      unsigned take = std::min(64u, bits - produced);
      std::uint64_t w = eng_();
      if (take < 64) w &= (take == 64 ? ~0ULL : ((1ULL << take) - 1));
      v <<= take;
      v += w;
      produced += take;
    }
    return v;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace torus
