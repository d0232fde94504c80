#pragma once

#include <vector>

#include "torus/numeric.hpp"

namespace torus {

// Exact point of the torus [0,1)^d; every coordinate is a rational with
// 0 <= num < den.
class TorusPoint {
 public:
  TorusPoint() = default;
  explicit TorusPoint(std::vector<Rat> coords);  // requires coords in [0,1)

  static TorusPoint zero(int dim);

  int dim() const { return static_cast<int>(c_.size()); }
  const Rat& operator[](int i) const { return c_[i]; }
  const std::vector<Rat>& coords() const { return c_; }

  bool operator==(const TorusPoint& o) const = default;

 private:
  std::vector<Rat> c_;
};

// Componentwise fractional part in [0,1), exact.
TorusPoint reduce_mod1(const std::vector<Rat>& v);

}  // namespace torus
