#pragma once

#include <algorithm>
#include <cmath>

namespace tlab::dynamics {

/// Fractional part in [0,1).
inline double wrap01(double v) {
  double r = v - std::floor(v);
  return r >= 1.0 ? 0.0 : r;
}

/// A point of the circle R/Z, stored in [0,1).
class CircleValue {
 public:
  constexpr CircleValue() = default;
  explicit CircleValue(double v) : value_(wrap01(v)) {}

  double value() const { return value_; }

  CircleValue operator+(double d) const { return CircleValue(value_ + d); }
  CircleValue operator-(double d) const { return CircleValue(value_ - d); }

  friend bool operator==(CircleValue, CircleValue) = default;

 private:
  double value_ = 0.0;
};

/// Torus distance min(|a-b|, 1-|a-b|).
inline double distance(CircleValue a, CircleValue b) {
  const double d = std::abs(a.value() - b.value());
  return std::min(d, 1.0 - d);
}

/// The pair (fast x, slow theta) on the two-torus.
struct ProductState {
  CircleValue x;
  CircleValue theta;
};

}  // namespace tlab::dynamics
