#pragma once

#include <algorithm>
#include <cmath>
#include <string>

namespace dk {

// Closed real interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }

  bool contains(double x, double tol = 0.0) const {
    return x >= lo - tol && x <= hi + tol;
  }
  bool contains(const Interval& other, double tol = 0.0) const {
    return other.lo >= lo - tol && other.hi <= hi + tol;
  }
  bool intersects(const Interval& other) const {
    return other.lo <= hi && lo <= other.hi;
  }

  double clamp(double x) const { return std::min(hi, std::max(lo, x)); }

  static Interval hull(double a, double b) {
    return a <= b ? Interval{a, b} : Interval{b, a};
  }
};

inline double distance(const Interval& I, double p) {
  if (p < I.lo) return I.lo - p;
  if (p > I.hi) return p - I.hi;
  return 0.0;
}

inline double distance(const Interval& I, const Interval& J) {
  if (J.lo > I.hi) return J.lo - I.hi;
  if (I.lo > J.hi) return I.lo - J.hi;
  return 0.0;
}

} // namespace dk
