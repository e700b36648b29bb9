#pragma once

#include <vector>

#include "dk/critical.hpp"
#include "dk/interval.hpp"
#include "dk/map.hpp"

namespace dk {

// Singular chart at a critical value: the centered parameter is
// k(u) = integral_0^u dt/|t|^tau = gamma * sign(u) |u|^(1/gamma).
struct Chart {
  double center = 0.0;  // critical value v
  double gamma = 1.0;
  double tau = 0.0;     // 1 - 1/gamma
  double radius = 0.0;  // chart half-width R
  double inner = 0.0;   // R * (1 - collar): pure power-law region
  double image_halfwidth = 0.0; // |h(v +- R) - v|
};

enum class ChangeDirection { Forward, Inverse };
enum class ChangeOrder { Value, Derivative };

// The coordinate change h of the new differentiable structure. h is the
// identity off the charts and the centered singular parameter inside; the
// density h' blends C^2 from |u|^-tau to 1 across a collar at the chart
// edge, so h' is globally continuous away from the centers. h itself is
// monotone on each region (the regions overlap in image space; the
// inverse resolves charts first).
class CoordinateChange {
public:
  CoordinateChange(std::vector<Chart> charts, double collar)
      : charts_(std::move(charts)), collar_(collar) {}

  const std::vector<Chart>& charts() const { return charts_; }
  double collar() const { return collar_; }

  int chart_at(double x) const; // -1 if x is off all charts

  double h(double x) const;
  double h_deriv(double x) const; // singularity error at a center with tau > 0
  double h_inverse(double y) const;
  double h_inverse_deriv(double y) const;

  double apply(double x, ChangeDirection dir, ChangeOrder order) const;

private:
  std::vector<Chart> charts_;
  double collar_;
};

// tau per critical value from the exponents; chart radii default to half
// the distance from v_i to the nearest other marked point (critical
// points, other critical values, distinct domain endpoints). Charts must
// be pairwise disjoint and avoid U, and f(U_i) must land in the pure
// power-law region of the chart at v_i.
CoordinateChange build_coordinate_change(const CriticalStructure& cs,
                                         std::vector<double> chart_radii = {},
                                         double collar = 0.1);

// The three factors of f'(x) = h'(x) ftilde'(h(x)) / h'(f(x)).
struct RepresentationDeriv {
  double f_tilde_deriv = 0.0; // ftilde'(h(x))
  double h_deriv_x = 0.0;
  double h_deriv_fx = 0.0;
  double f_deriv = 0.0;
};

RepresentationDeriv representation_deriv(const MapModel& m,
                                         const CoordinateChange& cc, double x);

// ftilde'(h(x)) by a difference quotient of h o f o h^-1 through x-space.
double representation_deriv_fd(const MapModel& m, const CoordinateChange& cc,
                               double x, double step);

// One-sided difference quotients of h o f at a critical point.
struct Lemma1Report {
  double left_limit = 0.0;
  double right_limit = 0.0;
  double left_spread = 0.0;
  double right_spread = 0.0;
};

Lemma1Report lemma1_check(const MapModel& m, const CoordinateChange& cc,
                          double c, double h0 = 1e-2, int window = 20);

} // namespace dk
