#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dk/errors.hpp"
#include "dk/interval.hpp"

namespace dk {

enum class Side { Left, Right, TwoSided };

// A declared power-law critical point. The standing assumption of the
// machinery is gamma_minus == gamma_plus; the pair is kept so that the
// exponent estimator can detect mismatches on synthetic maps.
struct DeclaredCritical {
  double c = 0.0;
  double gamma_minus = 2.0;
  double gamma_plus = 2.0;

  double gamma() const;
};

enum class MapKind { Quadratic, Tent, NormalForm, Polynomial, Piecewise, Custom };

const char* map_kind_name(MapKind kind);

// One-dimensional map on a compact interval (circle as [a,b) with wrap).
// Immutable after construction; critical points are declared by the
// factory and validated by sampling, not discovered.
class MapModel {
public:
  using ValueFn = std::function<double(double)>;
  using DerivFn = std::function<double(double, Side)>;

  static MapModel quadratic(double a, Interval domain = {0.0, 1.0});
  static MapModel tent(double slope, Interval domain = {0.0, 1.0});
  // Normal form of a power-law critical point: with u = x - c,
  //   form 1:  f = -sigma|u|^gm + v (u<=0),  +|u|^gp + v (u>=0)
  //   form 2:  f = +sigma|u|^gm + v (u<=0),  -|u|^gp + v (u>=0)
  // sigma is the asymmetry of the critical point in either form.
  static MapModel normal_form(double c, double gamma_minus, double gamma_plus,
                              double sigma, double v, int form, Interval domain);
  static MapModel polynomial(std::vector<double> coeffs, Interval domain,
                             std::vector<DeclaredCritical> criticals = {});
  // Breakpoints split the domain; pieces[i] are polynomial coefficients on
  // [break_{i-1}, break_i]. Pieces must agree at breakpoints.
  static MapModel piecewise_polynomial(std::vector<double> breaks,
                                       std::vector<std::vector<double>> pieces,
                                       Interval domain,
                                       std::vector<DeclaredCritical> criticals = {});
  static MapModel custom(ValueFn value, DerivFn deriv, Interval domain,
                         std::vector<DeclaredCritical> criticals = {},
                         std::string name = "custom", double fd_step = 1e-6,
                         bool circle_wrap = false);

  double eval(double x) const;
  double deriv(double x, Side side = Side::TwoSided) const;

  const Interval& domain() const { return domain_; }
  bool circle_wrap() const { return circle_wrap_; }
  const std::vector<DeclaredCritical>& criticals() const { return criticals_; }
  MapKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const std::map<std::string, double>& params() const { return params_; }

  bool is_critical(double x, double tol = 1e-12) const;
  const DeclaredCritical* critical_at(double x, double tol = 1e-12) const;

  // Maximal closed intervals on which f has no interior critical point
  // (the domain split at the declared critical points).
  std::vector<Interval> monotone_pieces() const;

private:
  MapModel() = default;
  void validate() const;

  MapKind kind_ = MapKind::Custom;
  std::string name_;
  Interval domain_;
  bool circle_wrap_ = false;
  std::vector<DeclaredCritical> criticals_;
  std::map<std::string, double> params_;
  ValueFn value_;
  DerivFn deriv_;
  double fd_step_ = 1e-6;
};

} // namespace dk
