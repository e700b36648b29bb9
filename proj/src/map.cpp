#include "dk/map.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dk {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Domain: return "domain-error";
    case ErrorCode::SideRequired: return "side-required";
    case ErrorCode::NotPowerLaw: return "not-power-law";
    case ErrorCode::FlatCritical: return "flat-critical";
    case ErrorCode::ExponentMismatch: return "exponent-mismatch";
    case ErrorCode::NoLimit: return "no-limit";
    case ErrorCode::NotVeryGood: return "not-very-good";
    case ErrorCode::Geometry: return "geometry-error";
    case ErrorCode::SemiGoodViolation: return "semi-good-violation";
    case ErrorCode::Singularity: return "singularity-error";
    case ErrorCode::Lemma1Failure: return "lemma1-failure";
    case ErrorCode::Escape: return "escape-error";
    case ErrorCode::NoPreimage: return "no-preimage";
    case ErrorCode::Branch: return "branch-error";
    case ErrorCode::NotSuitable: return "not-suitable";
    case ErrorCode::Precondition: return "precondition-error";
    case ErrorCode::InvalidConstant: return "invalid-constant";
    case ErrorCode::DegeneratePair: return "degenerate-pair";
    case ErrorCode::Consistency: return "consistency-error";
    case ErrorCode::Factorization: return "factorization-error";
    case ErrorCode::Config: return "config-error";
    case ErrorCode::Construction: return "construction-error";
  }
  return "error";
}

const char* map_kind_name(MapKind kind) {
  switch (kind) {
    case MapKind::Quadratic: return "quadratic";
    case MapKind::Tent: return "tent";
    case MapKind::NormalForm: return "normal-form";
    case MapKind::Polynomial: return "polynomial";
    case MapKind::Piecewise: return "piecewise";
    case MapKind::Custom: return "custom";
  }
  return "map";
}

double DeclaredCritical::gamma() const {
  if (std::abs(gamma_minus - gamma_plus) > 1e-12)
    throw Error(ErrorCode::ExponentMismatch,
                "left and right exponents differ at the critical point");
  return gamma_minus;
}

namespace {

double horner(const std::vector<double>& coeffs, double x) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double horner_deriv(const std::vector<double>& coeffs, double x) {
  double acc = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 1;)
    acc = acc * x + static_cast<double>(k) * coeffs[k];
  return acc;
}

} // namespace

double MapModel::eval(double x) const {
  const double tol = 1e-12 * std::max(1.0, std::abs(domain_.length()));
  if (!domain_.contains(x, tol))
    throw Error(ErrorCode::Domain, "point outside the map domain");
  double y = value_(domain_.clamp(x));
  if (circle_wrap_) {
    const double len = domain_.length();
    y = domain_.lo + std::fmod(std::fmod(y - domain_.lo, len) + len, len);
  }
  return y;
}

double MapModel::deriv(double x, Side side) const {
  const double tol = 1e-12 * std::max(1.0, std::abs(domain_.length()));
  if (!domain_.contains(x, tol))
    throw Error(ErrorCode::Domain, "point outside the map domain");
  x = domain_.clamp(x);
  if (side == Side::TwoSided) {
    if (const DeclaredCritical* cp = critical_at(x)) {
      const double l = deriv_(cp->c, Side::Left);
      const double r = deriv_(cp->c, Side::Right);
      if (std::abs(l - r) <= 1e-9 * std::max(1.0, std::max(std::abs(l), std::abs(r))))
        return 0.5 * (l + r);
      throw Error(ErrorCode::SideRequired,
                  "two-sided derivative requested at a non-differentiable point");
    }
    // endpoints only admit the interior side
    if (x <= domain_.lo) side = Side::Right;
    else if (x >= domain_.hi) side = Side::Left;
  }
  return deriv_(x, side);
}

bool MapModel::is_critical(double x, double tol) const {
  return critical_at(x, tol) != nullptr;
}

const DeclaredCritical* MapModel::critical_at(double x, double tol) const {
  for (const auto& cp : criticals_)
    if (std::abs(cp.c - x) <= tol) return &cp;
  return nullptr;
}

std::vector<Interval> MapModel::monotone_pieces() const {
  std::vector<double> cuts{domain_.lo};
  for (const auto& cp : criticals_)
    if (cp.c > domain_.lo && cp.c < domain_.hi) cuts.push_back(cp.c);
  cuts.push_back(domain_.hi);
  std::sort(cuts.begin(), cuts.end());
  std::vector<Interval> pieces;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    if (cuts[i + 1] > cuts[i]) pieces.push_back({cuts[i], cuts[i + 1]});
  return pieces;
}

void MapModel::validate() const {
  const int n = 2048;
  const double tol = 1e-9 * std::max(1.0, std::abs(domain_.length()));
  for (int i = 0; i <= n; ++i) {
    const double x = domain_.lo + domain_.length() * i / n;
    const double y = value_(x);
    if (!std::isfinite(y))
      throw Error(ErrorCode::Construction, "map value not finite at sampled point");
    if (!circle_wrap_ && !domain_.contains(y, tol)) {
      std::ostringstream os;
      os << name_ << " does not send its domain into itself: f(" << x << ") = " << y;
      throw Error(ErrorCode::Construction, os.str());
    }
  }
  // each declared critical point is isolated: derivative nonzero on a
  // punctured neighborhood, sampled at geometric offsets
  const double scale = std::max(1.0, std::abs(domain_.length()));
  for (const auto& cp : criticals_) {
    if (!domain_.contains(cp.c, 0.0))
      throw Error(ErrorCode::Construction, "declared critical point outside the domain");
    if (cp.gamma_minus < 1.0 || cp.gamma_plus < 1.0)
      throw Error(ErrorCode::Construction, "power-law exponent must be >= 1");
    for (int k = 3; k <= 6; ++k) {
      const double h = scale * std::pow(10.0, -k);
      for (double x : {cp.c - h, cp.c + h}) {
        if (!domain_.contains(x)) continue;
        if (critical_at(x) || is_critical(x, 2.0 * h)) continue;
        if (std::abs(deriv_(x, x < cp.c ? Side::Left : Side::Right)) == 0.0)
          throw Error(ErrorCode::Construction,
                      "declared critical point is not isolated (zero derivative nearby)");
      }
    }
  }
  // C^1 away from criticals: derivative finite on a sample grid
  for (int i = 1; i < n; ++i) {
    const double x = domain_.lo + domain_.length() * i / n;
    if (is_critical(x, domain_.length() / (2.0 * n))) continue;
    if (!std::isfinite(deriv_(x, Side::Right)))
      throw Error(ErrorCode::Construction, "derivative not finite at sampled point");
  }
}

MapModel MapModel::quadratic(double a, Interval domain) {
  if (a <= 0.0 || a > 4.0)
    throw Error(ErrorCode::Construction, "quadratic family needs 0 < a <= 4");
  MapModel m;
  m.kind_ = MapKind::Quadratic;
  m.name_ = "quadratic";
  m.domain_ = domain;
  m.params_ = {{"a", a}};
  m.criticals_ = {{0.5, 2.0, 2.0}};
  m.value_ = [a](double x) { return a * x * (1.0 - x); };
  m.deriv_ = [a](double x, Side) { return a - 2.0 * a * x; };
  m.validate();
  return m;
}

MapModel MapModel::tent(double slope, Interval domain) {
  if (slope <= 0.0 || slope > 2.0)
    throw Error(ErrorCode::Construction, "tent family needs 0 < slope <= 2");
  MapModel m;
  m.kind_ = MapKind::Tent;
  m.name_ = "tent";
  m.domain_ = domain;
  m.params_ = {{"slope", slope}};
  m.criticals_ = {{0.5, 1.0, 1.0}};
  m.value_ = [slope](double x) { return slope * std::min(x, 1.0 - x); };
  m.deriv_ = [slope](double x, Side side) {
    if (x < 0.5) return slope;
    if (x > 0.5) return -slope;
    return side == Side::Left ? slope : -slope;
  };
  m.validate();
  return m;
}

MapModel MapModel::normal_form(double c, double gamma_minus, double gamma_plus,
                               double sigma, double v, int form, Interval domain) {
  if (form != 1 && form != 2)
    throw Error(ErrorCode::Construction, "normal form selector must be 1 or 2");
  if (sigma == 0.0)
    throw Error(ErrorCode::Construction, "asymmetry sigma must be nonzero");
  const double a_plus = (form == 1) ? 1.0 : -1.0;
  const double a_minus = -sigma * a_plus;
  MapModel m;
  m.kind_ = MapKind::NormalForm;
  m.name_ = "normal-form";
  m.domain_ = domain;
  m.params_ = {{"c", c},         {"gamma_minus", gamma_minus},
               {"gamma_plus", gamma_plus}, {"sigma", sigma},
               {"v", v},         {"form", static_cast<double>(form)}};
  m.criticals_ = {{c, gamma_minus, gamma_plus}};
  m.value_ = [=](double x) {
    const double u = x - c;
    return u <= 0.0 ? v + a_minus * std::pow(-u, gamma_minus)
                    : v + a_plus * std::pow(u, gamma_plus);
  };
  m.deriv_ = [=](double x, Side side) {
    const double u = x - c;
    if (u < 0.0) return -a_minus * gamma_minus * std::pow(-u, gamma_minus - 1.0);
    if (u > 0.0) return a_plus * gamma_plus * std::pow(u, gamma_plus - 1.0);
    if (side == Side::Left)
      return gamma_minus > 1.0 ? 0.0 : -a_minus;
    return gamma_plus > 1.0 ? 0.0 : a_plus;
  };
  m.validate();
  return m;
}

MapModel MapModel::polynomial(std::vector<double> coeffs, Interval domain,
                              std::vector<DeclaredCritical> criticals) {
  MapModel m;
  m.kind_ = MapKind::Polynomial;
  m.name_ = "polynomial";
  m.domain_ = domain;
  m.criticals_ = std::move(criticals);
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    m.params_["c" + std::to_string(i)] = coeffs[i];
  m.value_ = [coeffs](double x) { return horner(coeffs, x); };
  m.deriv_ = [coeffs](double x, Side) { return horner_deriv(coeffs, x); };
  m.validate();
  return m;
}

MapModel MapModel::piecewise_polynomial(std::vector<double> breaks,
                                        std::vector<std::vector<double>> pieces,
                                        Interval domain,
                                        std::vector<DeclaredCritical> criticals) {
  if (pieces.size() != breaks.size() + 1)
    throw Error(ErrorCode::Construction, "piecewise map needs one more piece than breaks");
  for (double b : breaks)
    if (!domain.contains(b))
      throw Error(ErrorCode::Construction, "breakpoint outside the domain");
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    const double l = horner(pieces[i], breaks[i]);
    const double r = horner(pieces[i + 1], breaks[i]);
    if (std::abs(l - r) > 1e-9 * std::max(1.0, std::abs(l)))
      throw Error(ErrorCode::Construction, "piecewise pieces disagree at a breakpoint");
  }
  auto piece_index = [breaks](double x) {
    std::size_t i = 0;
    while (i < breaks.size() && x > breaks[i]) ++i;
    return i;
  };
  MapModel m;
  m.kind_ = MapKind::Piecewise;
  m.name_ = "piecewise";
  m.domain_ = domain;
  m.criticals_ = std::move(criticals);
  m.value_ = [pieces, piece_index](double x) { return horner(pieces[piece_index(x)], x); };
  m.deriv_ = [pieces, breaks, piece_index](double x, Side side) {
    std::size_t i = piece_index(x);
    // at a breakpoint, pick the piece matching the requested side
    for (std::size_t b = 0; b < breaks.size(); ++b)
      if (x == breaks[b]) i = (side == Side::Left) ? b : b + 1;
    return horner_deriv(pieces[i], x);
  };
  m.validate();
  return m;
}

MapModel MapModel::custom(ValueFn value, DerivFn deriv, Interval domain,
                          std::vector<DeclaredCritical> criticals, std::string name,
                          double fd_step, bool circle_wrap) {
  MapModel m;
  m.kind_ = MapKind::Custom;
  m.name_ = std::move(name);
  m.domain_ = domain;
  m.circle_wrap_ = circle_wrap;
  m.criticals_ = std::move(criticals);
  m.fd_step_ = fd_step;
  m.value_ = std::move(value);
  if (deriv) {
    m.deriv_ = std::move(deriv);
  } else {
    const double h = fd_step;
    ValueFn f = m.value_;
    Interval dom = domain;
    m.deriv_ = [f, h, dom](double x, Side side) {
      // one-sided differences near the boundary and at kinks
      const double hl = std::min(h, x - dom.lo);
      const double hr = std::min(h, dom.hi - x);
      switch (side) {
        case Side::Left: return (f(x) - f(x - hl)) / hl;
        case Side::Right: return (f(x + hr) - f(x)) / hr;
        case Side::TwoSided: break;
      }
      return (f(x + hr) - f(x - hl)) / (hl + hr);
    };
  }
  m.validate();
  return m;
}

} // namespace dk
