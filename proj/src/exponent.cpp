#include "dk/exponent.hpp"

#include <algorithm>
#include <cmath>

#include "dk/rng.hpp"

namespace dk {

namespace {

std::vector<double> offsets(const ExponentOptions& opt) {
  std::vector<double> hs;
  for (int k = 0; k <= opt.window; ++k) hs.push_back(std::ldexp(opt.h0, -k));
  return hs;
}

} // namespace

ExponentFit estimate_exponent(const MapModel& m, double c, Side side,
                              const ExponentOptions& opt) {
  if (!m.is_critical(c))
    throw Error(ErrorCode::Precondition, "exponent estimation at an undeclared point");
  const double s = side == Side::Left ? -1.0 : 1.0;

  ExponentFit fit;
  std::vector<double> lx, ly;
  double dsign = 0.0;
  for (double h : offsets(opt)) {
    const double x = c + s * h;
    if (!m.domain().contains(x)) continue;
    const double d = m.deriv(x, side);
    if (d != 0.0) dsign = d > 0.0 ? 1.0 : -1.0;
    if (std::abs(d) < 1e-300)
      throw Error(ErrorCode::FlatCritical, "derivative vanishes on the fit window");
    fit.window.push_back(h);
    lx.push_back(std::log(h));
    ly.push_back(std::log(std::abs(d)));
  }
  if (lx.size() < 3)
    throw Error(ErrorCode::Precondition, "fit window does not fit in the domain");

  const auto n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) { mx += lx[i]; my += ly[i]; }
  mx /= n; my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  for (std::size_t i = 0; i < lx.size(); ++i)
    fit.residual = std::max(fit.residual, std::abs(ly[i] - (intercept + slope * lx[i])));
  if (fit.residual > opt.fit_tol)
    throw Error(ErrorCode::NotPowerLaw, "log-log fit residual above tolerance");

  fit.gamma = slope + 1.0;
  fit.coefficient = dsign * std::exp(intercept);
  return fit;
}

AsymmetryEstimate estimate_asymmetry(const MapModel& m, double c,
                                     const ExponentOptions& opt) {
  const ExponentFit left = estimate_exponent(m, c, Side::Left, opt);
  const ExponentFit right = estimate_exponent(m, c, Side::Right, opt);
  if (std::abs(left.gamma - right.gamma) > 1e-3)
    throw Error(ErrorCode::ExponentMismatch,
                "asymmetry is defined only when the one-sided exponents agree");

  std::vector<double> ratios;
  for (double h : offsets(opt)) {
    if (!m.domain().contains(c - h) || !m.domain().contains(c + h)) continue;
    const double num = m.deriv(c - h, Side::Left);
    const double den = m.deriv(c + h, Side::Right);
    if (den == 0.0) continue;
    ratios.push_back(num / den);
  }
  if (ratios.size() < 4)
    throw Error(ErrorCode::Precondition, "asymmetry window does not fit in the domain");

  // Cauchy spread over the tail half of the ratio sequence
  AsymmetryEstimate est;
  const std::size_t tail = ratios.size() / 2;
  est.sigma = ratios.back();
  for (std::size_t i = tail; i < ratios.size(); ++i)
    for (std::size_t j = i + 1; j < ratios.size(); ++j)
      est.spread = std::max(est.spread, std::abs(ratios[i] - ratios[j]));
  if (est.spread > 1e-3 * std::max(1.0, std::abs(est.sigma)))
    throw Error(ErrorCode::NoLimit, "asymmetry ratio sequence is not Cauchy");
  return est;
}

HolderEstimate estimate_holder(const std::function<double(double)>& g,
                               Interval I, double alpha, long samples,
                               std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw Error(ErrorCode::Precondition, "Hoelder order must lie in (0,1]");
  if (!(I.length() > 0.0))
    throw Error(ErrorCode::Precondition, "degenerate interval");

  HolderEstimate est;
  est.alpha = alpha;
  auto ratio = [&](double x, double y) {
    const double dx = std::abs(x - y);
    if (dx == 0.0) return 0.0;
    return std::abs(g(x) - g(y)) / std::pow(dx, alpha);
  };

  const int grid = 1024;
  double prev = I.lo;
  for (int i = 1; i <= grid; ++i) {
    const double x = I.lo + I.length() * i / grid;
    est.constant = std::max(est.constant, ratio(prev, x));
    ++est.sample_count;
    prev = x;
  }
  GoldenSequence seq(seed);
  for (long i = 0; i < samples; ++i) {
    const double x = I.lo + I.length() * seq.next();
    const double y = I.lo + I.length() * seq.next();
    est.constant = std::max(est.constant, ratio(x, y));
    ++est.sample_count;
  }
  return est;
}

std::pair<HolderEstimate, HolderEstimate> check_r_holder(
    const MapModel& m, double c, double gamma, double alpha,
    double window_radius, long samples, std::uint64_t seed) {
  if (!m.is_critical(c))
    throw Error(ErrorCode::Precondition, "r-regularity check at an undeclared point");
  const double punct = window_radius * 1e-6;

  auto run = [&](Side side) {
    const double s = side == Side::Left ? -1.0 : 1.0;
    auto r = [&, s, side](double t) {
      // t parameterizes the distance to c on the chosen side
      const double x = c + s * t;
      return m.deriv(x, side) / std::pow(t, gamma - 1.0);
    };
    // unboundedness probe: wrong gamma makes r blow up toward c
    double r_out = std::abs(r(window_radius));
    double r_in = std::abs(r(punct));
    if (!std::isfinite(r_in) || r_in > 1e6 * std::max(1.0, r_out))
      throw Error(ErrorCode::NotPowerLaw, "r is unbounded on the window (wrong exponent?)");
    return estimate_holder(r, Interval{punct, window_radius}, alpha, samples, seed);
  };
  return {run(Side::Left), run(Side::Right)};
}

} // namespace dk
