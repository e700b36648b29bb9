#include "dk/coordinate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dk {

namespace {

constexpr double kValueEps = 1e-9; // dedup tolerance for shared critical values

double smoothstep(double t) { return t * t * t * (10.0 + t * (-15.0 + 6.0 * t)); }

// density of the chart parameter at distance t >= 0 from the center
double chart_density(const Chart& ch, double t) {
  if (t >= ch.radius) return 1.0;
  const double pure = std::pow(t, -ch.tau);
  if (t <= ch.inner) return pure;
  const double s = smoothstep((t - ch.inner) / (ch.radius - ch.inner));
  return (1.0 - s) * pure + s;
}

// integral of the density from 0 to t (composite Simpson over the collar)
double chart_param(const Chart& ch, double t) {
  t = std::min(t, ch.radius);
  const double inner_part = ch.gamma * std::pow(std::min(t, ch.inner), 1.0 / ch.gamma);
  if (t <= ch.inner) return inner_part;
  const int n = 256;
  const double a = ch.inner, b = t, dx = (b - a) / n;
  double acc = chart_density(ch, a) + chart_density(ch, b);
  for (int i = 1; i < n; ++i)
    acc += chart_density(ch, a + i * dx) * (i % 2 ? 4.0 : 2.0);
  return inner_part + acc * dx / 3.0;
}

} // namespace

int CoordinateChange::chart_at(double x) const {
  for (std::size_t i = 0; i < charts_.size(); ++i)
    if (std::abs(x - charts_[i].center) <= charts_[i].radius)
      return static_cast<int>(i);
  return -1;
}

double CoordinateChange::h(double x) const {
  const int i = chart_at(x);
  if (i < 0) return x;
  const Chart& ch = charts_[i];
  const double u = x - ch.center;
  const double w = chart_param(ch, std::abs(u));
  return ch.center + (u < 0.0 ? -w : w);
}

double CoordinateChange::h_deriv(double x) const {
  const int i = chart_at(x);
  if (i < 0) return 1.0;
  const Chart& ch = charts_[i];
  const double t = std::abs(x - ch.center);
  if (t == 0.0 && ch.tau > 0.0)
    throw Error(ErrorCode::Singularity, "h' requested at a chart center");
  return chart_density(ch, t);
}

double CoordinateChange::h_inverse(double y) const {
  // charts win where chart images overlap the identity region
  for (const Chart& ch : charts_) {
    const double w = y - ch.center;
    const double aw = std::abs(w);
    if (aw > ch.image_halfwidth) continue;
    const double inner_image = ch.gamma * std::pow(ch.inner, 1.0 / ch.gamma);
    double t;
    if (aw <= inner_image) {
      t = std::pow(aw / ch.gamma, ch.gamma);
    } else {
      double lo = ch.inner, hi = ch.radius;
      for (int it = 0; it < 200 && hi - lo > 1e-16 * ch.radius; ++it) {
        const double mid = 0.5 * (lo + hi);
        (chart_param(ch, mid) < aw ? lo : hi) = mid;
      }
      t = 0.5 * (lo + hi);
    }
    return ch.center + (w < 0.0 ? -t : t);
  }
  return y;
}

double CoordinateChange::h_inverse_deriv(double y) const {
  return 1.0 / h_deriv(h_inverse(y));
}

double CoordinateChange::apply(double x, ChangeDirection dir, ChangeOrder order) const {
  if (dir == ChangeDirection::Forward)
    return order == ChangeOrder::Value ? h(x) : h_deriv(x);
  return order == ChangeOrder::Value ? h_inverse(x) : h_inverse_deriv(x);
}

CoordinateChange build_coordinate_change(const CriticalStructure& cs,
                                         std::vector<double> chart_radii,
                                         double collar) {
  if (!(collar > 0.0 && collar < 1.0))
    throw Error(ErrorCode::Geometry, "collar fraction must lie in (0,1)");

  // distinct critical values with their (shared) exponent, sorted
  struct Value { double v; double gamma; std::vector<std::size_t> owners; };
  std::vector<Value> values;
  for (std::size_t i = 0; i < cs.values.size(); ++i) {
    bool merged = false;
    for (auto& val : values)
      if (std::abs(val.v - cs.values[i]) <= kValueEps) {
        val.owners.push_back(i);
        merged = true;
      }
    if (!merged) values.push_back({cs.values[i], cs.gamma[i], {i}});
  }
  std::sort(values.begin(), values.end(),
            [](const Value& a, const Value& b) { return a.v < b.v; });
  if (!chart_radii.empty() && chart_radii.size() != values.size())
    throw Error(ErrorCode::Geometry,
                "chart radii count must match the number of distinct critical values");

  std::vector<Chart> charts;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const Value& val = values[k];
    if (val.gamma <= 1.0 + 1e-12) continue; // tau = 0: the chart is the identity
    double radius;
    if (!chart_radii.empty()) {
      radius = chart_radii[k];
    } else {
      // half the distance to the nearest other marked point
      double nearest = std::numeric_limits<double>::infinity();
      auto mark = [&](double p) {
        const double d = std::abs(p - val.v);
        if (d > kValueEps) nearest = std::min(nearest, d);
      };
      for (double c : cs.cp) mark(c);
      for (const auto& other : values) mark(other.v);
      mark(cs.map.domain().lo);
      mark(cs.map.domain().hi);
      if (!std::isfinite(nearest))
        throw Error(ErrorCode::Geometry, "no reference point for the default chart radius");
      radius = 0.5 * nearest;
    }
    if (!(radius > 0.0))
      throw Error(ErrorCode::Geometry, "chart radius must be positive");
    Chart ch;
    ch.center = val.v;
    ch.gamma = val.gamma;
    ch.tau = 1.0 - 1.0 / val.gamma;
    ch.radius = radius;
    ch.inner = radius * (1.0 - collar);
    ch.image_halfwidth = chart_param(ch, radius);
    charts.push_back(ch);
  }

  for (std::size_t i = 0; i < charts.size(); ++i)
    for (std::size_t j = i + 1; j < charts.size(); ++j)
      if (std::abs(charts[i].center - charts[j].center) <=
          charts[i].radius + charts[j].radius)
        throw Error(ErrorCode::Geometry, "charts at distinct critical values overlap");

  for (const Chart& ch : charts) {
    const Interval chart_iv{ch.center - ch.radius, ch.center + ch.radius};
    for (std::size_t i = 0; i < cs.U.size(); ++i) {
      if (cs.U[i].contains(ch.center))
        throw Error(ErrorCode::SemiGoodViolation,
                    "critical value lies inside the critical set");
      if (cs.U[i].intersects(chart_iv))
        throw Error(ErrorCode::Geometry, "chart intersects a critical neighborhood");
    }
  }

  // f(U_i) must land in the pure power-law region of the chart at v_i
  CoordinateChange cc(charts, collar);
  for (std::size_t i = 0; i < cs.U.size(); ++i) {
    if (cs.gamma[i] <= 1.0 + 1e-12) continue;
    const int k = cc.chart_at(cs.values[i]);
    if (k < 0)
      throw Error(ErrorCode::Geometry, "critical value not covered by a chart");
    const Chart& ch = cc.charts()[k];
    for (double x : {cs.U[i].lo, cs.U[i].hi, cs.cp[i]}) {
      const double fx = cs.map.eval(x);
      if (std::abs(fx - ch.center) > ch.inner) {
        std::ostringstream os;
        os << "f(U_" << i + 1 << ") leaves the pure region of its chart; "
           << "shrink the neighborhood radius or widen the chart";
        throw Error(ErrorCode::Geometry, os.str());
      }
    }
  }
  return cc;
}

RepresentationDeriv representation_deriv(const MapModel& m,
                                         const CoordinateChange& cc, double x) {
  RepresentationDeriv r;
  r.f_deriv = m.deriv(x, Side::TwoSided);
  r.h_deriv_x = cc.h_deriv(x);
  r.h_deriv_fx = cc.h_deriv(m.eval(x));
  r.f_tilde_deriv = r.f_deriv * r.h_deriv_fx / r.h_deriv_x;
  return r;
}

double representation_deriv_fd(const MapModel& m, const CoordinateChange& cc,
                               double x, double step) {
  double d = step;
  for (int it = 0; it < 40; ++it) {
    const double xl = x - d, xr = x + d;
    if (!m.domain().contains(xl) || !m.domain().contains(xr)) { d *= 0.5; continue; }
    // both legs must stay within one h-region around x and around f(x)
    if (cc.chart_at(xl) != cc.chart_at(x) || cc.chart_at(xr) != cc.chart_at(x) ||
        cc.chart_at(m.eval(xl)) != cc.chart_at(m.eval(x)) ||
        cc.chart_at(m.eval(xr)) != cc.chart_at(m.eval(x))) {
      d *= 0.5;
      continue;
    }
    return (cc.h(m.eval(xr)) - cc.h(m.eval(xl))) / (cc.h(xr) - cc.h(xl));
  }
  throw Error(ErrorCode::Precondition,
              "cannot place a difference stencil inside one chart region");
}

Lemma1Report lemma1_check(const MapModel& m, const CoordinateChange& cc,
                          double c, double h0, int window) {
  if (!m.is_critical(c))
    throw Error(ErrorCode::Precondition, "lemma1 check at an undeclared point");
  const double hv = cc.h(m.eval(c));

  auto side_limit = [&](double s, double& limit, double& spread) {
    std::vector<double> q;
    for (int k = 0; k <= window; ++k) {
      const double hk = std::ldexp(h0, -k);
      const double x = c + s * hk;
      if (!m.domain().contains(x)) continue;
      const double fx = m.eval(x);
      // skip offsets where f(x) - f(c) is drowned by rounding
      if (std::abs(fx - m.eval(c)) < 1e-11 * std::max(1.0, std::abs(fx))) break;
      q.push_back((cc.h(fx) - hv) / (s * hk));
    }
    if (q.size() < 4)
      throw Error(ErrorCode::Precondition, "lemma1 window does not fit in the domain");
    limit = q.back();
    spread = 0.0;
    for (std::size_t i = q.size() / 2; i < q.size(); ++i)
      for (std::size_t j = i + 1; j < q.size(); ++j)
        spread = std::max(spread, std::abs(q[i] - q[j]));
  };

  Lemma1Report rep;
  side_limit(-1.0, rep.left_limit, rep.left_spread);
  side_limit(+1.0, rep.right_limit, rep.right_spread);
  const double scale = std::max({1.0, std::abs(rep.left_limit), std::abs(rep.right_limit)});
  if (std::abs(rep.left_limit) < 1e-8 || std::abs(rep.right_limit) < 1e-8 ||
      rep.left_spread > 1e-2 * scale || rep.right_spread > 1e-2 * scale)
    throw Error(ErrorCode::Lemma1Failure,
                "one-sided limits of h o f are zero or not convergent");
  return rep;
}

} // namespace dk
