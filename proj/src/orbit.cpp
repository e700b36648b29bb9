#include "dk/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dk {

std::vector<double> forward_orbit(const MapModel& m, double x, int n) {
  if (n < 0) throw Error(ErrorCode::Precondition, "orbit length must be >= 0");
  std::vector<double> orbit{x};
  for (int k = 1; k <= n; ++k) {
    try {
      orbit.push_back(m.eval(orbit.back()));
    } catch (const Error&) {
      throw Error(ErrorCode::Escape, "orbit leaves the domain", k);
    }
  }
  return orbit;
}

double distance_to_postcritical(const CriticalStructure& cs, double x, double y) {
  return std::min(cs.distance_to_postcritical(x), cs.distance_to_postcritical(y));
}

namespace {

// +1 increasing, -1 decreasing; throws Branch if the sampled derivative
// sign is inconsistent in the interior.
int monotone_direction(const MapModel& m, const Interval& piece) {
  const int probes = 64;
  int dir = 0;
  for (int i = 1; i < probes; ++i) {
    const double x = piece.lo + piece.length() * i / probes;
    double d;
    try {
      d = m.deriv(x, Side::TwoSided);
    } catch (const Error&) {
      d = m.deriv(x, Side::Right);
    }
    if (d == 0.0) continue;
    const int s = d > 0.0 ? 1 : -1;
    if (dir == 0) dir = s;
    else if (dir != s)
      throw Error(ErrorCode::Branch, "derivative changes sign on the branch piece");
  }
  if (dir == 0) throw Error(ErrorCode::Branch, "derivative vanishes on the branch piece");
  return dir;
}

} // namespace

double inverse_branch(const MapModel& m, Interval piece, double y) {
  const int dir = monotone_direction(m, piece);
  const double flo = m.eval(piece.lo), fhi = m.eval(piece.hi);
  const Interval image = Interval::hull(flo, fhi);
  const double scale = std::max(1.0, std::abs(image.length()));
  if (!image.contains(y, 1e-12 * scale))
    throw Error(ErrorCode::NoPreimage, "target outside the image of the branch piece");
  y = image.clamp(y);

  double lo = piece.lo, hi = piece.hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = m.eval(mid);
    if (std::abs(fm - y) <= 1e-13 * scale) { lo = hi = mid; break; }
    if ((fm < y) == (dir > 0)) lo = mid; else hi = mid;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, std::abs(hi)))
      break;
  }
  double x = 0.5 * (lo + hi);
  // one Newton polish
  double d = 0.0;
  try {
    d = m.deriv(x, Side::TwoSided);
  } catch (const Error&) {}
  if (d != 0.0) {
    const double polished = x - (m.eval(x) - y) / d;
    if (piece.contains(polished)) x = polished;
  }
  return x;
}

std::string SuitableSequence::tag_string() const {
  std::string s;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (i) s += '.';
    s += tags[i].str();
  }
  return s;
}

std::vector<double> SuitableSequence::pullback(const MapModel& m, double x) const {
  const double tol = 1e-9 * std::max(1.0, intervals.front().length());
  if (!intervals.front().contains(x, tol))
    throw Error(ErrorCode::Consistency, "point outside I_0");
  std::vector<double> pts{intervals.front().clamp(x)};
  for (std::size_t j = 1; j < intervals.size(); ++j) {
    const double xj = inverse_branch(m, intervals[j], pts.back());
    if (!intervals[j].contains(xj, tol))
      throw Error(ErrorCode::Consistency, "pullback leaves the certified interval",
                  static_cast<long>(j));
    pts.push_back(xj);
  }
  return pts;
}

namespace {

// Extends the chain by one pullback step through piece `p`.
void extend(const MapModel& m, const CriticalStructure& cs,
            SuitableSequence& seq, int p) {
  const auto pieces = m.monotone_pieces();
  if (p < 0 || p >= static_cast<int>(pieces.size()))
    throw Error(ErrorCode::Branch, "branch selector out of range");
  const Interval piece = pieces[p];
  const Interval& last = seq.intervals.back();
  const long j = static_cast<long>(seq.intervals.size());

  const double a = inverse_branch(m, piece, last.lo);
  const double b = inverse_branch(m, piece, last.hi);
  const Interval pre = Interval::hull(a, b);

  // endpoint images must reproduce I_j
  const double tol = 1e-10 * std::max(1.0, m.domain().length());
  if (std::abs(Interval::hull(m.eval(pre.lo), m.eval(pre.hi)).lo - last.lo) > tol ||
      std::abs(Interval::hull(m.eval(pre.lo), m.eval(pre.hi)).hi - last.hi) > tol)
    throw Error(ErrorCode::NotSuitable, "pullback endpoints do not map onto I_j", j);

  const auto tag = cs.region_of(pre);
  if (!tag) {
    std::ostringstream os;
    os << "pullback interval [" << pre.lo << ", " << pre.hi
       << "] straddles a critical point or the U/V boundary";
    throw Error(ErrorCode::NotSuitable, os.str(), j);
  }
  seq.intervals.push_back(pre);
  seq.tags.push_back(*tag);
  seq.pieces.push_back(piece);
  seq.choices.push_back(p);
}

} // namespace

SuitableSequence build_suitable_sequence(const MapModel& m,
                                         const CriticalStructure& cs,
                                         Interval I0,
                                         const std::vector<int>& choices) {
  if (!m.domain().contains(I0))
    throw Error(ErrorCode::Precondition, "I_0 outside the domain");
  SuitableSequence seq;
  const auto tag0 = cs.region_of(I0);
  if (!tag0)
    throw Error(ErrorCode::NotSuitable, "I_0 is neither inside V nor inside one W piece", 0);
  seq.intervals.push_back(I0);
  seq.tags.push_back(*tag0);
  for (int p : choices) extend(m, cs, seq, p);
  return seq;
}

std::vector<SuitableSequence> enumerate_suitable(const MapModel& m,
                                                 const CriticalStructure& cs,
                                                 Interval I0, int n_max) {
  std::vector<SuitableSequence> out;
  SuitableSequence root = build_suitable_sequence(m, cs, I0, {});
  const int piece_count = static_cast<int>(m.monotone_pieces().size());

  std::vector<SuitableSequence> level{root};
  out.push_back(root);
  for (int depth = 1; depth <= n_max && !level.empty(); ++depth) {
    std::vector<SuitableSequence> next;
    for (const SuitableSequence& node : level) {
      for (int p = 0; p < piece_count; ++p) {
        SuitableSequence child = node;
        try {
          extend(m, cs, child, p);
        } catch (const Error&) {
          continue; // pruned: not suitable through this branch
        }
        next.push_back(std::move(child));
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    level = std::move(next);
  }
  return out;
}

ExpansionFit expansion_check(const MapModel& m, const CriticalStructure& cs,
                             double x, int n) {
  const auto orbit = forward_orbit(m, x, n);
  for (int k = 0; k < n; ++k)
    for (const Interval& u : cs.U)
      if (u.contains(orbit[k]))
        throw Error(ErrorCode::Precondition, "orbit segment enters the critical set", k);

  ExpansionFit fit;
  fit.orbit_length = n;
  double prod = 1.0;
  for (int k = 0; k < n; ++k) {
    prod *= std::abs(m.deriv(orbit[k], Side::TwoSided));
    fit.products.push_back(prod);
  }
  if (fit.products.empty()) return fit;

  fit.K = 1.0;
  for (double p : fit.products) fit.K = std::min(fit.K, p);
  fit.nu = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= n; ++k)
    fit.nu = std::min(fit.nu, std::pow(fit.products[k - 1] / fit.K, 1.0 / k));
  fit.pass = fit.nu > 1.0;
  for (int k = 1; k <= n && fit.pass; ++k)
    if (fit.products[k - 1] < fit.K * std::pow(fit.nu, k) * (1.0 - 1e-12))
      fit.pass = false;
  return fit;
}

} // namespace dk
