#include "dk/critical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace dk {

namespace {
constexpr double kCloudEps = 1e-9; // dedup grid for the post-critical cloud
constexpr int kMaxShrink = 40;
} // namespace

std::string BranchTag::str() const {
  if (kind == Kind::V) return "V";
  std::ostringstream os;
  os << "W" << (critical_index + 1) << (sign < 0 ? "-" : "+");
  return os.str();
}

std::optional<BranchTag> CriticalStructure::region_of(double x) const {
  for (std::size_t i = 0; i < U.size(); ++i) {
    if (U[i].contains(x)) {
      BranchTag t;
      t.kind = BranchTag::Kind::W;
      t.critical_index = static_cast<int>(i);
      t.sign = x <= cp[i] ? -1 : +1;
      return t;
    }
  }
  for (const auto& comp : V_components)
    if (comp.contains(x)) return BranchTag{};
  return std::nullopt;
}

std::optional<BranchTag> CriticalStructure::region_of(const Interval& I) const {
  for (std::size_t i = 0; i < U.size(); ++i) {
    if (U[i].contains(I)) {
      if (I.hi <= cp[i]) {
        BranchTag t{BranchTag::Kind::W, static_cast<int>(i), -1};
        return t;
      }
      if (I.lo >= cp[i]) {
        BranchTag t{BranchTag::Kind::W, static_cast<int>(i), +1};
        return t;
      }
      return std::nullopt; // straddles the critical point
    }
  }
  for (const auto& comp : V_components)
    if (comp.contains(I)) return BranchTag{};
  return std::nullopt;
}

double CriticalStructure::distance_to_postcritical(double x) const {
  double best = std::numeric_limits<double>::infinity();
  for (double p : postcritical) best = std::min(best, std::abs(x - p));
  return best;
}

CriticalStructure build_critical_structure(const MapModel& m,
                                           std::vector<double> radii,
                                           int postcritical_depth,
                                           int postcritical_start) {
  const auto& declared = m.criticals();
  if (radii.size() != declared.size())
    throw Error(ErrorCode::Construction, "one radius per declared critical point required");
  for (double r : radii)
    if (!(r > 0.0)) throw Error(ErrorCode::Construction, "radii must be positive");
  if (postcritical_depth < 0 || postcritical_start < 1)
    throw Error(ErrorCode::Construction, "postcritical depth/start out of range");

  CriticalStructure cs{m};
  cs.postcritical_depth = postcritical_depth;
  cs.postcritical_start = postcritical_start;

  // sort critical points, keeping radii aligned
  std::vector<std::size_t> order(declared.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return declared[a].c < declared[b].c; });
  for (std::size_t k : order) {
    cs.cp.push_back(declared[k].c);
    cs.gamma.push_back(declared[k].gamma());
    cs.values.push_back(m.eval(declared[k].c));
    cs.radii.push_back(radii[k]);
    cs.shrunk.push_back(false);
  }

  // condition (III): equal critical values force equal exponents
  for (std::size_t i = 0; i < cs.cp.size(); ++i)
    for (std::size_t j = i + 1; j < cs.cp.size(); ++j)
      if (std::abs(cs.values[i] - cs.values[j]) <= kCloudEps &&
          std::abs(cs.gamma[i] - cs.gamma[j]) > 1e-12)
        throw Error(ErrorCode::Construction,
                    "exponents differ at critical points with equal image");

  // condition (II): critical values are not critical points
  for (double v : cs.values)
    for (double c : cs.cp)
      if (std::abs(v - c) <= kCloudEps)
        throw Error(ErrorCode::SemiGoodViolation,
                    "a critical value coincides with a critical point");

  // post-critical cloud: iterates N .. N+depth-1 of every critical point,
  // with the recurrence check of condition (V) along the way
  for (std::size_t i = 0; i < cs.cp.size(); ++i) {
    double p = cs.cp[i];
    for (int n = 1; n < postcritical_start + postcritical_depth; ++n) {
      p = m.eval(p);
      for (double c : cs.cp)
        if (std::abs(p - c) <= kCloudEps)
          throw Error(ErrorCode::NotVeryGood,
                      "post-critical orbit hits a critical point (recurrent critical orbit)",
                      n);
      if (n >= postcritical_start) cs.postcritical.push_back(p);
    }
  }
  std::sort(cs.postcritical.begin(), cs.postcritical.end());
  cs.postcritical.erase(
      std::unique(cs.postcritical.begin(), cs.postcritical.end(),
                  [](double a, double b) { return std::abs(a - b) <= kCloudEps; }),
      cs.postcritical.end());

  // shrink radii until every U_i clears the cloud by at least r_i and the
  // U_i are pairwise disjoint, each holding exactly one critical point
  auto make_U = [&](std::size_t i) {
    Interval u{cs.cp[i] - cs.radii[i], cs.cp[i] + cs.radii[i]};
    u.lo = std::max(u.lo, m.domain().lo);
    u.hi = std::min(u.hi, m.domain().hi);
    return u;
  };
  for (int pass = 0; pass < kMaxShrink; ++pass) {
    bool changed = false;
    for (std::size_t i = 0; i < cs.cp.size(); ++i) {
      Interval u = make_U(i);
      bool bad = false;
      for (double p : cs.postcritical)
        if (distance(u, p) < cs.radii[i]) bad = true;
      for (std::size_t j = 0; j < cs.cp.size() && !bad; ++j)
        if (j != i && (u.contains(cs.cp[j]) || make_U(j).intersects(u))) bad = true;
      if (bad) {
        cs.radii[i] *= 0.5;
        cs.shrunk[i] = true;
        changed = true;
      }
    }
    if (!changed) break;
    if (pass == kMaxShrink - 1)
      throw Error(ErrorCode::NotVeryGood,
                  "cannot separate a critical neighborhood from the post-critical cloud");
  }
  for (std::size_t i = 0; i < cs.cp.size(); ++i) cs.U.push_back(make_U(i));

  // V = closure of the complement of the union of the U_i
  double lo = m.domain().lo;
  for (std::size_t i = 0; i < cs.U.size(); ++i) {
    if (cs.U[i].lo > lo) cs.V_components.push_back({lo, cs.U[i].lo});
    lo = cs.U[i].hi;
  }
  if (lo < m.domain().hi) cs.V_components.push_back({lo, m.domain().hi});
  if (cs.cp.empty()) cs.V_components = {m.domain()};
  return cs;
}

} // namespace dk
