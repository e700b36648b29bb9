#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dk/interval.hpp"
#include "dk/map.hpp"

namespace dk {

// Certified membership tag for an interval: inside the noncritical set V
// or inside one half-neighborhood U_{i,-} / U_{i,+}.
struct BranchTag {
  enum class Kind { V, W } kind = Kind::V;
  int critical_index = -1; // valid for W
  int sign = 0;            // -1 for U_{i-}, +1 for U_{i+}

  std::string str() const;
  bool in_critical_set() const { return kind == Kind::W; }
};

// Critical points, exponents, neighborhoods U_i with their half-pieces,
// the noncritical set V, and the sampled post-critical cloud.
struct CriticalStructure {
  MapModel map;
  std::vector<double> cp;       // critical points, sorted
  std::vector<double> gamma;    // exponent per critical point
  std::vector<double> values;   // v_i = f(c_i)
  std::vector<Interval> U;      // U_i = [c_i - r_i, c_i + r_i]
  std::vector<double> radii;    // final radii (after any auto-shrink)
  std::vector<bool> shrunk;     // whether U_i was auto-shrunk
  std::vector<double> postcritical; // deduplicated cloud, sorted
  int postcritical_depth = 0;
  int postcritical_start = 1;   // first iterate included (N of the good class)
  std::vector<Interval> V_components;

  bool has_criticals() const { return !cp.empty(); }

  // Membership of a point / certified membership of an interval.
  std::optional<BranchTag> region_of(double x) const;
  std::optional<BranchTag> region_of(const Interval& I) const;

  double distance_to_postcritical(double x) const;
};

// Builds the structure and verifies the very-good-mapping geometry:
// pairwise disjoint U_i, exponents matching on shared critical values,
// U disjoint from the post-critical cloud with gap >= r_i (radii are
// halved, at most 40 times, until the gap holds).
CriticalStructure build_critical_structure(const MapModel& m,
                                           std::vector<double> radii,
                                           int postcritical_depth,
                                           int postcritical_start = 1);

} // namespace dk
