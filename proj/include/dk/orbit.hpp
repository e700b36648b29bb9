#pragma once

#include <vector>

#include "dk/critical.hpp"
#include "dk/interval.hpp"
#include "dk/map.hpp"

namespace dk {

// [x, f(x), ..., f^n(x)]; throws Escape with the step index if an iterate
// leaves the domain.
std::vector<double> forward_orbit(const MapModel& m, double x, int n);

// min distance from {x, y} to the post-critical cloud; +infinity when the
// map has no critical points (the Koebe term is then zero).
double distance_to_postcritical(const CriticalStructure& cs, double x, double y);

// Unique preimage of y in a monotone piece: bisection to
// |f(x) - y| <= 1e-13 * scale (or interval exhaustion), then one Newton
// polish. The monotonicity certificate samples the derivative sign.
double inverse_branch(const MapModel& m, Interval piece, double y);

// Backward chain I_0, ..., I_n with I_j = f(I_{j+1}), each interval
// certified inside V or inside one half-neighborhood of W.
struct SuitableSequence {
  std::vector<Interval> intervals;   // I_0 .. I_n
  std::vector<BranchTag> tags;       // per interval
  std::vector<Interval> pieces;      // monotone piece used for I_{j+1} -> I_j
  std::vector<int> choices;          // piece index per pullback step

  int length() const { return static_cast<int>(intervals.size()) - 1; }
  std::string tag_string() const;

  // Pulls a point of I_0 back through the branch inverses; returns
  // x_0 .. x_n.
  std::vector<double> pullback(const MapModel& m, double x) const;
};

SuitableSequence build_suitable_sequence(const MapModel& m,
                                         const CriticalStructure& cs,
                                         Interval I0,
                                         const std::vector<int>& choices);

// Breadth-first pullback of I0 through every monotone branch, pruning at
// not-suitable nodes; returns every suitable sequence of length 0..n_max
// in lexicographic order of the choice vector.
std::vector<SuitableSequence> enumerate_suitable(const MapModel& m,
                                                 const CriticalStructure& cs,
                                                 Interval I0, int n_max);

// Per-step derivative growth along an orbit avoiding U, with the envelope
// fit |(f^k)'(x)| >= K nu^k.
struct ExpansionFit {
  double K = 0.0;
  double nu = 0.0;
  int orbit_length = 0;
  std::vector<double> products; // |(f^k)'(x)|, k = 1..n
  bool pass = false;
};

ExpansionFit expansion_check(const MapModel& m, const CriticalStructure& cs,
                             double x, int n);

} // namespace dk
