#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "dk/interval.hpp"
#include "dk/map.hpp"

namespace dk {

// Least-squares fit of log|f'| against log offset near a critical point.
struct ExponentFit {
  double gamma = 0.0;       // slope + 1
  double coefficient = 0.0; // signed nonzero limit of f'/|x-c|^{gamma-1}
  double residual = 0.0;    // max deviation of the log-log fit
  std::vector<double> window; // offsets used
};

struct AsymmetryEstimate {
  double sigma = 0.0;
  double spread = 0.0; // Cauchy spread of the ratio tail
};

// Sampled lower bound for the smallest K with |g(x)-g(y)| <= K|x-y|^alpha,
// where g is the derivative under test. Monotone nondecreasing in samples.
struct HolderEstimate {
  double alpha = 1.0;
  double constant = 0.0;
  long sample_count = 0;
};

struct ExponentOptions {
  double h0 = 1e-2;     // largest offset
  int window = 20;      // offsets h0 * 2^-k, k = 0..window
  double fit_tol = 1e-2; // max admissible log-log residual
};

ExponentFit estimate_exponent(const MapModel& m, double c, Side side,
                              const ExponentOptions& opt = {});

AsymmetryEstimate estimate_asymmetry(const MapModel& m, double c,
                                     const ExponentOptions& opt = {});

// g is the derivative whose Hoelder constant is estimated. Pairs: all
// adjacent pairs of a fixed 1024-cell grid plus `samples` quasi-random
// pairs from a seeded golden-ratio sequence.
HolderEstimate estimate_holder(const std::function<double(double)>& g,
                               Interval I, double alpha, long samples,
                               std::uint64_t seed = 0);

// Hoelder data of r_{+-}(x) = f'(x)/|x-c|^{gamma-1} on punctured one-sided
// windows; finite constants certify the good-mapping regularity.
std::pair<HolderEstimate, HolderEstimate> check_r_holder(
    const MapModel& m, double c, double gamma, double alpha,
    double window_radius, long samples, std::uint64_t seed = 0);

} // namespace dk
