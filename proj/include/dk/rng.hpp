#pragma once

#include <cmath>
#include <cstdint>

namespace dk {

// SplitMix64; used to derive independent deterministic substreams from
// (seed, index) pairs so results do not depend on worker count.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d9d49b9e979b97ULL ^ 0x9e3779b97f4a7c15ULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed;
  std::uint64_t a = splitmix64(s);
  s = a ^ (index * 0x2545f4914f6cdd1dULL + 0x9e3779b97f4a7c15ULL);
  return splitmix64(s);
}

// Portable uniform double in [0,1); avoids distribution objects whose
// output is implementation-defined.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed ^ 0x853c49e6748fea9bULL) {
    next(); next();
  }

  std::uint64_t next() { return splitmix64(state_); }

  double uniform() { return std::ldexp(static_cast<double>(next() >> 11), -53); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
  std::uint64_t state_;
};

// Additive golden-ratio recurrence on [0,1): a low-discrepancy sequence
// whose first n points are a prefix of the first 2n points, which makes
// sampled sup-estimates monotone in the sample count.
class GoldenSequence {
public:
  explicit GoldenSequence(std::uint64_t seed) {
    Rng r(seed);
    phase_ = r.uniform();
  }

  double next() {
    phase_ += kStep;
    phase_ -= std::floor(phase_);
    return phase_;
  }

private:
  static constexpr double kStep = 0.6180339887498948482; // 1/phi
  double phase_;
};

} // namespace dk
