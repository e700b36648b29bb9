#pragma once

#include <stdexcept>
#include <string>

namespace dk {

enum class ErrorCode {
  Domain,          // point outside the map's domain
  SideRequired,    // two-sided derivative at a non-differentiable point
  NotPowerLaw,     // log-log fit residual too large / r unbounded
  FlatCritical,    // derivative identically zero on the fit window
  ExponentMismatch,// left/right exponents differ where equality is required
  NoLimit,         // ratio sequence not Cauchy within tolerance
  NotVeryGood,     // a very-good-mapping condition fails (V, VI, betas, L)
  Geometry,        // overlapping charts / inadmissible radii
  SemiGoodViolation,// critical value inside the critical set
  Singularity,     // h' requested at a chart center
  Lemma1Failure,   // one-sided limits zero or divergent
  Escape,          // orbit leaves the domain
  NoPreimage,      // target outside the image of the branch piece
  Branch,          // monotonicity certificate fails
  NotSuitable,     // pullback interval straddles CP or the U/V boundary
  Precondition,    // orbit segment enters U, etc.
  InvalidConstant, // beta <= 0 in a bound
  DegeneratePair,  // D_xy = 0
  Consistency,     // pullback point escapes its certified interval
  Factorization,   // three-product identity check fails
  Config,          // config parse/validation failure
  Construction,    // map construction invariant fails
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what, long index = -1)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code), index_(index) {}

  ErrorCode code() const { return code_; }
  // step/iterate index when the failure is tied to one, else -1
  long index() const { return index_; }

private:
  ErrorCode code_;
  long index_;
};

} // namespace dk
