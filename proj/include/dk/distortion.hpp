#pragma once

#include <vector>

#include "dk/coordinate.hpp"
#include "dk/critical.hpp"
#include "dk/map.hpp"
#include "dk/orbit.hpp"

namespace dk {

// All constants of the Denjoy-Koebe bound. Estimated Hoelder/Lipschitz
// constants carry the safety factor; betas and L are grid minima.
// Convention note: the assembled bound uses the conservative maximum of
// the two tau bookkeepings (multiplier tau from the per-visit estimate,
// 1/tau from the assembled statement); both are reported.
struct ConstantsReport {
  double K1 = 0.0, beta1 = 0.0; // f' on the V pieces
  double K2 = 0.0, beta2 = 0.0; // derivative of ftilde = h o f on U halves
  double K3 = 0.0, beta3 = 0.0; // h on U (Lipschitz constant, min derivative)
  double K4 = 1.0;              // comparison constant of the l>1 case
  double log_K4 = 0.0;
  double L = 0.0;               // dist(U, post-critical closure)
  double tau = 0.0;             // max of 1 - 1/gamma_j
  double A = 0.0, B = 0.0;            // conservative-max convention
  double A_proof = 0.0, B_proof = 0.0; // per-visit (multiplier tau) convention
  double alpha = 1.0;
  double safety = 1.5;
  double expansion_K = 0.0, expansion_nu = 0.0; // pooled condition (VI) fit
  double v_piece_max = 0.0;     // max V-component length entering K4
};

struct StepFactor {
  int index = 0;
  BranchTag tag;
  double x = 0.0, y = 0.0;
  double deriv_x = 0.0, deriv_y = 0.0;
};

struct DistortionReport {
  double ratio = 1.0;       // |g_n'(x)| / |g_n'(y)| by the chain rule
  double log_ratio = 0.0;
  double v_product = 1.0, u_product = 1.0; // the two-product split (log-safe)
  double log_v_product = 0.0, log_u_product = 0.0;
  double holder_sum = 0.0;  // sum |x_i - y_i|^alpha, i = 0..n
  double alpha = 1.0;
  double koebe_term = 0.0;  // |x - y| / D_xy
  double D_xy = 0.0;
  double bound = 1.0;
  double log_bound = 0.0;
  double margin = 1.0;      // bound / max(ratio, 1/ratio)
  double log_margin = 0.0;
  std::vector<double> xs, ys;
  std::vector<StepFactor> steps;
};

// Ratio part of the report: pullbacks, chain-rule product, the V/U split
// and the Hoelder sum. The bound fields are filled by apply_bound.
DistortionReport distortion_along(const MapModel& m, const SuitableSequence& seq,
                                  double x, double y, double alpha = 1.0);

double naive_bound(double K, double beta, const std::vector<double>& diffs,
                   double alpha);

struct ConstantsOptions {
  long samples = 2000;
  double safety = 1.5;
  std::uint64_t seed = 0;
  int expansion_starts_per_component = 25;
  int expansion_depth = 64;
};

ConstantsReport estimate_constants(const MapModel& m, const CriticalStructure& cs,
                                   const CoordinateChange& cc, double alpha,
                                   const ConstantsOptions& opt = {});

double dk_log_bound(const ConstantsReport& consts, double holder_sum,
                    double koebe_term);
double dk_bound(const ConstantsReport& consts, double holder_sum,
                double koebe_term);

// Fills koebe_term, bound and margin of a report for the pair it was
// computed from. D_xy = 0 is rejected.
void apply_bound(DistortionReport& report, const ConstantsReport& consts,
                 double D_xy);

// Diagnostics of the three-product factorization of the U-part of the
// chain-rule product, with the proof's per-visit estimates.
struct VisitRow {
  int index = 0;             // i with x_i, y_i in U
  double critical_value = 0.0;
  double gap = 0.0;          // m_q: steps since the previous U-visit (or i)
  double ratio_prev = 0.0;   // |y_{i-1} - v| / |x_{i-1} - v|
  double triangle_rhs = 0.0; // 1 + |x_{i-1} - y_{i-1}| / |x_{i-1} - v|
  double case_lhs = 0.0;     // |x_{i-1} - y_{i-1}| / |x_{i-1} - v|
  double case_rhs = 0.0;     // K4 |x-y|/D_xy resp. K4 |x_q-m - y_q-m| / L
  bool triangle_ok = false;
  bool case_ok = false;
};

struct ThreeProductDiag {
  double h_product = 1.0;       // prod |h'(y_i)| / |h'(x_i)|
  double ftilde_product = 1.0;  // prod |ftilde'(h(y_i))| / |ftilde'(h(x_i))|
  double third_product = 1.0;   // prod |h'(f(x_i))| / |h'(f(y_i))|
  double u_product = 1.0;       // U-part of the chain-rule product
  double identity_error = 0.0;  // relative mismatch of the factorization
  std::vector<VisitRow> visits;
};

ThreeProductDiag factor_three_products(const MapModel& m,
                                       const CriticalStructure& cs,
                                       const CoordinateChange& cc,
                                       const ConstantsReport& consts,
                                       const SuitableSequence& seq,
                                       double x, double y);

} // namespace dk
