// Acceptance suite: one criterion per check, one PASS/FAIL line each.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dk/config.hpp"
#include "dk/distortion.hpp"
#include "dk/exponent.hpp"
#include "dk/orbit.hpp"
#include "dk/rng.hpp"
#include "dk/runner.hpp"

using namespace dk;
using nlohmann::json;

namespace {

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  if (!ok) ++failures;
}

ExperimentConfig quadratic_config(int n_max, int pairs) {
  json doc = json::parse(R"({
    "map": { "family": "quadratic", "params": { "a": 4.0 }, "domain": [0.0, 1.0] },
    "structure": { "radii": [0.1] },
    "verify": { "alpha": 1.0, "seed": 1 },
    "sequences": { "seeds": [[0.62, 0.68], [0.05, 0.1]] },
    "output": { "dir": "out/acceptance", "format": "json" }
  })");
  doc["verify"]["n_max"] = n_max;
  doc["verify"]["pairs_per_sequence"] = pairs;
  return parse_config(doc);
}

// deterministic pool of suitable quadratic sequences from random branch
// choices of a fixed depth
std::vector<SuitableSequence> random_sequences(const MapModel& m,
                                               const CriticalStructure& cs,
                                               Interval I0, int depth, int count,
                                               std::uint64_t seed) {
  std::vector<SuitableSequence> out;
  Rng rng(seed);
  for (int attempt = 0; attempt < 2000 && static_cast<int>(out.size()) < count;
       ++attempt) {
    std::vector<int> choices;
    for (int j = 0; j < depth; ++j) choices.push_back(rng.next() & 1);
    try {
      out.push_back(build_suitable_sequence(m, cs, I0, choices));
    } catch (const Error&) {
      continue;
    }
  }
  return out;
}

// ---------------------------------------------------------------- criteria

void criterion_full_run() {
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentConfig cfg = quadratic_config(12, 50);
  const RunResult result = run_experiment(cfg);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const long sequences = result.report.at("sequence_count").get<long>();
  char detail[256];
  std::snprintf(detail, sizeof detail,
                "%ld sequences to depth 12, 50 pairs each, %ld violations, %.1fs",
                sequences, result.violations, secs);
  report("lemma2-quadratic-a4", result.violations == 0 && sequences > 0 &&
                                    secs < 60.0 &&
                                    result.report.at("verdict") == "pass",
         detail);
}

void criterion_chain_rule_oracle() {
  const MapModel m = MapModel::quadratic(4.0);
  const CriticalStructure cs = build_critical_structure(m, {0.1}, 100);
  const auto seqs = random_sequences(m, cs, {0.62, 0.68}, 8, 16, 21);
  Rng rng(22);
  double worst = 0.0;
  int samples = 0;
  for (const auto& seq : seqs) {
    for (int p = 0; p < 16; ++p) {
      const double x = rng.uniform(0.625, 0.675);
      const double y = rng.uniform(0.625, 0.675);
      if (x == y) continue;
      const DistortionReport rep = distortion_along(m, seq, x, y);
      auto fd = [&](double z) {
        const double d = 1e-6;
        return (seq.pullback(m, z + d).back() - seq.pullback(m, z - d).back()) /
               (2.0 * d);
      };
      const double oracle = std::abs(fd(x)) / std::abs(fd(y));
      worst = std::max(worst, std::abs(rep.ratio / oracle - 1.0));
      ++samples;
    }
  }
  char detail[160];
  std::snprintf(detail, sizeof detail,
                "%d samples, worst relative error %.2e (tolerance 1e-5)", samples,
                worst);
  report("chain-rule-oracle", samples >= 200 && worst <= 1e-5, detail);
}

void criterion_conjugacy_oracle() {
  // the a=4 quadratic is conjugate to the slope-2 tent map by
  // h_c(x) = (2/pi) asin(sqrt(x)); branch pullbacks transport accordingly
  const MapModel m = MapModel::quadratic(4.0);
  const CriticalStructure cs = build_critical_structure(m, {0.1}, 100);
  const auto seqs = random_sequences(m, cs, {0.62, 0.64}, 20, 12, 31);
  auto hc = [](double x) { return 2.0 / M_PI * std::asin(std::sqrt(x)); };
  auto hc_prime = [](double x) { return 1.0 / (M_PI * std::sqrt(x * (1.0 - x))); };
  auto hc_inv = [](double w) {
    const double s = std::sin(M_PI * w / 2.0);
    return s * s;
  };
  auto hc_inv_prime = [](double w) { return M_PI / 2.0 * std::sin(M_PI * w); };

  auto oracle_deriv = [&](const SuitableSequence& seq, double x) {
    double w = hc(x);
    for (int c : seq.choices) w = (c == 0) ? w / 2.0 : 1.0 - w / 2.0;
    return std::abs(hc_inv_prime(w)) * std::pow(0.5, seq.length()) * hc_prime(x);
  };
  auto oracle_point = [&](const SuitableSequence& seq, double x) {
    double w = hc(x);
    for (int c : seq.choices) w = (c == 0) ? w / 2.0 : 1.0 - w / 2.0;
    return hc_inv(w);
  };

  Rng rng(33);
  double worst_ratio = 0.0, worst_point = 0.0;
  int samples = 0;
  for (const auto& seq : seqs) {
    for (int p = 0; p < 10; ++p) {
      const double x = rng.uniform(0.621, 0.639);
      const double y = rng.uniform(0.621, 0.639);
      if (x == y) continue;
      const DistortionReport rep = distortion_along(m, seq, x, y);
      const double oracle = oracle_deriv(seq, x) / oracle_deriv(seq, y);
      worst_ratio = std::max(worst_ratio, std::abs(rep.ratio / oracle - 1.0));
      worst_point = std::max(
          worst_point, std::abs(rep.xs.back() - oracle_point(seq, x)));
      ++samples;
    }
  }
  char detail[200];
  std::snprintf(detail, sizeof detail,
                "%d samples at depth 20, ratio error %.2e, point error %.2e "
                "(tolerance 1e-8)",
                samples, worst_ratio, worst_point);
  report("conjugacy-oracle",
         samples >= 100 && worst_ratio <= 1e-8 && worst_point <= 1e-8, detail);
}

void criterion_naive_bound_brute_force() {
  Rng rng(77);
  int polys = 0;
  bool all_ok = true;
  double worst_margin = 1e300;
  while (polys < 100) {
    // monotone self-map of [0,1]: a + b x + c x^3 with positive derivative
    const double a = rng.uniform(0.05, 0.3);
    const double b = rng.uniform(0.3, 0.6);
    const double c = rng.uniform(-0.09, 0.09);
    if (b + 3.0 * std::min(0.0, c) <= 0.01) continue;
    if (a + b + c >= 1.0) continue;
    const MapModel m = MapModel::polynomial({a, b, 0.0, c}, {0.0, 1.0});
    auto fp = [&m](double t) { return m.deriv(t); };
    const double K = estimate_holder(fp, {0.0, 1.0}, 1.0, 1000).constant;
    double beta = 1e300;
    for (int i = 0; i <= 500; ++i) beta = std::min(beta, std::abs(fp(i / 500.0)));

    std::vector<double> xs{0.0, 1.0, rng.uniform(), rng.uniform(), rng.uniform()};
    for (double x : xs) {
      for (double y : xs) {
        if (x == y) continue;
        std::vector<double> diffs;
        double px = 1.0, py = 1.0, u = x, v = y;
        for (int n = 0; n < 6; ++n) {
          diffs.push_back(u - v);
          px *= fp(u);
          py *= fp(v);
          u = m.eval(u);
          v = m.eval(v);
        }
        const double ratio = std::max(px / py, py / px);
        const double bound = naive_bound(K, beta, diffs, 1.0);
        worst_margin = std::min(worst_margin, bound / ratio);
        if (ratio > bound * (1.0 + 1e-9)) all_ok = false;
      }
    }
    ++polys;
  }
  char detail[160];
  std::snprintf(detail, sizeof detail,
                "%d polynomials, 6 iterates, worst bound/ratio %.3f", polys,
                worst_margin);
  report("lemma3-brute-force", all_ok && polys == 100 && worst_margin >= 1.0,
         detail);
}

void criterion_lemma1_limits() {
  bool ok = true;
  std::string detail;
  {
    const MapModel m = MapModel::quadratic(4.0);
    const CriticalStructure cs = build_critical_structure(m, {0.1}, 100);
    const CoordinateChange cc = build_coordinate_change(cs);
    const Lemma1Report rep = lemma1_check(m, cc, 0.5, 1e-2, 12);
    ok = ok && std::abs(rep.left_limit - 4.0) <= 1e-4 &&
         std::abs(rep.right_limit + 4.0) <= 1e-4 && rep.left_spread < 1e-4 &&
         rep.right_spread < 1e-4;
    char buf[96];
    std::snprintf(buf, sizeof buf, "quadratic %+0.6f/%+0.6f", rep.left_limit,
                  rep.right_limit);
    detail += buf;
  }
  for (double g : {1.5, 2.0, 3.0}) {
    // f(c - t) = v + t^g, f(c + t) = v - t^g: both one-sided limits are -g
    const MapModel m = MapModel::normal_form(0.25, g, g, 1.0, 0.75, 2, {0.0, 1.0});
    const CriticalStructure cs = build_critical_structure(m, {0.05}, 30);
    const CoordinateChange cc = build_coordinate_change(cs);
    const Lemma1Report rep = lemma1_check(m, cc, 0.25, 1e-2, 12);
    ok = ok && std::abs(rep.left_limit + g) <= 1e-4 &&
         std::abs(rep.right_limit + g) <= 1e-4 && rep.left_spread < 1e-4 &&
         rep.right_spread < 1e-4;
    char buf[96];
    std::snprintf(buf, sizeof buf, ", gamma %.1f: %+0.6f/%+0.6f", g,
                  rep.left_limit, rep.right_limit);
    detail += buf;
  }
  report("lemma1-limits", ok, detail + " (tolerance 1e-4)");
}

void criterion_exponent_asymmetry() {
  bool ok = true;
  double worst = 0.0;
  for (double g : {1.5, 2.0, 3.0}) {
    for (double sigma : {-1.0, 2.0}) {
      const MapModel m =
          MapModel::normal_form(0.5, g, g, sigma, 0.5, 1, {0.25, 0.75});
      const ExponentFit left = estimate_exponent(m, 0.5, Side::Left);
      const ExponentFit right = estimate_exponent(m, 0.5, Side::Right);
      const AsymmetryEstimate asym = estimate_asymmetry(m, 0.5);
      worst = std::max({worst, std::abs(left.gamma - g), std::abs(right.gamma - g),
                        std::abs(asym.sigma - sigma)});
      ok = ok && std::abs(left.gamma - g) <= 1e-3 &&
           std::abs(right.gamma - g) <= 1e-3 && std::abs(asym.sigma - sigma) <= 1e-3;
    }
  }
  char detail[120];
  std::snprintf(detail, sizeof detail,
                "gamma in {1.5,2,3} x sigma in {-1,2}, worst error %.2e "
                "(tolerance 1e-3)",
                worst);
  report("exponent-asymmetry", ok, detail);
}

void criterion_tent_expansion() {
  const MapModel m = MapModel::tent(2.0);
  const CriticalStructure cs = build_critical_structure(m, {0.05}, 50);
  const ExpansionFit fit = expansion_check(m, cs, 0.3, 30);
  char detail[120];
  std::snprintf(detail, sizeof detail, "K = %.17g, nu = %.17g over 30 steps",
                fit.K, fit.nu);
  report("tent-expansion",
         fit.pass && std::abs(fit.K - 1.0) <= 1e-12 &&
             std::abs(fit.nu - 2.0) <= 1e-12,
         detail);
}

void criterion_determinism() {
  const ExperimentConfig cfg = quadratic_config(8, 20);
  const std::string a = run_experiment(cfg, 1).report.dump();
  const std::string b = run_experiment(cfg, 1).report.dump();
  const std::string c = run_experiment(cfg, 4).report.dump();
  const bool ok = a == b && a == c;
  report("determinism", ok,
         ok ? "repeated runs and jobs=4 are byte-identical"
            : "reports differ between runs");
}

} // namespace

int main() {
  criterion_full_run();
  criterion_chain_rule_oracle();
  criterion_conjugacy_oracle();
  criterion_naive_bound_brute_force();
  criterion_lemma1_limits();
  criterion_exponent_asymmetry();
  criterion_tent_expansion();
  criterion_determinism();
  std::printf("%s: %d/8 criteria passed\n", failures == 0 ? "OK" : "FAILED",
              8 - failures);
  return failures;
}
