#include "dk/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <thread>

#include "dk/rng.hpp"

namespace dk {

using nlohmann::json;

namespace {

// JSON has no infinities; clamp so the report stays valid and stable.
double jnum(double x) {
  if (std::isnan(x)) return 0.0;
  if (std::isinf(x)) return x > 0.0 ? 1e308 : -1e308;
  return x;
}

json interval_json(const Interval& iv) { return json::array({iv.lo, iv.hi}); }

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct PairResult {
  int pair_index = 0;
  double x = 0.0, y = 0.0;
  DistortionReport report;
};

struct SeqResult {
  json summary;
  std::string csv_rows;
  std::vector<json> violations;
};

// Deterministic pair set on I_0: the endpoints first, then seeded uniform
// draws; pairs whose distance to the post-critical cloud vanishes are
// skipped (the Koebe term is undefined there).
std::vector<std::pair<double, double>> sample_pairs(const CriticalStructure& cs,
                                                    const Interval& I0,
                                                    int count,
                                                    std::uint64_t seed) {
  std::vector<std::pair<double, double>> pairs;
  Rng rng(seed);
  auto admissible = [&](double x, double y) {
    if (x == y) return false;
    return !cs.has_criticals() || distance_to_postcritical(cs, x, y) > 0.0;
  };
  if (admissible(I0.lo, I0.hi)) pairs.emplace_back(I0.lo, I0.hi);
  for (long attempt = 0;
       static_cast<int>(pairs.size()) < count && attempt < 20L * count; ++attempt) {
    double x = I0.lo + rng.uniform() * I0.length();
    double y = I0.lo + rng.uniform() * I0.length();
    if (admissible(x, y)) pairs.emplace_back(x, y);
  }
  return pairs;
}

SeqResult process_sequence(const ExperimentConfig& cfg, const MapModel& m,
                           const CriticalStructure& cs,
                           const ConstantsReport& consts, int seed_index,
                           int seq_index, const SuitableSequence& seq) {
  SeqResult out;
  const auto pairs = sample_pairs(cs, seq.intervals.front(), cfg.pairs_per_sequence,
                                  derive_seed(cfg.seed, static_cast<std::uint64_t>(seq_index)));
  std::vector<double> margins;
  double min_log_margin = std::numeric_limits<double>::infinity();
  double max_ratio_dev = 0.0;
  long violations = 0;
  std::ostringstream csv;
  csv << std::setprecision(17);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto [x, y] = pairs[p];
    DistortionReport rep = distortion_along(m, seq, x, y, cfg.alpha);
    const double D = cs.has_criticals()
                         ? distance_to_postcritical(cs, x, y)
                         : std::numeric_limits<double>::infinity();
    apply_bound(rep, consts, D);
    margins.push_back(rep.log_margin);
    min_log_margin = std::min(min_log_margin, rep.log_margin);
    max_ratio_dev = std::max(max_ratio_dev, std::abs(rep.log_ratio));
    if (rep.log_margin < 0.0) {
      ++violations;
      out.violations.push_back(json{{"sequence", seq_index},
                                    {"pair", static_cast<int>(p)},
                                    {"x", x},
                                    {"y", y},
                                    {"log_ratio", jnum(rep.log_ratio)},
                                    {"log_bound", jnum(rep.log_bound)},
                                    {"log_margin", jnum(rep.log_margin)}});
    }
    csv << seq_index << ',' << seed_index << ',' << seq.length() << ",\""
        << seq.tag_string() << "\"," << p << ',' << x << ',' << y << ','
        << jnum(rep.log_ratio) << ',' << jnum(rep.holder_sum) << ','
        << jnum(rep.koebe_term) << ',' << jnum(rep.D_xy) << ','
        << jnum(rep.log_bound) << ',' << jnum(rep.log_margin) << '\n';
  }
  out.summary = json{{"index", seq_index},
                     {"seed_interval", seed_index},
                     {"length", seq.length()},
                     {"tags", seq.tag_string()},
                     {"interval", interval_json(seq.intervals.front())},
                     {"pairs", static_cast<int>(pairs.size())},
                     {"min_log_margin", jnum(min_log_margin)},
                     {"median_log_margin", jnum(median(margins))},
                     {"max_abs_log_ratio", jnum(max_ratio_dev)},
                     {"violations", violations}};
  out.csv_rows = csv.str();
  return out;
}

struct Built {
  MapModel map;
  CriticalStructure cs;
  CoordinateChange cc;
};

Built build_all(const ExperimentConfig& cfg) {
  MapModel m = cfg.make_map();
  std::vector<double> radii = cfg.radii;
  if (radii.empty() && !m.criticals().empty())
    radii.assign(m.criticals().size(), 0.1 * m.domain().length());
  CriticalStructure cs = build_critical_structure(m, radii, cfg.postcritical_depth,
                                                  cfg.postcritical_start);
  CoordinateChange cc = build_coordinate_change(cs, cfg.chart_radii, cfg.collar);
  return Built{std::move(m), std::move(cs), std::move(cc)};
}

json structure_json(const CriticalStructure& cs) {
  json u = json::array(), v = json::array();
  for (const auto& iv : cs.U) u.push_back(interval_json(iv));
  for (const auto& iv : cs.V_components) v.push_back(interval_json(iv));
  return json{{"critical_points", cs.cp},
              {"exponents", cs.gamma},
              {"critical_values", cs.values},
              {"radii", cs.radii},
              {"shrunk", cs.shrunk},
              {"U", u},
              {"V_components", v},
              {"postcritical_size", static_cast<long>(cs.postcritical.size())},
              {"postcritical_depth", cs.postcritical_depth},
              {"postcritical_start", cs.postcritical_start}};
}

json charts_json(const CoordinateChange& cc) {
  json arr = json::array();
  for (const Chart& ch : cc.charts())
    arr.push_back(json{{"center", ch.center},
                       {"gamma", ch.gamma},
                       {"tau", ch.tau},
                       {"radius", ch.radius},
                       {"inner", ch.inner}});
  return arr;
}

json provenance_json(const ExperimentConfig& cfg) {
  return json{{"config_hash", config_hash(cfg)},
              {"seed", cfg.seed},
              {"version", kVersion}};
}

} // namespace

json to_json(const ConstantsReport& c) {
  return json{{"K1", jnum(c.K1)},       {"beta1", jnum(c.beta1)},
              {"K2", jnum(c.K2)},       {"beta2", jnum(c.beta2)},
              {"K3", jnum(c.K3)},       {"beta3", jnum(c.beta3)},
              {"K4", jnum(c.K4)},       {"log_K4", jnum(c.log_K4)},
              {"L", jnum(c.L)},         {"tau", jnum(c.tau)},
              {"A", jnum(c.A)},         {"B", jnum(c.B)},
              {"A_proof", jnum(c.A_proof)}, {"B_proof", jnum(c.B_proof)},
              {"alpha", c.alpha},       {"safety", c.safety},
              {"expansion_K", jnum(c.expansion_K)},
              {"expansion_nu", jnum(c.expansion_nu)},
              {"v_piece_max", jnum(c.v_piece_max)}};
}

json to_json(const Lemma1Report& r) {
  return json{{"left_limit", jnum(r.left_limit)},
              {"right_limit", jnum(r.right_limit)},
              {"left_spread", jnum(r.left_spread)},
              {"right_spread", jnum(r.right_spread)}};
}

RunResult run_experiment(const ExperimentConfig& cfg, int jobs) {
  Built b = build_all(cfg);

  json lemma1 = json::array();
  for (double c : b.cs.cp) {
    json entry = to_json(lemma1_check(b.map, b.cc, c));
    entry["critical_point"] = c;
    lemma1.push_back(std::move(entry));
  }

  ConstantsOptions copt;
  copt.samples = cfg.holder_samples;
  copt.safety = cfg.safety;
  copt.seed = derive_seed(cfg.seed, 0xC0457A475ULL);
  const ConstantsReport consts =
      estimate_constants(b.map, b.cs, b.cc, cfg.alpha, copt);

  // every suitable sequence, across all seed intervals, in a fixed order
  std::vector<std::pair<int, SuitableSequence>> seqs; // (seed interval, sequence)
  for (std::size_t s = 0; s < cfg.seed_intervals.size(); ++s)
    for (auto& seq : enumerate_suitable(b.map, b.cs, cfg.seed_intervals[s], cfg.n_max))
      seqs.emplace_back(static_cast<int>(s), std::move(seq));

  std::vector<SeqResult> results(seqs.size());
  auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i)
      results[i] = process_sequence(cfg, b.map, b.cs, consts,
                                    seqs[i].first, static_cast<int>(i),
                                    seqs[i].second);
  };
  const int nthreads = std::max(1, jobs);
  if (nthreads == 1 || seqs.size() < 2) {
    work(0, seqs.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (seqs.size() + nthreads - 1) / nthreads;
    for (std::size_t lo = 0; lo < seqs.size(); lo += chunk)
      pool.emplace_back(work, lo, std::min(lo + chunk, seqs.size()));
    for (auto& t : pool) t.join();
  }

  RunResult out;
  json seq_json = json::array(), violations = json::array();
  std::ostringstream csv;
  csv << "sequence,seed_interval,length,tags,pair,x,y,log_ratio,holder_sum,"
         "koebe_term,D_xy,log_bound,log_margin\n";
  double min_log_margin = std::numeric_limits<double>::infinity();
  for (SeqResult& r : results) {
    min_log_margin =
        std::min(min_log_margin, r.summary.at("min_log_margin").get<double>());
    seq_json.push_back(std::move(r.summary));
    for (json& v : r.violations) {
      ++out.violations;
      violations.push_back(std::move(v));
    }
    csv << r.csv_rows;
  }

  out.report = json{{"schema_version", kReportSchemaVersion},
                    {"provenance", provenance_json(cfg)},
                    {"map", json{{"family", cfg.family},
                                 {"kind", map_kind_name(b.map.kind())},
                                 {"domain", interval_json(b.map.domain())}}},
                    {"structure", structure_json(b.cs)},
                    {"charts", charts_json(b.cc)},
                    {"lemma1", lemma1},
                    {"constants", to_json(consts)},
                    {"sequence_count", static_cast<long>(seqs.size())},
                    {"sequences", seq_json},
                    {"min_log_margin", jnum(min_log_margin)},
                    {"violations", violations},
                    {"verdict", out.violations == 0 ? "pass" : "fail"}};
  out.factors_csv = csv.str();
  return out;
}

std::string write_outputs(const ExperimentConfig& cfg, const RunResult& result) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  const fs::path report_path = fs::path(cfg.out_dir) / "report.json";
  {
    std::ofstream os(report_path);
    if (!os) throw Error(ErrorCode::Config, "cannot write " + report_path.string());
    os << result.report.dump(2) << '\n';
  }
  if (cfg.format == "csv") {
    const fs::path csv_path = fs::path(cfg.out_dir) / "factors.csv";
    std::ofstream os(csv_path);
    if (!os) throw Error(ErrorCode::Config, "cannot write " + csv_path.string());
    os << result.factors_csv;
  }
  return report_path.string();
}

json enumerate_report(const ExperimentConfig& cfg) {
  Built b = build_all(cfg);
  json out = json{{"provenance", provenance_json(cfg)},
                  {"structure", structure_json(b.cs)}};
  json list = json::array();
  long total = 0;
  for (std::size_t s = 0; s < cfg.seed_intervals.size(); ++s) {
    for (const auto& seq :
         enumerate_suitable(b.map, b.cs, cfg.seed_intervals[s], cfg.n_max)) {
      list.push_back(json{{"index", total++},
                          {"seed_interval", static_cast<int>(s)},
                          {"length", seq.length()},
                          {"tags", seq.tag_string()},
                          {"interval", interval_json(seq.intervals.front())},
                          {"deepest", interval_json(seq.intervals.back())}});
    }
  }
  out["sequence_count"] = total;
  out["sequences"] = std::move(list);
  return out;
}

json constants_report_json(const ExperimentConfig& cfg) {
  Built b = build_all(cfg);
  ConstantsOptions copt;
  copt.samples = cfg.holder_samples;
  copt.safety = cfg.safety;
  copt.seed = derive_seed(cfg.seed, 0xC0457A475ULL);
  const ConstantsReport consts =
      estimate_constants(b.map, b.cs, b.cc, cfg.alpha, copt);
  return json{{"provenance", provenance_json(cfg)},
              {"structure", structure_json(b.cs)},
              {"charts", charts_json(b.cc)},
              {"constants", to_json(consts)}};
}

} // namespace dk
