#include "dk/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace dk {

using nlohmann::json;

namespace {

void expect_keys(const json& j, const std::string& where,
                 const std::set<std::string>& allowed) {
  if (!j.is_object())
    throw Error(ErrorCode::Config, where + " must be an object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key))
      throw Error(ErrorCode::Config, "unknown key '" + key + "' in " + where);
}

double num(const json& j, const std::string& where) {
  if (!j.is_number())
    throw Error(ErrorCode::Config, where + " must be a number");
  return j.get<double>();
}

Interval interval_of(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2)
    throw Error(ErrorCode::Config, where + " must be a [lo, hi] pair");
  Interval iv{num(j[0], where), num(j[1], where)};
  if (!(iv.lo < iv.hi))
    throw Error(ErrorCode::Config, where + " must be a nondegenerate interval");
  return iv;
}

std::vector<DeclaredCritical> criticals_of(const json& j, const std::string& where) {
  std::vector<DeclaredCritical> out;
  if (!j.is_array()) throw Error(ErrorCode::Config, where + " must be an array");
  for (const auto& e : j) {
    expect_keys(e, where, {"c", "gamma", "gamma_minus", "gamma_plus"});
    DeclaredCritical cp;
    cp.c = num(e.at("c"), where + ".c");
    if (e.contains("gamma")) {
      cp.gamma_minus = cp.gamma_plus = num(e["gamma"], where + ".gamma");
    } else {
      cp.gamma_minus = num(e.at("gamma_minus"), where + ".gamma_minus");
      cp.gamma_plus = num(e.at("gamma_plus"), where + ".gamma_plus");
    }
    out.push_back(cp);
  }
  return out;
}

} // namespace

MapModel ExperimentConfig::make_map() const {
  const json& p = map_params;
  if (family == "quadratic") {
    expect_keys(p, "map.params", {"a"});
    return MapModel::quadratic(num(p.at("a"), "map.params.a"), domain);
  }
  if (family == "tent") {
    expect_keys(p, "map.params", {"slope"});
    return MapModel::tent(num(p.at("slope"), "map.params.slope"), domain);
  }
  if (family == "normal-form") {
    expect_keys(p, "map.params",
                {"c", "gamma_minus", "gamma_plus", "sigma", "v", "form"});
    return MapModel::normal_form(
        num(p.at("c"), "c"), num(p.at("gamma_minus"), "gamma_minus"),
        num(p.at("gamma_plus"), "gamma_plus"), num(p.at("sigma"), "sigma"),
        num(p.at("v"), "v"), static_cast<int>(num(p.at("form"), "form")), domain);
  }
  if (family == "polynomial") {
    expect_keys(p, "map.params", {"coeffs", "critical_points"});
    std::vector<double> coeffs;
    for (const auto& c : p.at("coeffs")) coeffs.push_back(num(c, "coeffs"));
    std::vector<DeclaredCritical> cps;
    if (p.contains("critical_points"))
      cps = criticals_of(p["critical_points"], "map.params.critical_points");
    return MapModel::polynomial(coeffs, domain, cps);
  }
  if (family == "piecewise") {
    expect_keys(p, "map.params", {"breaks", "pieces", "critical_points"});
    std::vector<double> breaks;
    for (const auto& b : p.at("breaks")) breaks.push_back(num(b, "breaks"));
    std::vector<std::vector<double>> pieces;
    for (const auto& piece : p.at("pieces")) {
      std::vector<double> coeffs;
      for (const auto& c : piece) coeffs.push_back(num(c, "pieces"));
      pieces.push_back(coeffs);
    }
    std::vector<DeclaredCritical> cps;
    if (p.contains("critical_points"))
      cps = criticals_of(p["critical_points"], "map.params.critical_points");
    return MapModel::piecewise_polynomial(breaks, pieces, domain, cps);
  }
  throw Error(ErrorCode::Config, "unknown map family '" + family + "'");
}

ExperimentConfig parse_config(const json& doc) {
  expect_keys(doc, "config",
              {"map", "structure", "coordinate", "verify", "sequences", "output"});
  ExperimentConfig cfg;
  cfg.canonical = doc;

  const json& m = doc.at("map");
  expect_keys(m, "map", {"family", "params", "domain"});
  cfg.family = m.at("family").get<std::string>();
  cfg.map_params = m.value("params", json::object());
  if (m.contains("domain")) cfg.domain = interval_of(m["domain"], "map.domain");

  if (doc.contains("structure")) {
    const json& s = doc["structure"];
    expect_keys(s, "structure", {"radii", "postcritical_depth", "postcritical_start"});
    for (const auto& r : s.value("radii", json::array()))
      cfg.radii.push_back(num(r, "structure.radii"));
    cfg.postcritical_depth =
        static_cast<int>(s.value("postcritical_depth", 100.0));
    cfg.postcritical_start = static_cast<int>(s.value("postcritical_start", 1.0));
    if (cfg.postcritical_depth < 1 || cfg.postcritical_depth > 1000000)
      throw Error(ErrorCode::Config, "structure.postcritical_depth out of range");
    if (cfg.postcritical_start < 1)
      throw Error(ErrorCode::Config, "structure.postcritical_start must be >= 1");
  }

  if (doc.contains("coordinate")) {
    const json& c = doc["coordinate"];
    expect_keys(c, "coordinate", {"chart_radii", "collar"});
    for (const auto& r : c.value("chart_radii", json::array()))
      cfg.chart_radii.push_back(num(r, "coordinate.chart_radii"));
    cfg.collar = c.value("collar", 0.1);
    if (!(cfg.collar > 0.0 && cfg.collar < 1.0))
      throw Error(ErrorCode::Config, "coordinate.collar must lie in (0,1)");
  }

  if (doc.contains("verify")) {
    const json& v = doc["verify"];
    expect_keys(v, "verify",
                {"alpha", "n_max", "pairs_per_sequence", "safety", "seed",
                 "holder_samples"});
    cfg.alpha = v.value("alpha", 1.0);
    cfg.n_max = static_cast<int>(v.value("n_max", 8.0));
    cfg.pairs_per_sequence = static_cast<int>(v.value("pairs_per_sequence", 50.0));
    cfg.safety = v.value("safety", 1.5);
    cfg.seed = v.value("seed", 1ULL);
    cfg.holder_samples = static_cast<long>(v.value("holder_samples", 2000.0));
    if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0))
      throw Error(ErrorCode::Config, "verify.alpha must lie in (0,1]");
    if (cfg.n_max < 0 || cfg.n_max > 64)
      throw Error(ErrorCode::Config, "verify.n_max out of range [0,64]");
    if (cfg.pairs_per_sequence < 1 || cfg.pairs_per_sequence > 100000)
      throw Error(ErrorCode::Config, "verify.pairs_per_sequence out of range");
    if (cfg.safety < 1.0)
      throw Error(ErrorCode::Config, "verify.safety must be >= 1");
    if (cfg.holder_samples < 1000)
      throw Error(ErrorCode::Config, "verify.holder_samples must be >= 1000");
  }

  const json& q = doc.at("sequences");
  expect_keys(q, "sequences", {"seeds"});
  for (const auto& s : q.at("seeds"))
    cfg.seed_intervals.push_back(interval_of(s, "sequences.seeds"));
  if (cfg.seed_intervals.empty())
    throw Error(ErrorCode::Config, "sequences.seeds must not be empty");
  for (const Interval& iv : cfg.seed_intervals)
    if (!cfg.domain.contains(iv))
      throw Error(ErrorCode::Config, "a seed interval leaves the map domain");

  if (doc.contains("output")) {
    const json& o = doc["output"];
    expect_keys(o, "output", {"dir", "format"});
    cfg.out_dir = o.value("dir", ".");
    cfg.format = o.value("format", "json");
    if (cfg.format != "json" && cfg.format != "csv")
      throw Error(ErrorCode::Config, "output.format must be json or csv");
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Config, "cannot open config file " + path);
  json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::Config, std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string dump = cfg.canonical.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

} // namespace dk
