#include <doctest.h>

#include <json.hpp>

#include "dk/config.hpp"

using namespace dk;
using nlohmann::json;

namespace {

json base_config() {
  return json::parse(R"({
    "map": { "family": "quadratic", "params": { "a": 4.0 }, "domain": [0.0, 1.0] },
    "structure": { "radii": [0.1] },
    "verify": { "alpha": 1.0, "n_max": 4, "seed": 1 },
    "sequences": { "seeds": [[0.62, 0.68]] },
    "output": { "dir": "out/test", "format": "json" }
  })");
}

} // namespace

TEST_CASE("a valid config parses with defaults filled in") {
  const ExperimentConfig cfg = parse_config(base_config());
  CHECK(cfg.family == "quadratic");
  CHECK(cfg.radii == std::vector<double>{0.1});
  CHECK(cfg.postcritical_depth == 100);
  CHECK(cfg.collar == doctest::Approx(0.1));
  CHECK(cfg.pairs_per_sequence == 50);
  CHECK(cfg.n_max == 4);
  CHECK(cfg.seed == 1);
  REQUIRE(cfg.seed_intervals.size() == 1);
  CHECK(cfg.seed_intervals[0].lo == doctest::Approx(0.62));
  const MapModel m = cfg.make_map();
  CHECK(m.eval(0.5) == doctest::Approx(1.0));
}

TEST_CASE("unknown keys are fatal") {
  json doc = base_config();
  doc["verify"]["tolerance"] = 0.1;
  CHECK_THROWS_AS(parse_config(doc), Error);
  json doc2 = base_config();
  doc2["extra"] = 1;
  CHECK_THROWS_AS(parse_config(doc2), Error);
}

TEST_CASE("range violations are config errors") {
  auto expect_config_error = [](json doc) {
    try {
      parse_config(doc);
      FAIL("expected a config error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Config);
    }
  };
  json a = base_config();
  a["verify"]["alpha"] = 1.5;
  expect_config_error(a);
  json b = base_config();
  b["verify"]["n_max"] = 100;
  expect_config_error(b);
  json c = base_config();
  c["output"]["format"] = "xml";
  expect_config_error(c);
  json d = base_config();
  d["sequences"]["seeds"] = json::array({json::array({0.9, 1.2})});
  expect_config_error(d); // leaves the domain
  json e = base_config();
  e["sequences"]["seeds"] = json::array();
  expect_config_error(e);
  json f = base_config();
  f["verify"]["safety"] = 0.5;
  expect_config_error(f);
}

TEST_CASE("every declared family constructs") {
  json doc = base_config();
  doc["map"] = {{"family", "tent"}, {"params", {{"slope", 2.0}}}, {"domain", {0.0, 1.0}}};
  doc["structure"]["radii"] = {0.05};
  CHECK(parse_config(doc).make_map().eval(0.25) == doctest::Approx(0.5));

  doc["map"] = {{"family", "normal-form"},
                {"params", {{"c", 0.5}, {"gamma_minus", 2.0}, {"gamma_plus", 2.0},
                            {"sigma", 1.0}, {"v", 0.25}, {"form", 1}}},
                {"domain", {0.0, 1.0}}};
  CHECK(parse_config(doc).make_map().eval(0.5) == doctest::Approx(0.25));

  doc["map"] = {{"family", "polynomial"},
                {"params", {{"coeffs", {0.2, 0.5}}, {"critical_points", json::array()}}},
                {"domain", {0.0, 1.0}}};
  doc["structure"]["radii"] = json::array();
  doc["sequences"]["seeds"] = json::array({json::array({0.3, 0.4})});
  CHECK(parse_config(doc).make_map().eval(0.0) == doctest::Approx(0.2));

  doc["map"] = {{"family", "piecewise"},
                {"params",
                 {{"breaks", {0.5}},
                  {"pieces", {{0.0, 1.8}, {1.8, -1.8}}},
                  {"critical_points",
                   json::array({{{"c", 0.5}, {"gamma", 1.0}}})}}},
                {"domain", {0.0, 1.0}}};
  doc["structure"]["radii"] = {0.05};
  CHECK(parse_config(doc).make_map().eval(0.75) == doctest::Approx(0.45));

  doc["map"]["family"] = "unknown";
  CHECK_THROWS_AS(parse_config(doc).make_map(), Error);
}

TEST_CASE("config hash is stable and sensitive") {
  const ExperimentConfig a = parse_config(base_config());
  const ExperimentConfig b = parse_config(base_config());
  CHECK(config_hash(a) == config_hash(b));
  json doc = base_config();
  doc["verify"]["seed"] = 2;
  CHECK(config_hash(parse_config(doc)) != config_hash(a));
}

TEST_CASE("missing config files are config errors") {
  try {
    load_config("no/such/file.json");
    FAIL("expected a config error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Config);
  }
}
