#pragma once

#include <string>

#include <json.hpp>

#include "dk/config.hpp"
#include "dk/coordinate.hpp"
#include "dk/critical.hpp"
#include "dk/distortion.hpp"
#include "dk/orbit.hpp"

namespace dk {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kVersion = "0.1.0";

// Everything the run produced. The JSON payload is byte-reproducible for
// a fixed (config, seed); it carries no timestamps.
struct RunResult {
  nlohmann::json report;
  std::string factors_csv;
  long violations = 0;
};

// Builds all structures, checks Lemma 1 at every critical point, estimates
// the constants, enumerates suitable sequences from the seed intervals and
// verifies the distortion bound on sampled pairs.
RunResult run_experiment(const ExperimentConfig& cfg, int jobs = 1);

// Writes report.json (and factors.csv when cfg.format == "csv") under
// cfg.out_dir; returns the report path.
std::string write_outputs(const ExperimentConfig& cfg, const RunResult& result);

// Sub-pipelines shared with the CLI subcommands.
nlohmann::json enumerate_report(const ExperimentConfig& cfg);
nlohmann::json constants_report_json(const ExperimentConfig& cfg);

nlohmann::json to_json(const ConstantsReport& c);
nlohmann::json to_json(const Lemma1Report& r);

} // namespace dk
