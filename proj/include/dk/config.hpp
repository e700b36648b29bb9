#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "dk/interval.hpp"
#include "dk/map.hpp"

namespace dk {

// Declarative experiment description. Parsing is strict: unknown keys and
// out-of-range values are config errors, so a config means one experiment.
struct ExperimentConfig {
  // map
  std::string family;
  nlohmann::json map_params;
  Interval domain{0.0, 1.0};

  // structure
  std::vector<double> radii;
  int postcritical_depth = 100;
  int postcritical_start = 1;

  // coordinate
  std::vector<double> chart_radii; // empty: default rule
  double collar = 0.1;

  // verification
  double alpha = 1.0;
  int n_max = 8;
  int pairs_per_sequence = 50;
  double safety = 1.5;
  std::uint64_t seed = 1;
  long holder_samples = 2000;

  // sequences
  std::vector<Interval> seed_intervals;

  // output
  std::string out_dir = ".";
  std::string format = "json"; // json | csv (csv additionally writes factor tables)

  nlohmann::json canonical; // parsed document, for hashing

  MapModel make_map() const;
};

ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);

std::string config_hash(const ExperimentConfig& cfg); // FNV-1a of the canonical dump

} // namespace dk
