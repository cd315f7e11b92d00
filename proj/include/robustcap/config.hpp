#pragma once

#include <cstddef>
#include <string>

#include "robustcap/types.hpp"

namespace robustcap {

/// Tunables of the robustification algorithm, as read from the config file.
struct AlgorithmParams {
  double epsilon_gap_fraction = 1e-3;
  double epsilon_hour = 1e-6;
  int max_iterations = 20;
  int smoothing_half_width = 12;
  std::size_t max_join_distance = 6;
  std::size_t splice_margin = 6;
  double alpha = 0.7;
};

struct SystemConfig {
  TechnologyCatalog catalog;
  CostModel cost_model;
  AlgorithmParams params;
};

/// Parses the JSON system configuration (technologies, cost model and
/// algorithm parameters). See README for the documented keys. Throws
/// SchemaError with the offending key on malformed input.
SystemConfig load_config(const std::string& path);
SystemConfig parse_config(const std::string& json_text, const std::string& origin);

/// Round-trips the configuration for artifact snapshots.
std::string config_to_json(const SystemConfig& config);

}  // namespace robustcap
