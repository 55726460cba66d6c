#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "rutcast/data.hpp"
#include "rutcast/graph.hpp"
#include "rutcast/swarm.hpp"
#include "rutcast/synth.hpp"

namespace rutcast {

// Declarative run description shared by all CLI commands. Defaults follow the
// published parameter choices (rho 0.5, span 0.05, window 5, the swarm
// bounds/limits) and this project's documented defaults elsewhere.
struct RunConfig {
  std::string data_csv;       // when empty, data comes from the synthesis spec
  data::SynthSpec synth;
  double loess_span = 0.05;
  int loess_degree = 1;
  int window = data::kDefaultWindow;
  data::SplitSpec split;
  double rho = 0.5;
  net::EdgeConfig edge;
  int elm_hidden = 64;
  double elm_c_original = 100.0;
  double elm_c_residual = 100.0;
  std::string elm_activation = "sigmoid";
  swarm::SwarmConfig swarm;
  std::string uncertainty_structure = "STR1";
  std::uint64_t seed = 1;     // drives community detection and per-structure training seeds
  std::string out_dir = "out";
};

nlohmann::json config_to_json(const RunConfig& cfg);
RunConfig config_from_json(const nlohmann::json& j);

RunConfig load_config(const std::filesystem::path& path);

// Applies a dotted-path override like "swarm.iterations=50" to a config JSON.
// The key must already exist; the value is parsed as JSON when possible and
// falls back to a plain string.
void apply_override(nlohmann::json& j, const std::string& key_equals_value);

}  // namespace rutcast
