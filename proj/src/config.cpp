#include "rutcast/config.hpp"

#include <fstream>
#include <functional>

#include "rutcast/util.hpp"

namespace rutcast {

using nlohmann::json;

namespace {

json split_to_json(const data::SplitSpec& s) {
  if (s.boundary_period) return json{{"boundary_period", *s.boundary_period}};
  return json{{"train_fraction", s.train_fraction}};
}

data::SplitSpec split_from_json(const json& j) {
  data::SplitSpec s;
  if (j.contains("boundary_period"))
    s.boundary_period = j.at("boundary_period").get<int>();
  else
    s.train_fraction = j.at("train_fraction").get<double>();
  return s;
}

std::string edge_rule_name(net::EdgeRule r) {
  return r == net::EdgeRule::Complete ? "complete" : "threshold";
}

net::EdgeRule edge_rule_from_name(const std::string& name) {
  if (name == "complete") return net::EdgeRule::Complete;
  if (name == "threshold") return net::EdgeRule::Threshold;
  throw ValidationError("unknown edge rule: " + name);
}

}  // namespace

json config_to_json(const RunConfig& cfg) {
  return json{
      {"data",
       {{"csv", cfg.data_csv},
        {"synth",
         {{"group_sizes", cfg.synth.group_sizes},
          {"n_periods", cfg.synth.n_periods},
          {"noise_sd", cfg.synth.noise_sd},
          {"jitter", cfg.synth.jitter},
          {"seed", cfg.synth.seed}}}}},
      {"loess", {{"span", cfg.loess_span}, {"degree", cfg.loess_degree}}},
      {"window", cfg.window},
      {"split", split_to_json(cfg.split)},
      {"grey", {{"rho", cfg.rho}}},
      {"graph", {{"edge_rule", edge_rule_name(cfg.edge.rule)}, {"threshold", cfg.edge.threshold}}},
      {"elm",
       {{"hidden", cfg.elm_hidden},
        {"c_original", cfg.elm_c_original},
        {"c_residual", cfg.elm_c_residual},
        {"activation", cfg.elm_activation}}},
      {"swarm",
       {{"iterations", cfg.swarm.iterations},
        {"population", cfg.swarm.population},
        {"x_max", cfg.swarm.x_max},
        {"v_max", cfg.swarm.v_max},
        {"omega_max", cfg.swarm.omega_max},
        {"omega_min", cfg.swarm.omega_min},
        {"c1_max", cfg.swarm.c1_max},
        {"c1_min", cfg.swarm.c1_min},
        {"c2_max", cfg.swarm.c2_max},
        {"c2_min", cfg.swarm.c2_min},
        {"variant", swarm::variant_name(cfg.swarm.variant)},
        {"mutation_prob", cfg.swarm.mutation_prob},
        {"seed", cfg.swarm.seed},
        {"parallel", cfg.swarm.parallel}}},
      {"uncertainty_structure", cfg.uncertainty_structure},
      {"seed", cfg.seed},
      {"out_dir", cfg.out_dir}};
}

RunConfig config_from_json(const json& j) {
  RunConfig cfg;
  json defaults = config_to_json(cfg);
  // Either split form is valid.
  defaults["split"] = {{"train_fraction", 0.8}, {"boundary_period", 0}};
  // Reject unknown keys early; silent typos in overrides would be worse.
  const std::function<void(const json&, const json&, std::string)> check =
      [&](const json& node, const json& ref, std::string path) {
        if (!node.is_object()) return;
        for (const auto& [key, value] : node.items()) {
          if (!ref.contains(key))
            throw ValidationError("config: unknown key '" + path + key + "'");
          if (value.is_object()) check(value, ref.at(key), path + key + ".");
        }
      };
  check(j, defaults, "");

  if (j.contains("data")) {
    const auto& d = j.at("data");
    cfg.data_csv = d.value("csv", cfg.data_csv);
    if (d.contains("synth")) {
      const auto& s = d.at("synth");
      cfg.synth.group_sizes = s.value("group_sizes", cfg.synth.group_sizes);
      cfg.synth.n_periods = s.value("n_periods", cfg.synth.n_periods);
      cfg.synth.noise_sd = s.value("noise_sd", cfg.synth.noise_sd);
      cfg.synth.jitter = s.value("jitter", cfg.synth.jitter);
      cfg.synth.seed = s.value("seed", cfg.synth.seed);
    }
  }
  if (j.contains("loess")) {
    cfg.loess_span = j.at("loess").value("span", cfg.loess_span);
    cfg.loess_degree = j.at("loess").value("degree", cfg.loess_degree);
  }
  cfg.window = j.value("window", cfg.window);
  if (j.contains("split")) cfg.split = split_from_json(j.at("split"));
  if (j.contains("grey")) cfg.rho = j.at("grey").value("rho", cfg.rho);
  if (j.contains("graph")) {
    const auto& g = j.at("graph");
    if (g.contains("edge_rule")) cfg.edge.rule = edge_rule_from_name(g.at("edge_rule"));
    cfg.edge.threshold = g.value("threshold", cfg.edge.threshold);
  }
  if (j.contains("elm")) {
    const auto& e = j.at("elm");
    cfg.elm_hidden = e.value("hidden", cfg.elm_hidden);
    cfg.elm_c_original = e.value("c_original", cfg.elm_c_original);
    cfg.elm_c_residual = e.value("c_residual", cfg.elm_c_residual);
    cfg.elm_activation = e.value("activation", cfg.elm_activation);
  }
  if (j.contains("swarm")) {
    const auto& s = j.at("swarm");
    auto& sw = cfg.swarm;
    sw.iterations = s.value("iterations", sw.iterations);
    sw.population = s.value("population", sw.population);
    sw.x_max = s.value("x_max", sw.x_max);
    sw.v_max = s.value("v_max", sw.v_max);
    sw.omega_max = s.value("omega_max", sw.omega_max);
    sw.omega_min = s.value("omega_min", sw.omega_min);
    sw.c1_max = s.value("c1_max", sw.c1_max);
    sw.c1_min = s.value("c1_min", sw.c1_min);
    sw.c2_max = s.value("c2_max", sw.c2_max);
    sw.c2_min = s.value("c2_min", sw.c2_min);
    if (s.contains("variant")) sw.variant = swarm::variant_from_name(s.at("variant"));
    sw.mutation_prob = s.value("mutation_prob", sw.mutation_prob);
    sw.seed = s.value("seed", sw.seed);
    sw.parallel = s.value("parallel", sw.parallel);
  }
  cfg.uncertainty_structure = j.value("uncertainty_structure", cfg.uncertainty_structure);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.out_dir = j.value("out_dir", cfg.out_dir);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ValidationError("config " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

void apply_override(json& j, const std::string& key_equals_value) {
  const auto eq = key_equals_value.find('=');
  if (eq == std::string::npos)
    throw ValidationError("override must look like key.path=value: " + key_equals_value);
  std::string key = key_equals_value.substr(0, eq);
  const std::string value = key_equals_value.substr(eq + 1);

  std::string pointer = "/";
  for (char c : key) pointer += (c == '.') ? '/' : c;
  const json::json_pointer ptr(pointer);
  if (!j.contains(ptr)) throw ValidationError("override: unknown config key '" + key + "'");

  json parsed = json::parse(value, nullptr, false);
  if (parsed.is_discarded()) parsed = value;  // treat as a plain string
  j[ptr] = parsed;
}

}  // namespace rutcast
