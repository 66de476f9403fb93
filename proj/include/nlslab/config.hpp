// config.hpp — JSON configuration: documented defaults, strict merging of
// user files (unknown keys are rejected by name), dotted-path overrides, and
// builders for the domain objects. An empty config plus a model spec is a
// complete, runnable configuration.

#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlslab/experiment.hpp"

namespace nlslab::config {

using nlohmann::json;

inline json defaults() {
  return json{
      {"nonlinearity",
       {{"kind", "pure_power"},
        {"p", 7.0},
        {"terms", json::array()},   // sum_of_powers: [[coefficient, exponent], ...]
        {"s", json::array()},       // tabulated sample points
        {"g", json::array()}}},     // tabulated values
      {"dimension", 1},
      {"omega", 1.0},
      {"grid", {{"half_length", 20.0}, {"points_per_axis", 4096}}},
      {"lambda", 1.05},
      {"lambda_sweep", json::array()},
      {"lambda_range", {{"min", 0.3}, {"max", 3.0}, {"count", 400}}},
      {"groundstate",
       {{"method", "auto"},
        {"petviashvili_gamma", 0.0},
        {"petviashvili_tol", 1e-13},
        {"petviashvili_max_iter", 500},
        {"shooting_bracket", json::array({0.2, 20.0})}}},
      {"controls",
       {{"t_max", 10.0},
        {"dt_initial", 1e-3},
        {"dt_min", 1e-13},
        {"dt_max", 5e-3},
        {"sample_interval", 0.0},
        {"energy_drift_tol", 1e-6},
        {"phase_rotation_cap", 0.1},
        {"blowup_gradient_ratio", 1000.0},
        {"leak_tol", 1e-8}}},
      {"family",
       {{"gaussian_widths", json::array({0.5, 0.8, 1.2, 2.0, 3.0})},
        {"gaussian_amplitudes", json::array({0.6, 1.0, 1.6, 2.5})},
        {"sech_widths", json::array({0.7, 1.0, 1.5})},
        {"sech_amplitudes", json::array({0.8, 1.3, 2.0})},
        {"include_ground_state", true}}},
      {"admissibility", {{"s_min", 1e-6}, {"s_max", 1e3}, {"count", 256}}},
      {"initial",
       {{"kind", "ground_state_scaled"},  // or "gaussian"
        {"amplitude", 1.0},
        {"width", 1.0}}},
      {"variational_check", true},
      {"max_chord_checks", 256},
      {"output_dir", "out"}};
}

namespace detail {

inline void merge_strict(json& base, const json& user, const std::string& prefix) {
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string path = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (!base.contains(it.key()))
      throw ConfigError("config: unknown key '" + path + "'");
    json& slot = base[it.key()];
    if (slot.is_object() && it.value().is_object()) {
      merge_strict(slot, it.value(), path);
    } else if (slot.is_object() != it.value().is_object()) {
      throw ConfigError("config: key '" + path + "' has the wrong shape");
    } else {
      slot = it.value();
    }
  }
}

}  // namespace detail

inline json load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
  json user;
  try {
    in >> user;
  } catch (const json::parse_error& e) {
    throw ConfigError("config: parse error in '" + path.string() + "': " + e.what());
  }
  if (!user.is_object()) throw ConfigError("config: top level must be a JSON object");
  json merged = defaults();
  detail::merge_strict(merged, user, "");
  return merged;
}

// Apply "dotted.path=value" to an existing key. Values parse as JSON scalars,
// falling back to a plain string.
inline void apply_override(json& cfg, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos)
    throw ConfigError("override '" + spec + "': expected key=value");
  const std::string path = spec.substr(0, eq);
  const std::string raw = spec.substr(eq + 1);

  json* node = &cfg;
  std::size_t start = 0;
  std::vector<std::string> keys;
  while (true) {
    const auto dot = path.find('.', start);
    keys.push_back(path.substr(start, dot == std::string::npos ? dot : dot - start));
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  for (std::size_t i = 0; i + 1 < keys.size(); ++i) {
    if (!node->is_object() || !node->contains(keys[i]))
      throw ConfigError("override: unknown key '" + path + "'");
    node = &(*node)[keys[i]];
  }
  if (!node->is_object() || !node->contains(keys.back()))
    throw ConfigError("override: unknown key '" + path + "'");

  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;  // treat as a string literal
  }
  (*node)[keys.back()] = value;
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

inline NonlinearityModel build_model(const json& cfg) {
  const json& nl = cfg.at("nonlinearity");
  const int dim = cfg.at("dimension").get<int>();
  const std::string kind = nl.at("kind").get<std::string>();
  if (kind == "pure_power") return NonlinearityModel::pure_power(nl.at("p").get<double>(), dim);
  if (kind == "sum_of_powers") {
    std::vector<std::pair<double, double>> terms;
    for (const auto& t : nl.at("terms"))
      terms.emplace_back(t.at(0).get<double>(), t.at(1).get<double>());
    return NonlinearityModel::sum_of_powers(std::move(terms), dim);
  }
  if (kind == "tabulated") {
    return NonlinearityModel::tabulated(nl.at("s").get<std::vector<double>>(),
                                        nl.at("g").get<std::vector<double>>(), dim);
  }
  throw ConfigError("config: unknown nonlinearity kind '" + kind + "'");
}

inline GridSpec build_grid(const json& cfg) {
  GridSpec g;
  g.dimension = cfg.at("dimension").get<int>();
  g.half_length = cfg.at("grid").at("half_length").get<double>();
  g.points_per_axis = cfg.at("grid").at("points_per_axis").get<std::size_t>();
  g.validate();
  return g;
}

inline IntegratorControls build_controls(const json& cfg) {
  const json& c = cfg.at("controls");
  IntegratorControls out;
  out.t_max = c.at("t_max").get<double>();
  out.dt_initial = c.at("dt_initial").get<double>();
  out.dt_min = c.at("dt_min").get<double>();
  out.dt_max = c.at("dt_max").get<double>();
  out.sample_interval = c.at("sample_interval").get<double>();
  out.energy_drift_tol = c.at("energy_drift_tol").get<double>();
  out.phase_rotation_cap = c.at("phase_rotation_cap").get<double>();
  out.blowup_gradient_ratio = c.at("blowup_gradient_ratio").get<double>();
  out.leak_tol = c.at("leak_tol").get<double>();
  out.validate();
  return out;
}

inline ProfileFamilyConfig build_family(const json& cfg) {
  const json& f = cfg.at("family");
  ProfileFamilyConfig out;
  out.gaussian_widths = f.at("gaussian_widths").get<std::vector<double>>();
  out.gaussian_amplitudes = f.at("gaussian_amplitudes").get<std::vector<double>>();
  out.sech_widths = f.at("sech_widths").get<std::vector<double>>();
  out.sech_amplitudes = f.at("sech_amplitudes").get<std::vector<double>>();
  out.include_ground_state = f.at("include_ground_state").get<bool>();
  return out;
}

inline ExperimentConfig build_experiment(const json& cfg) {
  ExperimentConfig out;
  out.model = build_model(cfg);
  out.omega = cfg.at("omega").get<double>();
  require(out.omega > 0.0, "config: omega must be positive");
  out.grid = build_grid(cfg);
  out.lambda = cfg.at("lambda").get<double>();
  out.lambda_sweep = cfg.at("lambda_sweep").get<std::vector<double>>();
  out.controls = build_controls(cfg);
  const json& gs = cfg.at("groundstate");
  out.gs_method = gs.at("method").get<std::string>();
  out.petviashvili_options.gamma = gs.at("petviashvili_gamma").get<double>();
  out.petviashvili_options.tol = gs.at("petviashvili_tol").get<double>();
  out.petviashvili_options.max_iter = gs.at("petviashvili_max_iter").get<int>();
  const auto bracket = gs.at("shooting_bracket").get<std::vector<double>>();
  require(bracket.size() == 2, "config: shooting_bracket must be [lo, hi]");
  out.shooting_bracket = {bracket[0], bracket[1]};
  out.family = build_family(cfg);
  out.variational_check = cfg.at("variational_check").get<bool>();
  out.max_chord_checks = cfg.at("max_chord_checks").get<std::size_t>();
  out.output_dir = cfg.at("output_dir").get<std::string>();
  return out;
}

// Initial data for the `evolve` and `scan-lambda` subcommands.
inline ComplexField build_initial(const json& cfg, const ExperimentConfig& exp) {
  const json& init = cfg.at("initial");
  const std::string kind = init.at("kind").get<std::string>();
  if (kind == "ground_state_scaled") {
    const GroundStateResult gs = experiment_ground_state(exp);
    return rescale(gs.field, exp.lambda);
  }
  if (kind == "gaussian") {
    return gaussian_seed(exp.grid, init.at("amplitude").get<double>(),
                         init.at("width").get<double>());
  }
  throw ConfigError("config: unknown initial kind '" + kind + "'");
}

}  // namespace nlslab::config
