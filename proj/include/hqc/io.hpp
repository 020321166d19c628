#pragma once

// JSON config files, result bundles and run manifests.
//
// Config files mirror ExperimentConfig field names; every field is optional
// and overlays the experiment's defaults, but unknown keys are rejected.

#include "hqc/experiments.hpp"

#include "json.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

namespace hqc {

using nlohmann::json;

/// Bumped whenever a file format or a default changes meaning.
inline constexpr std::string_view kFormatRevision = "hqc-sim/1";

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : j.items()) {
    if (!ok.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <class T>
void read_field(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

inline std::string read_string(const json& j, const char* key, const std::string& fallback, const std::string& where) {
  std::string s = fallback;
  read_field(j, key, s, where);
  return s;
}

}  // namespace detail

// --- control ---------------------------------------------------------------

inline json to_json(const PulseTrain& t) {
  return json{{"kind", to_string(t.kind)}, {"J", t.J}, {"dt", t.dt}, {"p", t.p}, {"seed", t.seed}};
}

inline PulseTrain pulse_train_from_json(const json& j, PulseTrain base = {}, const std::string& where = "control") {
  detail::reject_unknown(j, {"kind", "J", "dt", "p", "seed"}, where);
  try {
    base.kind = control_kind_from_string(detail::read_string(j, "kind", std::string(to_string(base.kind)), where));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
  detail::read_field(j, "J", base.J, where);
  detail::read_field(j, "dt", base.dt, where);
  detail::read_field(j, "p", base.p, where);
  detail::read_field(j, "seed", base.seed, where);
  return base;
}

// --- gate ------------------------------------------------------------------

inline json to_json(const GateSpec& g) {
  return json{{"kind", to_string(g.kind)},
              {"schedule", {{"a", g.schedule.a}, {"T", g.schedule.T}}},
              {"couplings", {{"J12", g.couplings.J12}, {"J13", g.couplings.J13}}}};
}

inline GateSpec gate_from_json(const json& j, GateSpec base = {}, const std::string& where = "gate") {
  detail::reject_unknown(j, {"kind", "schedule", "couplings"}, where);
  try {
    base.kind = gate_kind_from_string(detail::read_string(j, "kind", std::string(to_string(base.kind)), where));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
  if (j.contains("schedule")) {
    const auto& s = j.at("schedule");
    detail::reject_unknown(s, {"a", "T"}, where + ".schedule");
    detail::read_field(s, "a", base.schedule.a, where + ".schedule");
    detail::read_field(s, "T", base.schedule.T, where + ".schedule");
  }
  if (j.contains("couplings")) {
    const auto& c = j.at("couplings");
    detail::reject_unknown(c, {"J12", "J13"}, where + ".couplings");
    detail::read_field(c, "J12", base.couplings.J12, where + ".couplings");
    detail::read_field(c, "J13", base.couplings.J13, where + ".couplings");
  }
  return base;
}

// --- policy ----------------------------------------------------------------

inline json to_json(const StepPolicy& p) {
  return json{{"substeps_per_segment", p.substeps_per_segment}, {"max_step", p.max_step}, {"max_phase", p.max_phase}};
}

inline StepPolicy policy_from_json(const json& j, StepPolicy base = {}, const std::string& where = "policy") {
  detail::reject_unknown(j, {"substeps_per_segment", "max_step", "max_phase"}, where);
  detail::read_field(j, "substeps_per_segment", base.substeps_per_segment, where);
  detail::read_field(j, "max_step", base.max_step, where);
  detail::read_field(j, "max_phase", base.max_phase, where);
  return base;
}

// --- experiment config -----------------------------------------------------

inline json to_json(const ExperimentConfig& c) {
  return json{{"gate", to_json(c.gate)},
              {"control", to_json(c.control)},
              {"sweep_variable", to_string(c.sweep_variable)},
              {"grid", c.grid},
              {"realizations", c.realizations},
              {"master_seed", c.master_seed},
              {"policy", to_json(c.policy)},
              {"resonance_tol", c.resonance_tol}};
}

/// Grid as an explicit ascending list, or {"start", "stop", "count", "spacing": "linear"|"log"}.
inline std::vector<double> grid_from_json(const json& j) {
  if (j.is_array()) {
    try {
      return j.get<std::vector<double>>();
    } catch (const json::exception& e) {
      throw ConfigError(std::string("grid: ") + e.what());
    }
  }
  detail::reject_unknown(j, {"start", "stop", "count", "spacing"}, "grid");
  double start = 0.0, stop = 0.0;
  int count = 0;
  std::string spacing = "linear";
  detail::read_field(j, "start", start, "grid");
  detail::read_field(j, "stop", stop, "grid");
  detail::read_field(j, "count", count, "grid");
  detail::read_field(j, "spacing", spacing, "grid");
  if (count < 1) throw ConfigError("grid: count must be >= 1");
  if (spacing == "linear") return linspace(start, stop, count);
  if (spacing == "log") return logspace(start, stop, count);
  throw ConfigError("grid: spacing must be 'linear' or 'log'");
}

inline ExperimentConfig config_from_json(const json& j, Experiment experiment) {
  detail::reject_unknown(j,
                         {"gate", "control", "sweep_variable", "grid", "realizations", "master_seed", "policy",
                          "resonance_tol"},
                         "config");
  ExperimentConfig cfg = default_config(experiment);
  if (j.contains("gate")) cfg.gate = gate_from_json(j.at("gate"), cfg.gate);
  if (j.contains("control")) cfg.control = pulse_train_from_json(j.at("control"), cfg.control);
  if (j.contains("sweep_variable")) {
    try {
      cfg.sweep_variable = sweep_variable_from_string(j.at("sweep_variable").get<std::string>());
    } catch (const std::exception& e) {
      throw ConfigError(std::string("sweep_variable: ") + e.what());
    }
  }
  if (cfg.sweep_variable != sweep_variable_for(experiment)) {
    throw ConfigError("sweep_variable '" + std::string(to_string(cfg.sweep_variable)) + "' does not match experiment '" +
                      std::string(to_string(experiment)) + "'");
  }
  if (j.contains("grid")) cfg.grid = grid_from_json(j.at("grid"));
  detail::read_field(j, "realizations", cfg.realizations, "config");
  detail::read_field(j, "master_seed", cfg.master_seed, "config");
  detail::read_field(j, "resonance_tol", cfg.resonance_tol, "config");
  if (j.contains("policy")) cfg.policy = policy_from_json(j.at("policy"), cfg.policy);
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

inline json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

// --- results ---------------------------------------------------------------

inline json to_json(const SweepRow& r) {
  return json{{"x", r.x},
              {"f_mean", r.f_mean},
              {"f_min", r.f_min},
              {"f_max", r.f_max},
              {"gamma_measured_mean", r.gamma_measured_mean},
              {"gamma_ideal", r.gamma_ideal},
              {"overlap_mean", r.overlap_mean},
              {"resonant", r.resonant},
              {"nearest_n", r.nearest_n},
              {"seed_base", r.seed_base},
              {"measured_mean_control", r.measured_mean_control},
              {"realizations", r.realizations},
              {"steps", r.steps}};
}

inline json to_json(const KickEquivalenceReport& r) {
  return json{{"interval", r.interval},
              {"kick_count", r.kick_count},
              {"max_unitary_difference", r.max_unitary_difference},
              {"net_area_positive", r.net_area_positive},
              {"net_area_alternating", r.net_area_alternating},
              {"f_positive", r.f_positive},
              {"f_alternating", r.f_alternating},
              {"unitarity_defect", r.unitarity_defect}};
}

/// Result bundle: rows plus full config echo. Deterministic for a given config.
inline json result_bundle(Experiment e, const ExperimentConfig& cfg, const std::vector<SweepRow>& rows,
                          const std::vector<KickEquivalenceReport>& kicks = {}) {
  json j{{"revision", kFormatRevision},
         {"experiment", to_string(e)},
         {"config", to_json(cfg)},
         {"rng", kRngAlgorithm},
         {"rows", json::array()}};
  for (const auto& r : rows) j["rows"].push_back(to_json(r));
  if (!kicks.empty()) {
    j["kick_reports"] = json::array();
    for (const auto& k : kicks) j["kick_reports"].push_back(to_json(k));
  }
  return j;
}

}  // namespace hqc
