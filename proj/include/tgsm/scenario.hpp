#pragma once

// Scenario files: mesh, material, initial data, loading, coupling and output
// settings in the config grammar of config.hpp. See docs/config_format.md.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "tgsm/coupling.hpp"

namespace tgsm {

struct OutputConfig {
  bool timeseries = true;
  bool fields = true;
  int field_every = 0;  ///< write a field snapshot every n steps; 0 writes initial and final only
  bool summary = true;
};

struct ScenarioConfig {
  std::string name;
  std::string path;
  std::uint64_t seed = 1;
  GeometrySpec geometry;
  int quadrature_order = 2;
  std::shared_ptr<const MaterialModel> material;
  std::shared_ptr<const Model> model;
  SimState initial;
  CouplingConfig coupling;
  OutputConfig output;
  std::vector<std::string> warnings;  ///< unknown keys and similar non-fatal findings
};

/// Scenario file for a name: TGSM_SCENARIO_DIR/<name>.cfg, else the shipped
/// directory; an existing path is returned unchanged.
std::string resolve_scenario_path(const std::string& name_or_path);
/// Names of the scenarios in the shipped (or TGSM_SCENARIO_DIR) directory.
std::vector<std::string> list_scenarios();

/// Throws ParseError for malformed text or values and ValidationError listing
/// every violated assumption.
ScenarioConfig load_scenario(const std::string& name_or_path);
ScenarioConfig load_scenario_text(const std::string& text, const std::string& name = "inline");

/// Re-derive the initial state after changing coupling.dt.
void reset_initial_step(ScenarioConfig& sc);

}  // namespace tgsm
