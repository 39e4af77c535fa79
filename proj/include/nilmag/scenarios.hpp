#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nilmag/config.hpp"
#include "nilmag/magext.hpp"

namespace nilmag {

/// A loaded scenario. For extension documents `system` is the extension
/// itself (geodesic, sigma = 0) and `extension` carries the base split.
struct Scenario {
  std::string id;
  ScenarioConfig config;
  MagneticSystem system;
  std::optional<ExtendedSystem> extension;
};

std::vector<std::string> builtin_scenario_names();

/// Config text of a built-in; t4ext is generated by extending paper5d.
std::string builtin_config_text(const std::string& name);

/// Built-in name or path to a config file.
Scenario load_scenario(const std::string& name_or_path);
Scenario scenario_from_config(ScenarioConfig cfg);

/// True when the algebra matches t4 in the (U, V, X, Y, Z, W) order, so the
/// t4 Casimirs and orbit sampler apply.
bool is_t4_shaped(const LieAlgebra& algebra);

}  // namespace nilmag
