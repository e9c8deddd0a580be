#pragma once

#include <map>
#include <string>
#include <vector>

#include "robustcbf/sim.hpp"

namespace rcbf {

/// Flat key-value configuration with dotted keys, one `key = value` pair per
/// line, '#' comments. Chosen over nested formats for diff-friendliness and
/// override simplicity.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config_text(const std::string& text, const std::string& origin);
ConfigMap parse_config_file(const std::string& path);

/// Applies a `key=value` override string on top of a parsed map.
void apply_override(ConfigMap& map, const std::string& key_eq_value);

/// Builds a scenario from a config map. Every key must be consumed; unknown
/// keys raise ConfigError rather than being ignored.
ScenarioConfig make_scenario_config(const ConfigMap& map);

/// Lists every key the scenario schema accepts (for `list` and diagnostics).
std::vector<std::string> scenario_config_keys();

} // namespace rcbf
