#pragma once

#include <string>

#include "concap/netsim.hpp"

namespace concap {

// One structured-text format for everything: a bound run only needs the
// "network" object, a simulation needs the full scenario. Parsing failures
// throw ConfigError with a human-readable reason.

NetworkSpec network_from_json_text(const std::string& text);
ScenarioConfig scenario_from_json_text(const std::string& text);

// Serialization is lossless: parse(serialize(x)) == x field for field.
std::string scenario_to_json_text(const ScenarioConfig& config);
std::string report_to_json_text(const ThroughputReport& report);

NetworkSpec load_network(const std::string& path);
ScenarioConfig load_scenario(const std::string& path);

} // namespace concap
