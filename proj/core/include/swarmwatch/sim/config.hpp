#pragma once

#include <cstdint>
#include <string>

#include "swarmwatch/sim/mission.hpp"

namespace swarmwatch::sim {

/// Parses a YAML mission config; omitted keys keep their defaults. Unknown keys,
/// wrong types and out-of-range values throw Config with the line number.
MissionConfig parse_mission_config(const std::string& text);
/// A relative assignment.params path is resolved against the file's directory.
MissionConfig load_mission_config(const std::string& path);

/// Compact JSON of every resolved field, keys sorted.
std::string canonical_config_json(const MissionConfig& config);

/// FNV-1a of canonical_config_json.
std::uint64_t config_hash(const MissionConfig& config);

}  // namespace swarmwatch::sim
