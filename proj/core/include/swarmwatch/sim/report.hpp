#pragma once

#include <cstdint>
#include <string>

#include "swarmwatch/sim/mission.hpp"

namespace swarmwatch::sim {

inline constexpr int kReportSchemaVersion = 1;

/// 16 lowercase hex digits.
std::string hash_hex(std::uint64_t hash);

/// One JSON object on a single line (no trailing newline), keys sorted.
std::string report_json(const MissionReport& report);

/// CSV with one row per agent; the header is part of the versioned schema.
std::string report_csv_header();
std::string report_csv_rows(const MissionReport& report);

}  // namespace swarmwatch::sim
