#include "swarmwatch/sim/report.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace swarmwatch::sim {

std::string hash_hex(std::uint64_t hash) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::string report_json(const MissionReport& r) {
  using nlohmann::json;
  json agents = json::array();
  for (const auto& a : r.agents) {
    agents.push_back({
        {"agent", a.agent},
        {"position", {a.position.x, a.position.y}},
        {"heading", a.heading},
        {"scale", a.scale},
        {"boxes_seen", a.boxes_seen},
        {"goal", a.goal ? json(*a.goal) : json(nullptr)},
        {"cost", a.cost},
        {"box_messages", a.box_messages},
        {"box_payload_bytes", a.box_payload_bytes},
        {"hidden_messages", a.hidden_messages},
        {"hidden_payload_bytes", a.hidden_payload_bytes},
        {"claim_messages", a.claim_messages},
        {"frame_bytes", a.frame_bytes},
    });
  }
  json j = {
      {"schema_version", kReportSchemaVersion},
      {"kind", "mission_report"},
      {"seed", r.seed},
      {"config_hash", hash_hex(r.config_hash)},
      {"config", json::parse(r.config_json)},
      {"detection_triggered", r.detection_triggered},
      {"scout_frames", r.scout_frames},
      {"whales", r.whales},
      {"consensus_ok", r.consensus_ok},
      {"labels_correct", r.labels_correct},
      {"failing_pair", r.failing_pair ? json(*r.failing_pair) : json(nullptr)},
      {"ring", r.ring},
      {"agents", agents},
      {"assignment_ran", r.assignment_ran},
      {"distinct_goals", r.distinct_goals},
      {"optimal", r.optimal},
      {"achieved_cost", r.achieved_cost},
      {"optimal_cost", r.optimal_cost},
  };
  return j.dump();
}

std::string report_csv_header() {
  return "schema_version,config_hash,seed,agent,ring_position,x,y,heading,scale,boxes_seen,goal,"
         "cost,box_messages,box_payload_bytes,hidden_messages,hidden_payload_bytes,"
         "claim_messages,frame_bytes,consensus_ok,distinct_goals,optimal";
}

std::string report_csv_rows(const MissionReport& r) {
  std::ostringstream out;
  out.precision(17);
  for (const auto& a : r.agents) {
    std::size_t ring_pos = 0;
    for (std::size_t k = 0; k < r.ring.size(); ++k) {
      if (r.ring[k] == a.agent) ring_pos = k;
    }
    out << kReportSchemaVersion << ',' << hash_hex(r.config_hash) << ',' << r.seed << ','
        << a.agent << ',' << ring_pos << ',' << a.position.x << ',' << a.position.y << ','
        << a.heading << ',' << a.scale << ',' << a.boxes_seen << ',';
    if (a.goal) out << *a.goal;
    out << ',' << a.cost << ',' << a.box_messages << ',' << a.box_payload_bytes << ','
        << a.hidden_messages << ',' << a.hidden_payload_bytes << ',' << a.claim_messages << ','
        << a.frame_bytes << ',' << int(r.consensus_ok) << ',' << int(r.distinct_goals) << ','
        << int(r.optimal) << '\n';
  }
  return out.str();
}

}  // namespace swarmwatch::sim
