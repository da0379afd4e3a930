#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "swarmwatch/box_icp.hpp"
#include "swarmwatch/gnn/graph.hpp"
#include "swarmwatch/gnn/network.hpp"
#include "swarmwatch/sim/scene.hpp"
#include "swarmwatch/sim/scout.hpp"

namespace swarmwatch::sim {

struct FleetOptions {
  std::size_t agents = 5;
  /// Agents hover uniformly inside [margin, 1 - margin] * scene extent.
  double margin = 0.15;
  /// Per-agent camera heading is uniform in [-max_heading, max_heading], so
  /// neighboring views differ by at most twice that.
  double max_heading = std::numbers::pi / 8;
  double scale_min = 0.8;
  double scale_max = 1.25;
  /// Square camera frame in pixels; the agent sits above the frame center.
  double image_size = 4096.0;
};

struct AssignmentOptions {
  /// Parameter file; only read by run_mission(const MissionConfig&).
  std::string params_path;
  /// Pixel distances are divided by this before entering the network.
  double cost_scale = 1000.0;
  double ghost_cost = gnn::kDefaultGhostCost;
  std::size_t max_candidates = gnn::kDefaultMaxCandidates;
};

struct MissionConfig {
  std::uint64_t seed = 0;
  SceneOptions scene;
  FleetOptions fleet;
  /// Registration views; detection is always perfect there, so only jitter,
  /// shear and false positives apply.
  SyntheticDetector detector;
  ScoutOptions scout;
  IcpOptions registration;
  AssignmentOptions assignment;
};

struct AgentOutcome {
  std::size_t agent = 0;
  Point2 position;
  double heading = 0.0;
  double scale = 1.0;
  std::size_t boxes_seen = 0;
  /// Whale id claimed; empty if the agent chose a ghost goal or assignment did not run.
  std::optional<std::uint32_t> goal;
  /// Normalized cost of the claim under the true labels.
  double cost = 0.0;

  std::size_t box_messages = 0;
  std::size_t box_payload_bytes = 0;
  std::size_t hidden_messages = 0;
  /// 4 * d_h per message.
  std::size_t hidden_payload_bytes = 0;
  std::size_t claim_messages = 0;
  /// Every frame the agent sent, headers included.
  std::size_t frame_bytes = 0;
};

struct MissionReport {
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  /// Canonical JSON of the resolved config.
  std::string config_json;

  bool detection_triggered = false;
  std::size_t scout_frames = 0;
  std::size_t whales = 0;
  bool consensus_ok = false;
  /// Labels handed out by registration equal the ground-truth ids.
  bool labels_correct = false;
  std::optional<std::size_t> failing_pair;
  std::vector<std::size_t> ring;
  std::vector<AgentOutcome> agents;

  bool assignment_ran = false;
  bool distinct_goals = false;
  /// Claimed total cost equals the centralized optimum on the true costs.
  bool optimal = false;
  double achieved_cost = 0.0;
  double optimal_cost = 0.0;
};

/// Scout, register, assign. Throws ScoutTimeout, RegistrationFailed or
/// AssignmentFailed tagged with the phase.
MissionReport run_mission(const MissionConfig& config, const gnn::GnnParams& params);

/// Loads config.assignment.params_path and runs the mission.
MissionReport run_mission(const MissionConfig& config);

}  // namespace swarmwatch::sim
