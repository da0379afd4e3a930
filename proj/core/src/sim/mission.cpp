#include "swarmwatch/sim/mission.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>

#include "swarmwatch/error.hpp"
#include "swarmwatch/gnn/decentralized.hpp"
#include "swarmwatch/gnn/io.hpp"
#include "swarmwatch/protocol.hpp"
#include "swarmwatch/random.hpp"
#include "swarmwatch/sim/config.hpp"

namespace swarmwatch::sim {

namespace {

struct Pose {
  Point2 position;
  double heading;
  double scale;
  SimilarityTransform transform;  // world -> image
};

std::vector<Pose> sample_fleet(const MissionConfig& c) {
  const FleetOptions& f = c.fleet;
  if (f.agents < 2) throw Error(ErrorCode::kInvalidArgument, "a ring needs at least 2 agents");
  if (!(f.scale_min > 0) || f.scale_max < f.scale_min || !(f.image_size > 0) ||
      !(f.margin >= 0 && f.margin < 0.5) || !(f.max_heading >= 0)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid fleet options");
  }
  Rng rng = make_stream(c.seed, "fleet");
  std::uniform_real_distribution<double> where(f.margin * c.scene.extent,
                                               (1 - f.margin) * c.scene.extent);
  std::uniform_real_distribution<double> heading(-f.max_heading, f.max_heading);
  std::uniform_real_distribution<double> scale(f.scale_min, f.scale_max);
  const double mid = f.image_size / 2;
  std::vector<Pose> poses;
  for (std::size_t k = 0; k < f.agents; ++k) {
    Pose p;
    p.position = {where(rng), where(rng)};
    p.heading = heading(rng);
    p.scale = scale(rng);
    const Point2 moved = SimilarityTransform(p.heading, 0, 0, p.scale).apply(p.position);
    p.transform = SimilarityTransform(p.heading, mid - moved.x, mid - moved.y, p.scale);
    poses.push_back(p);
  }
  return poses;
}

[[noreturn]] void fail(ErrorCode code, const char* phase, const std::string& what) {
  throw Error(code, std::string(phase) + ": " + what);
}

}  // namespace

MissionReport run_mission(const MissionConfig& config, const gnn::GnnParams& params) {
  MissionReport report;
  report.seed = config.seed;
  report.config_json = canonical_config_json(config);
  report.config_hash = config_hash(config);

  const Scene scene = generate_scene(config.scene, config.seed);
  report.whales = scene.whales.size();

  const ScoutResult scout = run_scout(scene, config.scout, config.seed);
  report.scout_frames = scout.frames;
  report.detection_triggered = scout.triggered;
  if (!scout.triggered) {
    fail(ErrorCode::kScoutTimeout, "scout",
         "no detection trigger after " + std::to_string(scout.frames) + " frames");
  }

  const std::vector<Pose> poses = sample_fleet(config);
  const std::size_t n = poses.size();
  std::vector<Point2> positions;
  for (const auto& p : poses) positions.push_back(p.position);
  report.ring = gnn::angular_ring(positions);

  SyntheticDetector detector = config.detector;
  detector.s_det = 1.0;
  const double extent = config.fleet.image_size;

  report.agents.resize(n);
  std::vector<BoxSet> received(n);  // views in ring order, as decoded off the wire
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t a = report.ring[r];
    const AgentView view = render_view(scene, poses[a].transform, detector, config.seed, a);
    AgentOutcome& out = report.agents[a];
    out.agent = a;
    out.position = poses[a].position;
    out.heading = poses[a].heading;
    out.scale = poses[a].scale;
    out.boxes_seen = view.observed.size();
    try {
      const wire::Bytes frame = wire::serialize(wire::encode_boxes(view.observed, extent));
      received[r] = wire::decode_boxes(wire::parse_frame(frame), extent);
      out.box_messages = 1;
      out.box_payload_bytes = frame.size() - wire::kFrameHeaderBytes;
      out.frame_bytes += frame.size();
    } catch (const Error& e) {
      fail(ErrorCode::kRegistrationFailed, "registration", "agent " + std::to_string(a) + ": " + e.what());
    }
  }

  RingRegistration reg;
  try {
    reg = ring_register(received, config.registration);
  } catch (const Error& e) {
    fail(ErrorCode::kRegistrationFailed, "registration", e.what());
  }
  report.consensus_ok = reg.consensus_ok;
  report.failing_pair = reg.failing_pair;
  report.labels_correct = true;
  for (std::size_t r = 0; r < n; ++r) {
    if (reg.labels[r] != received[r].ids()) report.labels_correct = false;
  }
  if (!reg.consensus_ok) return report;

  // Goals are the labels of the first ring view, in ascending label order.
  std::vector<std::uint32_t> goal_ids = received[0].ids();
  std::sort(goal_ids.begin(), goal_ids.end());
  std::map<std::uint32_t, std::size_t> goal_of;
  for (std::size_t g = 0; g < goal_ids.size(); ++g) goal_of[goal_ids[g]] = g;
  const std::size_t n_goals = goal_ids.size();
  const std::size_t slots = params.shape.goal_slots;
  if (n_goals < n) {
    fail(ErrorCode::kAssignmentFailed, "assignment",
         std::to_string(n_goals) + " goals for " + std::to_string(n) + " agents");
  }
  if (n_goals > slots) {
    fail(ErrorCode::kAssignmentFailed, "assignment",
         std::to_string(n_goals) + " goals exceed the network's " + std::to_string(slots) + " slots");
  }

  const Point2 frame_center{extent / 2, extent / 2};
  const double scale = config.assignment.cost_scale;
  CostMatrix cost(n, n_goals, 0.0);       // as each agent sees it
  CostMatrix true_cost(n, n_goals, 0.0);  // from the ground truth
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t a = report.ring[r];
    const auto& boxes = received[r].boxes();
    for (std::size_t b = 0; b < boxes.size(); ++b) {
      const auto it = goal_of.find(reg.labels[r][b]);
      if (it == goal_of.end()) continue;
      cost(a, it->second) = distance(frame_center, boxes[b].center()) / scale;
    }
    for (std::size_t g = 0; g < n_goals; ++g) {
      const std::uint32_t id = goal_ids[g];
      const double d = id < scene.whales.size()
                           ? distance(frame_center, poses[a].transform.apply(scene.whales[id].center()))
                           : config.assignment.ghost_cost * scale;
      true_cost(a, g) = d / scale;
    }
  }

  gnn::DecentralizedResult result;
  try {
    gnn::AgentGoalGraph graph =
        gnn::build_graph_from_costs(positions, cost, config.assignment.max_candidates);
    graph = gnn::pad_ghost_goals(std::move(graph), slots, config.assignment.ghost_cost);
    const auto views = gnn::local_views(graph);
    result = gnn::decentralized_infer(params, views);
  } catch (const Error& e) {
    fail(ErrorCode::kAssignmentFailed, "assignment", e.what());
  }
  report.assignment_ran = true;

  for (std::size_t a = 0; a < n; ++a) {
    AgentOutcome& out = report.agents[a];
    for (const auto& round : result.traffic) {
      out.hidden_messages += round[a].messages;
      out.hidden_payload_bytes += round[a].hidden_bytes;
      out.frame_bytes += round[a].frame_bytes;
    }
  }

  std::set<std::size_t> taken;
  bool all_real = true;
  report.distinct_goals = true;
  Assignment chosen(n);
  for (std::size_t a = 0; a < n; ++a) {
    AgentOutcome& out = report.agents[a];
    const std::size_t g = result.choices[a];
    chosen[a] = g;
    const wire::Bytes claim = wire::serialize(wire::encode_goal_claim(
        {static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(g)}));
    out.claim_messages = 2;
    out.frame_bytes += 2 * claim.size();
    if (g >= n_goals) {
      all_real = false;
      continue;
    }
    out.goal = goal_ids[g];
    out.cost = true_cost(a, g);
    report.achieved_cost += out.cost;
    if (!taken.insert(g).second) report.distinct_goals = false;
  }
  report.optimal_cost = solve_lsa(true_cost).total_cost;
  report.optimal = all_real && report.distinct_goals &&
                   std::abs(report.achieved_cost - report.optimal_cost) <=
                       1e-9 * std::max(1.0, report.optimal_cost);
  return report;
}

MissionReport run_mission(const MissionConfig& config) {
  gnn::GnnParams params;
  try {
    params = gnn::load_params(config.assignment.params_path);
  } catch (const Error& e) {
    fail(ErrorCode::kAssignmentFailed, "assignment", e.what());
  }
  return run_mission(config, params);
}

}  // namespace swarmwatch::sim
