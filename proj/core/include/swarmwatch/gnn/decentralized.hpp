#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "swarmwatch/gnn/graph.hpp"
#include "swarmwatch/gnn/network.hpp"

namespace swarmwatch::gnn {

/// Everything one agent knows before assignment starts.
struct AgentLocalView {
  std::vector<std::size_t> candidates;
  std::vector<double> costs;
  std::size_t left = 0;
  std::size_t right = 0;
};

std::vector<AgentLocalView> local_views(const AgentGoalGraph& graph);

struct LinkTraffic {
  std::size_t messages = 0;
  /// Hidden-state payload bodies (4 * d_h per message, round byte excluded).
  std::size_t hidden_bytes = 0;
  /// Full frames including headers.
  std::size_t frame_bytes = 0;
};

struct DecentralizedResult {
  std::vector<std::size_t> choices;
  /// traffic[round][agent]: what the agent sent during that round.
  std::vector<std::vector<LinkTraffic>> traffic;
};

/// Runs each agent as an isolated node; hidden vectors cross ring links only as
/// serialized HiddenState frames through per-port FIFO queues. The result equals
/// gnn_forward(..., kFloat32).choices() bit for bit.
DecentralizedResult decentralized_infer(const GnnParams& params,
                                        std::span<const AgentLocalView> agents);

}  // namespace swarmwatch::gnn
