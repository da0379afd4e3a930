#include "swarmwatch/gnn/decentralized.hpp"

#include <deque>
#include <string>

#include "swarmwatch/error.hpp"
#include "swarmwatch/protocol.hpp"

namespace swarmwatch::gnn {

std::vector<AgentLocalView> local_views(const AgentGoalGraph& graph) {
  std::vector<AgentLocalView> views(graph.num_agents());
  for (std::size_t i = 0; i < views.size(); ++i) {
    views[i] = {graph.candidates[i], graph.costs[i], graph.left[i], graph.right[i]};
  }
  return views;
}

namespace {

// Inbound ports of one agent: frames from its left neighbor and from its right
// neighbor arrive on separate FIFOs, so a two-agent ring stays unambiguous.
struct Ports {
  std::deque<wire::Bytes> from_left;
  std::deque<wire::Bytes> from_right;
};

std::vector<double> receive(std::deque<wire::Bytes>& port, std::size_t round, std::size_t width) {
  if (port.empty()) throw Error(ErrorCode::kMalformed, "expected hidden state was not delivered");
  const wire::Message m = wire::parse_frame(port.front());
  port.pop_front();
  const wire::HiddenState h = wire::decode_hidden(m);
  if (h.round != round || h.values.size() != width) {
    throw Error(ErrorCode::kMalformed, "hidden state for round " + std::to_string(h.round) +
                                           " width " + std::to_string(h.values.size()));
  }
  return {h.values.begin(), h.values.end()};
}

}  // namespace

DecentralizedResult decentralized_infer(const GnnParams& params,
                                        std::span<const AgentLocalView> agents) {
  const std::size_t n = agents.size();
  const std::size_t width = params.shape.hidden_width();
  std::vector<AgentNode> nodes;
  nodes.reserve(n);
  for (const auto& a : agents) {
    if (a.left >= n || a.right >= n) throw Error(ErrorCode::kInvalidArgument, "ring link out of range");
    nodes.emplace_back(params, local_input(a.candidates, a.costs, params.shape));
  }
  std::vector<Ports> ports(n);

  DecentralizedResult out;
  for (std::size_t r = 0; r < params.shape.rounds; ++r) {
    std::vector<LinkTraffic> sent(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::vector<double> h = nodes[i].emit();
      const std::vector<float> values(h.begin(), h.end());
      const wire::Bytes frame = wire::serialize(wire::encode_hidden(std::uint8_t(r), values));
      // i is the left neighbor of its right neighbor and vice versa.
      ports[agents[i].right].from_left.push_back(frame);
      ports[agents[i].left].from_right.push_back(frame);
      sent[i].messages += 2;
      sent[i].hidden_bytes += 2 * 4 * width;
      sent[i].frame_bytes += 2 * frame.size();
    }
    for (std::size_t i = 0; i < n; ++i) {
      const auto left = receive(ports[i].from_left, r, width);
      const auto right = receive(ports[i].from_right, r, width);
      nodes[i].absorb(left, right);
    }
    out.traffic.push_back(std::move(sent));
  }
  out.choices.reserve(n);
  for (const auto& node : nodes) out.choices.push_back(node.choice());
  return out;
}

}  // namespace swarmwatch::gnn
