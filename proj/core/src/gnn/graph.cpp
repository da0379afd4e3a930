#include "swarmwatch/gnn/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "swarmwatch/error.hpp"
#include "swarmwatch/random.hpp"

namespace swarmwatch::gnn {

std::vector<std::size_t> angular_ring(std::span<const Point2> agents) {
  const std::size_t n = agents.size();
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "ring needs at least 2 agents");
  Point2 centroid;
  for (const auto& a : agents) {
    centroid.x += a.x;
    centroid.y += a.y;
  }
  centroid = {centroid.x / double(n), centroid.y / double(n)};

  std::vector<double> angle(n);
  for (std::size_t i = 0; i < n; ++i) {
    angle[i] = std::atan2(agents[i].y - centroid.y, agents[i].x - centroid.x);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return angle[a] < angle[b]; });
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (agents[a] == agents[b]) {
        throw Error(ErrorCode::kDegenerateInput,
                    "agents " + std::to_string(a) + " and " + std::to_string(b) + " coincide");
      }
    }
  }
  return order;
}

AgentGoalGraph build_graph_from_costs(std::span<const Point2> agents, const CostMatrix& cost,
                                      std::size_t max_candidates) {
  if (cost.rows() != agents.size()) {
    throw Error(ErrorCode::kShapeMismatch, "cost rows must match agent count");
  }
  if (max_candidates == 0) throw Error(ErrorCode::kInvalidArgument, "max_candidates must be >= 1");
  AgentGoalGraph g;
  g.agent_positions.assign(agents.begin(), agents.end());
  g.real_goals = cost.cols();
  g.true_cost = cost;
  g.ring = angular_ring(agents);

  const std::size_t n = agents.size();
  g.left.resize(n);
  g.right.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    g.left[g.ring[k]] = g.ring[(k + n - 1) % n];
    g.right[g.ring[k]] = g.ring[(k + 1) % n];
  }

  g.candidates.resize(n);
  g.costs.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> order(cost.cols());
    std::iota(order.begin(), order.end(), 0);
    const std::size_t keep = std::min(max_candidates, order.size());
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return cost(i, a) < cost(i, b); });
    order.resize(keep);
    std::sort(order.begin(), order.end());
    g.candidates[i] = order;
    for (std::size_t goal : order) g.costs[i].push_back(cost(i, goal));
  }
  return g;
}

AgentGoalGraph build_graph(std::span<const Point2> agents, std::span<const Point2> goals,
                           std::size_t max_candidates) {
  CostMatrix cost(agents.size(), goals.size());
  for (std::size_t i = 0; i < agents.size(); ++i) {
    for (std::size_t j = 0; j < goals.size(); ++j) cost(i, j) = distance(agents[i], goals[j]);
  }
  AgentGoalGraph g = build_graph_from_costs(agents, cost, max_candidates);
  g.goal_positions.assign(goals.begin(), goals.end());
  return g;
}

AgentGoalGraph pad_ghost_goals(AgentGoalGraph graph, std::size_t target, double ghost_cost) {
  if (graph.num_goals() > target) {
    throw Error(ErrorCode::kInvalidArgument, std::to_string(graph.num_goals()) +
                                                 " goals exceed padding target " +
                                                 std::to_string(target));
  }
  const std::size_t first = graph.num_goals();
  for (std::size_t i = 0; i < graph.num_agents(); ++i) {
    for (std::size_t goal = first; goal < target; ++goal) {
      graph.candidates[i].push_back(goal);
      graph.costs[i].push_back(ghost_cost);
    }
  }
  graph.ghost_goals += target - first;
  return graph;
}

Eigen::MatrixXd LabeledGraph::label_matrix() const {
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(Eigen::Index(graph.num_agents()),
                                            Eigen::Index(graph.num_goals()));
  for (std::size_t i = 0; i < label.size(); ++i) y(Eigen::Index(i), Eigen::Index(label[i])) = 1.0;
  return y;
}

LabeledGraph label_graph(AgentGoalGraph graph) {
  const LsaResult opt = solve_lsa(graph.true_cost);
  return LabeledGraph{std::move(graph), opt.assignment, opt.total_cost};
}

LabeledGraph sample_graph(std::size_t num_agents, std::size_t num_goals, std::size_t max_candidates,
                          std::uint64_t seed, std::size_t index) {
  if (num_agents < 2 || num_agents > num_goals) {
    throw Error(ErrorCode::kInvalidArgument, "need 2 <= n_a <= n_g");
  }
  Rng rng = make_stream(seed, "dataset", index);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Point2> agents(num_agents), goals(num_goals);
  for (auto& p : agents) p = {unit(rng), unit(rng)};
  for (auto& p : goals) p = {unit(rng), unit(rng)};
  return label_graph(build_graph(agents, goals, max_candidates));
}

std::vector<LabeledGraph> gen_dataset(std::size_t num_agents, std::size_t num_goals,
                                      std::size_t count, std::size_t max_candidates,
                                      std::uint64_t seed) {
  if (count == 0) throw Error(ErrorCode::kInvalidArgument, "dataset count must be >= 1");
  std::vector<LabeledGraph> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    out.push_back(sample_graph(num_agents, num_goals, max_candidates, seed, k));
  }
  return out;
}

}  // namespace swarmwatch::gnn
