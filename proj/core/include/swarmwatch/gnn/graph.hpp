#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "swarmwatch/geometry.hpp"
#include "swarmwatch/lsa.hpp"

namespace swarmwatch::gnn {

inline constexpr std::size_t kDefaultMaxCandidates = 10;
/// Ten unit-square diameters: larger than any real cost in the unit square.
inline constexpr double kDefaultGhostCost = 10.0 * std::numbers::sqrt2;

/// Agents on a communication ring and the goals each of them can see.
struct AgentGoalGraph {
  std::vector<Point2> agent_positions;
  /// Positions of the real goals; may be empty when costs come from elsewhere.
  std::vector<Point2> goal_positions;
  std::size_t real_goals = 0;
  std::size_t ghost_goals = 0;
  /// Agents in cyclic ring order.
  std::vector<std::size_t> ring;
  /// Ring predecessor / successor of each agent.
  std::vector<std::size_t> left;
  std::vector<std::size_t> right;
  /// Visible goals per agent, ascending goal index. Ghost goals follow real ones.
  std::vector<std::vector<std::size_t>> candidates;
  /// Cost to each candidate, parallel to candidates.
  std::vector<std::vector<double>> costs;
  /// Full agent x real-goal cost matrix (used for labels and scoring).
  CostMatrix true_cost;

  std::size_t num_agents() const noexcept { return agent_positions.size(); }
  std::size_t num_goals() const noexcept { return real_goals + ghost_goals; }
  bool is_ghost(std::size_t goal) const noexcept { return goal >= real_goals; }
};

/// Orders agents by angle about their centroid (ties by index). Throws
/// DegenerateInput if two agents coincide.
std::vector<std::size_t> angular_ring(std::span<const Point2> agents);

/// Unit-square graph with Euclidean costs and the max_candidates nearest goals per agent.
AgentGoalGraph build_graph(std::span<const Point2> agents, std::span<const Point2> goals,
                           std::size_t max_candidates = kDefaultMaxCandidates);

/// Same construction from an explicit agent x goal cost matrix.
AgentGoalGraph build_graph_from_costs(std::span<const Point2> agents, const CostMatrix& cost,
                                      std::size_t max_candidates = kDefaultMaxCandidates);

/// Appends target - num_goals() ghost goals of ghost_cost to every agent's candidates.
AgentGoalGraph pad_ghost_goals(AgentGoalGraph graph, std::size_t target,
                               double ghost_cost = kDefaultGhostCost);

struct LabeledGraph {
  AgentGoalGraph graph;
  /// Optimal real goal per agent.
  Assignment label;
  double optimal_cost = 0.0;

  /// One-hot n_a x num_goals() label matrix.
  Eigen::MatrixXd label_matrix() const;
};

LabeledGraph label_graph(AgentGoalGraph graph);

/// Graph `index` of a dataset drawn from `seed`; gen_dataset(...)[k] == sample_graph(..., k).
LabeledGraph sample_graph(std::size_t num_agents, std::size_t num_goals, std::size_t max_candidates,
                          std::uint64_t seed, std::size_t index);

/// Agents and goals i.i.d. uniform on the unit square, labeled by the Hungarian
/// optimum of the full Euclidean cost matrix.
std::vector<LabeledGraph> gen_dataset(std::size_t num_agents, std::size_t num_goals,
                                      std::size_t count, std::size_t max_candidates,
                                      std::uint64_t seed);

}  // namespace swarmwatch::gnn
