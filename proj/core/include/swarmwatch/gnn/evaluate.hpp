#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "swarmwatch/gnn/graph.hpp"
#include "swarmwatch/gnn/network.hpp"

namespace swarmwatch::gnn {

struct TrialOutcome {
  /// Every agent on a distinct real goal and the total cost equals the optimum.
  bool optimal = false;
  /// No two agents on the same real goal.
  bool diverse = false;
};

/// Scores one hard assignment against the graph's Hungarian optimum
/// (relative tolerance 1e-9 on the total cost).
TrialOutcome score_choices(const LabeledGraph& labeled, std::span<const std::size_t> choices);

struct AssignmentScore {
  std::size_t num_agents = 0;
  std::size_t num_goals = 0;
  std::size_t trials = 0;
  double optimality_pct = 0.0;
  double diversity_pct = 0.0;
};

struct EvalOptions {
  double ghost_cost = kDefaultGhostCost;
  std::size_t max_candidates = kDefaultMaxCandidates;
};

/// Fresh random instances with num_goals real goals, padded with ghost goals up
/// to the network's slot count, decided by the float32 forward pass.
AssignmentScore eval_assignment(const GnnParams& params, std::size_t num_agents,
                                std::size_t num_goals, std::size_t trials, std::uint64_t seed,
                                const EvalOptions& options = {});

/// Probability (percent) that num_agents uniform independent choices over
/// num_goals goals are pairwise distinct.
double uniform_choice_diversity_pct(std::size_t num_agents, std::size_t num_goals);

}  // namespace swarmwatch::gnn
