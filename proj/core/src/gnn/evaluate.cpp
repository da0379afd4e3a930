#include "swarmwatch/gnn/evaluate.hpp"

#include <cmath>
#include <set>
#include <string>

#include "swarmwatch/error.hpp"

namespace swarmwatch::gnn {

TrialOutcome score_choices(const LabeledGraph& labeled, std::span<const std::size_t> choices) {
  const AgentGoalGraph& g = labeled.graph;
  if (choices.size() != g.num_agents()) {
    throw Error(ErrorCode::kShapeMismatch, "one choice per agent expected");
  }
  std::set<std::size_t> real_taken;
  bool collision = false;
  bool all_real = true;
  for (std::size_t c : choices) {
    if (g.is_ghost(c)) {
      all_real = false;
      continue;
    }
    if (!real_taken.insert(c).second) collision = true;
  }
  TrialOutcome out;
  out.diverse = !collision;
  if (all_real && !collision) {
    const double cost = assignment_cost(g.true_cost, choices);
    const double opt = labeled.optimal_cost;
    out.optimal = std::abs(cost - opt) <= 1e-9 * std::max(1.0, std::abs(opt));
  }
  return out;
}

AssignmentScore eval_assignment(const GnnParams& params, std::size_t num_agents,
                                std::size_t num_goals, std::size_t trials, std::uint64_t seed,
                                const EvalOptions& options) {
  if (trials == 0) throw Error(ErrorCode::kInvalidArgument, "trials must be >= 1");
  const std::size_t slots = params.shape.goal_slots;
  if (num_goals > slots) {
    throw Error(ErrorCode::kInvalidArgument, std::to_string(num_goals) +
                                                 " goals exceed the network's " +
                                                 std::to_string(slots) + " slots");
  }
  std::size_t optimal = 0, diverse = 0;
  for (std::size_t k = 0; k < trials; ++k) {
    LabeledGraph lg = sample_graph(num_agents, num_goals, options.max_candidates, seed, k);
    lg.graph = pad_ghost_goals(std::move(lg.graph), slots, options.ghost_cost);
    const auto choices = gnn_forward(params, lg.graph, MessagePrecision::kFloat32).choices();
    const TrialOutcome t = score_choices(lg, choices);
    optimal += t.optimal;
    diverse += t.diverse;
  }
  AssignmentScore s;
  s.num_agents = num_agents;
  s.num_goals = num_goals;
  s.trials = trials;
  s.optimality_pct = 100.0 * double(optimal) / double(trials);
  s.diversity_pct = 100.0 * double(diverse) / double(trials);
  return s;
}

double uniform_choice_diversity_pct(std::size_t num_agents, std::size_t num_goals) {
  double p = 1.0;
  for (std::size_t k = 0; k < num_agents; ++k) {
    p *= static_cast<double>(num_goals >= k ? num_goals - k : 0) / static_cast<double>(num_goals);
  }
  return 100.0 * p;
}

}  // namespace swarmwatch::gnn
