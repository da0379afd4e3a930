#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "swarmwatch/box_icp.hpp"
#include "swarmwatch/gnn/graph.hpp"
#include "swarmwatch/gnn/loss.hpp"
#include "swarmwatch/gnn/train.hpp"
#include "swarmwatch/sim/registration_trial.hpp"

// Each command returns the text it produced; the CLI writes it to --out or stdout.
// CSV outputs start with one "# swarmctl ..." line carrying the schema version,
// config hash and the resolved config as JSON, followed by the header row.

namespace swarmctl {

inline constexpr int kCsvSchemaVersion = 1;

struct GenDatasetArgs {
  std::size_t num_agents = 5;
  std::size_t num_goals = 10;
  std::size_t count = 5000;
  std::size_t max_candidates = swarmwatch::gnn::kDefaultMaxCandidates;
  std::uint64_t seed = 0;
  std::string out;
};

/// Writes the binary dataset to args.out; returns a one-line summary.
std::string cmd_gen_dataset(const GenDatasetArgs& args);

struct TrainArgs {
  std::string dataset;
  std::string out;
  std::uint64_t seed = 0;
  swarmwatch::gnn::TrainOptions options;
};

/// Trains from a dataset file, writes parameters to args.out, returns the loss curve CSV.
std::string cmd_train(const TrainArgs& args);

struct EvalAssignArgs {
  std::string params;
  std::size_t num_agents = 5;
  std::size_t min_goals = 5;
  std::size_t max_goals = 10;
  std::size_t trials = 5000;
  std::uint64_t seed = 0;
  double ghost_cost = swarmwatch::gnn::kDefaultGhostCost;
  std::size_t max_candidates = swarmwatch::gnn::kDefaultMaxCandidates;
};

/// Rows optimality_pct and diversity_pct, one column per goal count.
std::string cmd_eval_assign(const EvalAssignArgs& args);

struct EvalRegistrationArgs {
  std::size_t pairs = 200;
  std::vector<double> jitter_grid{0.0, 0.005, 0.01};
  std::uint64_t seed = 0;
  swarmwatch::sim::PairRegime regime;
  swarmwatch::IcpOptions icp;
  /// Appends a row with relative rotations up to pi.
  bool stress = true;
};

std::string cmd_eval_registration(const EvalRegistrationArgs& args);

struct SimulateArgs {
  std::string config;
  /// Overrides assignment.params when non-empty.
  std::string params;
  /// Overrides the config seed when set.
  bool override_seed = false;
  std::uint64_t seed = 0;
  /// Consecutive seeds starting at the resolved seed.
  std::size_t runs = 1;
  /// "jsonl" or "csv".
  std::string format = "jsonl";
};

std::string cmd_simulate(const SimulateArgs& args);

struct BandwidthArgs {
  std::size_t min_boxes = 0;
  std::size_t max_boxes = 20;
  std::size_t step = 1;
  std::size_t hidden_width = 32;
  double link_bps = 1e6;
};

std::string cmd_bandwidth(const BandwidthArgs& args);

}  // namespace swarmctl
