#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "swarmwatch/gnn/graph.hpp"
#include "swarmwatch/gnn/loss.hpp"
#include "swarmwatch/gnn/network.hpp"

namespace swarmwatch::gnn {

enum class Optimizer { kSgd, kAdam };

struct TrainOptions {
  double learning_rate = 3e-3;
  std::size_t epochs = 80;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;
  Optimizer optimizer = Optimizer::kAdam;
  /// Heavy-ball momentum for kSgd; 0 is plain SGD.
  double momentum = 0.0;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  /// Cosine decay from learning_rate down to learning_rate * final_lr_fraction.
  bool cosine_schedule = true;
  double final_lr_fraction = 0.1;
  ObjectiveOptions objective;
};

struct TrainResult {
  GnnParams params;
  /// Mean per-graph training objective of each epoch.
  std::vector<double> loss_curve;
};

using EpochCallback = std::function<void(std::size_t epoch, double mean_loss)>;

/// Minibatch gradient descent on the mean training objective. Throws
/// NonFiniteLoss naming the batch if the objective stops being finite.
TrainResult train(GnnParams params, std::span<const LabeledGraph> dataset,
                  const TrainOptions& options, const EpochCallback& on_epoch = {});

/// Mean objective over graphs through gnn_forward (exact precision).
double mean_objective(const GnnParams& params, std::span<const LabeledGraph> graphs,
                      const ObjectiveOptions& options);

/// Gradient of mean_objective via the backprop tape.
GnnParams objective_gradient(const GnnParams& params, std::span<const LabeledGraph> graphs,
                             const ObjectiveOptions& options, double* value = nullptr);

}  // namespace swarmwatch::gnn
