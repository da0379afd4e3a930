#include "swarmwatch/gnn/train.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "swarmwatch/error.hpp"
#include "swarmwatch/random.hpp"

namespace swarmwatch::gnn {

double mean_objective(const GnnParams& params, std::span<const LabeledGraph> graphs,
                      const ObjectiveOptions& options) {
  double total = 0.0;
  for (const auto& g : graphs) {
    const ForwardResult f = gnn_forward(params, g.graph, MessagePrecision::kExact);
    total += training_objective(f.soft, g.label_matrix(), options);
  }
  return total / static_cast<double>(graphs.size());
}

GnnParams objective_gradient(const GnnParams& params, std::span<const LabeledGraph> graphs,
                             const ObjectiveOptions& options, double* value) {
  GnnParams grad = GnnParams::zeros(params.shape);
  const double w = 1.0 / static_cast<double>(graphs.size());
  double total = 0.0;
  for (const auto& g : graphs) {
    total += accumulate_gradient(params, g.graph, g.label_matrix(), options, w, grad);
  }
  if (value != nullptr) *value = total * w;
  return grad;
}

TrainResult train(GnnParams params, std::span<const LabeledGraph> dataset,
                  const TrainOptions& options, const EpochCallback& on_epoch) {
  if (dataset.empty()) throw Error(ErrorCode::kInvalidArgument, "training set is empty");
  if (options.batch_size == 0 || !(options.learning_rate > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "batch size and learning rate must be positive");
  }

  std::vector<Eigen::MatrixXd> labels;
  labels.reserve(dataset.size());
  for (const auto& g : dataset) labels.push_back(g.label_matrix());

  const std::size_t dim = params.parameter_count();
  std::vector<double> first(dim, 0.0), second(dim, 0.0);
  std::size_t step = 0;
  std::size_t batch_index = 0;

  TrainResult result;
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);

  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    Rng rng = make_stream(options.seed, "shuffle", epoch);
    std::shuffle(order.begin(), order.end(), rng);

    double lr = options.learning_rate;
    if (options.cosine_schedule && options.epochs > 1) {
      const double progress = static_cast<double>(epoch) / static_cast<double>(options.epochs);
      const double floor = options.final_lr_fraction;
      lr *= floor + (1.0 - floor) * 0.5 * (1.0 + std::cos(std::numbers::pi * progress));
    }

    double epoch_total = 0.0;
    for (std::size_t start = 0; start < order.size(); start += options.batch_size, ++batch_index) {
      const std::size_t stop = std::min(order.size(), start + options.batch_size);
      const double w = 1.0 / static_cast<double>(stop - start);
      GnnParams grad = GnnParams::zeros(params.shape);
      double batch_total = 0.0;
      for (std::size_t k = start; k < stop; ++k) {
        const std::size_t idx = order[k];
        batch_total += accumulate_gradient(params, dataset[idx].graph, labels[idx],
                                           options.objective, w, grad);
      }
      if (!std::isfinite(batch_total) || !grad.all_finite()) {
        throw Error(ErrorCode::kNonFiniteLoss, "batch " + std::to_string(batch_index) +
                                                   " (epoch " + std::to_string(epoch) + ")");
      }
      epoch_total += batch_total;

      ++step;
      std::vector<double> theta = params.flatten();
      const std::vector<double> g = grad.flatten();
      if (options.optimizer == Optimizer::kAdam) {
        const double b1 = options.adam_beta1, b2 = options.adam_beta2;
        const double c1 = 1.0 - std::pow(b1, double(step));
        const double c2 = 1.0 - std::pow(b2, double(step));
        for (std::size_t k = 0; k < dim; ++k) {
          first[k] = b1 * first[k] + (1.0 - b1) * g[k];
          second[k] = b2 * second[k] + (1.0 - b2) * g[k] * g[k];
          theta[k] -= lr * (first[k] / c1) / (std::sqrt(second[k] / c2) + options.adam_epsilon);
        }
      } else {
        for (std::size_t k = 0; k < dim; ++k) {
          first[k] = options.momentum * first[k] + g[k];
          theta[k] -= lr * first[k];
        }
      }
      params.assign(theta);
    }
    const double mean = epoch_total / static_cast<double>(dataset.size());
    result.loss_curve.push_back(mean);
    if (on_epoch) on_epoch(epoch, mean);
  }
  result.params = std::move(params);
  return result;
}

}  // namespace swarmwatch::gnn
