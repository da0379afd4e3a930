#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "swarmwatch/gnn/graph.hpp"
#include "swarmwatch/gnn/loss.hpp"

namespace swarmwatch::gnn {

/// Softmin temperature of the per-goal preference feature.
inline constexpr double kSoftminTemperature = 0.1;

/// Network dimensions. Each agent keeps a private state of `state_width` values
/// per goal slot; the transmitted hidden vector holds `goal_channels` values per
/// goal slot followed by `agent_channels` pooled values.
struct GnnShape {
  std::size_t goal_slots = 10;
  std::size_t goal_channels = 3;
  std::size_t agent_channels = 2;
  std::size_t state_width = 16;
  std::size_t mlp_width = 32;
  std::size_t rounds = 5;

  /// cost, cost above the agent's cheapest candidate, softmin weight, candidate flag.
  static constexpr std::size_t kFeatureWidth = 4;

  /// d_h: floats per hidden-state message. 32 for the reference shape.
  std::size_t hidden_width() const noexcept { return goal_slots * goal_channels + agent_channels; }
  std::size_t message_channels() const noexcept { return goal_channels + agent_channels; }

  void validate() const;

  friend bool operator==(const GnnShape&, const GnnShape&) = default;
};

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Row-wise affine map y = x W^T + b.
struct Dense {
  RowMatrix weight;        // out x in
  Eigen::VectorXd bias;    // out, or empty for no bias
};

/// One tanh hidden layer followed by a linear output layer.
struct Perceptron {
  Dense hidden;
  Dense output;
};

/// View of one parameter tensor; weights are row-major, biases are a single row.
struct TensorView {
  std::string name;
  double* data;
  std::size_t rows;
  std::size_t cols;

  std::size_t size() const noexcept { return rows * cols; }
};

struct GnnParams {
  GnnShape shape;
  Perceptron encoder;  // features -> state
  Dense message;       // [state, pooled state] -> message channels
  Perceptron update;   // [neighbor goal sum, neighbor agent sum, state, pooled, features] -> state
  Perceptron decoder;  // [state, pooled, features] -> score; no output bias (softmax is shift invariant)

  static GnnParams zeros(const GnnShape& shape);
  /// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) for every weight and bias.
  static GnnParams random(const GnnShape& shape, std::uint64_t seed);

  /// Parameter tensors in declaration order (weight then bias per layer); this
  /// is also the serialization order.
  std::vector<TensorView> tensors();
  std::size_t parameter_count() const;

  std::vector<double> flatten() const;
  void assign(std::span<const double> flat);
  bool all_finite() const;
};

/// One agent's inputs laid out over the network's goal slots.
struct LocalInput {
  Eigen::MatrixXd features;     // goal_slots x kFeatureWidth
  std::vector<char> candidate;  // goal_slots
  std::size_t num_candidates = 0;
};

/// Throws ShapeMismatch unless the graph's goal count equals the slot count.
LocalInput local_input(const AgentGoalGraph& graph, std::size_t agent, const GnnShape& shape);

/// Builds the local input from an agent's own candidate goal indices and costs.
LocalInput local_input(std::span<const std::size_t> candidates, std::span<const double> costs,
                       const GnnShape& shape);

/// The per-agent half of the network: everything one drone computes. Both the
/// centralized forward pass and the decentralized runtime drive these.
class AgentNode {
 public:
  AgentNode(const GnnParams& params, LocalInput input);

  /// Hidden vector to send to both ring neighbors this round (d_h values).
  std::vector<double> emit() const;
  /// Consumes the two neighbors' hidden vectors and advances one round.
  void absorb(std::span<const double> from_left, std::span<const double> from_right);

  std::size_t round() const noexcept { return round_; }
  /// Soft assignment over goal slots; zero outside candidates.
  Eigen::VectorXd probabilities() const;
  /// Argmax of probabilities(), lowest slot on ties.
  std::size_t choice() const;

 private:
  const GnnParams* params_;
  LocalInput input_;
  Eigen::MatrixXd state_;
  std::size_t round_ = 0;
};

enum class MessagePrecision {
  /// Hidden vectors travel as doubles (training, gradient checks).
  kExact,
  /// Hidden vectors are rounded to binary32, as on the wire.
  kFloat32,
};

struct ForwardResult {
  /// n_a x goal_slots soft assignment.
  Eigen::MatrixXd soft;
  /// hidden_trace[round][agent]: the vector each agent transmitted.
  std::vector<std::vector<std::vector<double>>> hidden_trace;

  std::vector<std::size_t> choices() const;
};

ForwardResult gnn_forward(const GnnParams& params, const AgentGoalGraph& graph,
                          MessagePrecision precision = MessagePrecision::kFloat32);

/// Training objective of one graph (exact precision), adding weight * gradient
/// into `grad`. Uses a batched tape independent of AgentNode.
double accumulate_gradient(const GnnParams& params, const AgentGoalGraph& graph,
                           const Eigen::MatrixXd& labels, const ObjectiveOptions& options,
                           double weight, GnnParams& grad);

}  // namespace swarmwatch::gnn
