#include "swarmwatch/gnn/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "swarmwatch/error.hpp"
#include "swarmwatch/random.hpp"

namespace swarmwatch::gnn {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::RowVectorXd;
using Eigen::VectorXd;

void GnnShape::validate() const {
  if (goal_slots == 0 || goal_channels == 0 || state_width == 0 || mlp_width == 0 ||
      rounds == 0) {
    throw Error(ErrorCode::kInvalidArgument, "network dimensions must be positive");
  }
  if (rounds > 255) throw Error(ErrorCode::kInvalidArgument, "at most 255 rounds fit a round byte");
}

namespace {

Dense make_dense(std::size_t out, std::size_t in, bool with_bias = true) {
  return Dense{RowMatrix::Zero(Index(out), Index(in)), VectorXd::Zero(with_bias ? Index(out) : 0)};
}

std::size_t update_input_width(const GnnShape& s) {
  return s.message_channels() + 2 * s.state_width + GnnShape::kFeatureWidth;
}

std::size_t decoder_input_width(const GnnShape& s) {
  return 2 * s.state_width + GnnShape::kFeatureWidth;
}

}  // namespace

GnnParams GnnParams::zeros(const GnnShape& shape) {
  shape.validate();
  GnnParams p;
  p.shape = shape;
  p.encoder = {make_dense(shape.mlp_width, GnnShape::kFeatureWidth),
               make_dense(shape.state_width, shape.mlp_width)};
  p.message = make_dense(shape.message_channels(), 2 * shape.state_width);
  p.update = {make_dense(shape.mlp_width, update_input_width(shape)),
              make_dense(shape.state_width, shape.mlp_width)};
  p.decoder = {make_dense(shape.mlp_width, decoder_input_width(shape)),
               make_dense(1, shape.mlp_width, false)};
  return p;
}

GnnParams GnnParams::random(const GnnShape& shape, std::uint64_t seed) {
  GnnParams p = zeros(shape);
  Rng rng = make_stream(seed, "init");
  auto fill = [&](Dense& d) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(d.weight.cols()));
    std::uniform_real_distribution<double> u(-bound, bound);
    for (Index k = 0; k < d.weight.size(); ++k) d.weight.data()[k] = u(rng);
    for (Index k = 0; k < d.bias.size(); ++k) d.bias(k) = u(rng);
  };
  fill(p.encoder.hidden);
  fill(p.encoder.output);
  fill(p.message);
  fill(p.update.hidden);
  fill(p.update.output);
  fill(p.decoder.hidden);
  fill(p.decoder.output);
  return p;
}

std::vector<TensorView> GnnParams::tensors() {
  std::vector<TensorView> out;
  auto add = [&](const std::string& name, Dense& d) {
    out.push_back({name + ".weight", d.weight.data(), std::size_t(d.weight.rows()),
                   std::size_t(d.weight.cols())});
    if (d.bias.size() > 0) {
      out.push_back({name + ".bias", d.bias.data(), 1, std::size_t(d.bias.size())});
    }
  };
  add("encoder.hidden", encoder.hidden);
  add("encoder.output", encoder.output);
  add("message", message);
  add("update.hidden", update.hidden);
  add("update.output", update.output);
  add("decoder.hidden", decoder.hidden);
  add("decoder.output", decoder.output);
  return out;
}

std::size_t GnnParams::parameter_count() const {
  std::size_t n = 0;
  for (const auto& t : const_cast<GnnParams*>(this)->tensors()) n += t.size();
  return n;
}

std::vector<double> GnnParams::flatten() const {
  std::vector<double> flat;
  flat.reserve(parameter_count());
  for (const auto& t : const_cast<GnnParams*>(this)->tensors()) {
    flat.insert(flat.end(), t.data, t.data + t.size());
  }
  return flat;
}

void GnnParams::assign(std::span<const double> flat) {
  if (flat.size() != parameter_count()) {
    throw Error(ErrorCode::kShapeMismatch, "flat parameter vector has wrong length");
  }
  std::size_t at = 0;
  for (auto& t : tensors()) {
    std::copy(flat.begin() + std::ptrdiff_t(at), flat.begin() + std::ptrdiff_t(at + t.size()),
              t.data);
    at += t.size();
  }
}

bool GnnParams::all_finite() const {
  for (double v : flatten()) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

LocalInput local_input(std::span<const std::size_t> candidates, std::span<const double> costs,
                       const GnnShape& shape) {
  if (candidates.size() != costs.size() || candidates.empty()) {
    throw Error(ErrorCode::kShapeMismatch, "candidate and cost lists must be non-empty and equal");
  }
  LocalInput in;
  in.features = MatrixXd::Zero(Index(shape.goal_slots), Index(GnnShape::kFeatureWidth));
  in.candidate.assign(shape.goal_slots, 0);
  in.num_candidates = candidates.size();

  double lowest = costs[0];
  for (double c : costs) lowest = std::min(lowest, c);
  double normalizer = 0.0;
  for (double c : costs) normalizer += std::exp(-(c - lowest) / kSoftminTemperature);

  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const std::size_t slot = candidates[k];
    if (slot >= shape.goal_slots) {
      throw Error(ErrorCode::kShapeMismatch, "goal " + std::to_string(slot) + " exceeds " +
                                                 std::to_string(shape.goal_slots) + " slots");
    }
    if (in.candidate[slot]) throw Error(ErrorCode::kInvalidArgument, "duplicate candidate goal");
    const double c = costs[k];
    in.candidate[slot] = 1;
    in.features(Index(slot), 0) = c;
    in.features(Index(slot), 1) = c - lowest;
    in.features(Index(slot), 2) = std::exp(-(c - lowest) / kSoftminTemperature) / normalizer;
    in.features(Index(slot), 3) = 1.0;
  }
  return in;
}

LocalInput local_input(const AgentGoalGraph& graph, std::size_t agent, const GnnShape& shape) {
  if (graph.num_goals() != shape.goal_slots) {
    throw Error(ErrorCode::kShapeMismatch,
                "graph has " + std::to_string(graph.num_goals()) + " goals, network expects " +
                    std::to_string(shape.goal_slots) + " (pad with ghost goals)");
  }
  return local_input(graph.candidates.at(agent), graph.costs.at(agent), shape);
}

// ---------------------------------------------------------------------------
// Per-agent kernels. Every operation is row-wise over goal slots except the
// candidate-mean pools.

namespace {

MatrixXd affine(const MatrixXd& x, const Dense& d) {
  MatrixXd y = x * d.weight.transpose();
  if (d.bias.size() > 0) y.rowwise() += d.bias.transpose();
  return y;
}

MatrixXd tanh_of(const MatrixXd& x) { return x.array().tanh().matrix(); }

MatrixXd perceptron(const MatrixXd& x, const Perceptron& p) {
  return affine(tanh_of(affine(x, p.hidden)), p.output);
}

RowVectorXd candidate_mean(const MatrixXd& rows, const std::vector<char>& candidate,
                           std::size_t count) {
  RowVectorXd sum = RowVectorXd::Zero(rows.cols());
  for (Index g = 0; g < rows.rows(); ++g) {
    if (candidate[std::size_t(g)]) sum += rows.row(g);
  }
  return sum / static_cast<double>(count);
}

MatrixXd concat_columns(std::initializer_list<const MatrixXd*> parts) {
  Index cols = 0;
  for (const auto* p : parts) cols += p->cols();
  MatrixXd out(parts.begin()[0]->rows(), cols);
  Index at = 0;
  for (const auto* p : parts) {
    out.middleCols(at, p->cols()) = *p;
    at += p->cols();
  }
  return out;
}

MatrixXd broadcast(const RowVectorXd& row, Index rows) { return row.replicate(rows, 1); }

VectorXd masked_softmax(const VectorXd& score, const std::vector<char>& candidate) {
  double top = -std::numeric_limits<double>::infinity();
  for (Index g = 0; g < score.size(); ++g) {
    if (candidate[std::size_t(g)]) top = std::max(top, score(g));
  }
  VectorXd p = VectorXd::Zero(score.size());
  double total = 0.0;
  for (Index g = 0; g < score.size(); ++g) {
    if (!candidate[std::size_t(g)]) continue;
    p(g) = std::exp(score(g) - top);
    total += p(g);
  }
  return p / total;
}

}  // namespace

AgentNode::AgentNode(const GnnParams& params, LocalInput input)
    : params_(&params), input_(std::move(input)) {
  state_ = tanh_of(perceptron(input_.features, params_->encoder));
}

std::vector<double> AgentNode::emit() const {
  const GnnShape& s = params_->shape;
  const Index slots = Index(s.goal_slots);
  const MatrixXd pooled = broadcast(candidate_mean(state_, input_.candidate, input_.num_candidates), slots);
  const MatrixXd channels = tanh_of(affine(concat_columns({&state_, &pooled}), params_->message));

  std::vector<double> h(s.hidden_width(), 0.0);
  for (Index g = 0; g < slots; ++g) {
    if (!input_.candidate[std::size_t(g)]) continue;
    for (Index c = 0; c < Index(s.goal_channels); ++c) {
      h[std::size_t(g) * s.goal_channels + std::size_t(c)] = channels(g, c);
    }
  }
  const RowVectorXd agent =
      candidate_mean(channels.rightCols(Index(s.agent_channels)), input_.candidate,
                     input_.num_candidates);
  for (Index c = 0; c < Index(s.agent_channels); ++c) {
    h[s.goal_slots * s.goal_channels + std::size_t(c)] = agent(c);
  }
  return h;
}

void AgentNode::absorb(std::span<const double> from_left, std::span<const double> from_right) {
  const GnnShape& s = params_->shape;
  if (from_left.size() != s.hidden_width() || from_right.size() != s.hidden_width()) {
    throw Error(ErrorCode::kShapeMismatch, "neighbor hidden vector has wrong width");
  }
  const Index slots = Index(s.goal_slots);
  MatrixXd goal_sum(slots, Index(s.goal_channels));
  for (Index g = 0; g < slots; ++g) {
    for (Index c = 0; c < Index(s.goal_channels); ++c) {
      const std::size_t k = std::size_t(g) * s.goal_channels + std::size_t(c);
      goal_sum(g, c) = from_left[k] + from_right[k];
    }
  }
  RowVectorXd agent_sum(Index(s.agent_channels));
  for (Index c = 0; c < Index(s.agent_channels); ++c) {
    const std::size_t k = s.goal_slots * s.goal_channels + std::size_t(c);
    agent_sum(c) = from_left[k] + from_right[k];
  }
  const MatrixXd agent_rows = broadcast(agent_sum, slots);
  const MatrixXd pooled = broadcast(candidate_mean(state_, input_.candidate, input_.num_candidates), slots);
  const MatrixXd x = concat_columns({&goal_sum, &agent_rows, &state_, &pooled, &input_.features});
  state_ = tanh_of(perceptron(x, params_->update));
  ++round_;
}

VectorXd AgentNode::probabilities() const {
  const Index slots = Index(params_->shape.goal_slots);
  const MatrixXd pooled = broadcast(candidate_mean(state_, input_.candidate, input_.num_candidates), slots);
  const MatrixXd x = concat_columns({&state_, &pooled, &input_.features});
  const VectorXd score = perceptron(x, params_->decoder).col(0);
  return masked_softmax(score, input_.candidate);
}

std::size_t AgentNode::choice() const {
  const VectorXd p = probabilities();
  Index best = -1;
  for (Index g = 0; g < p.size(); ++g) {
    if (!input_.candidate[std::size_t(g)]) continue;
    if (best < 0 || p(g) > p(best)) best = g;
  }
  return std::size_t(best);
}

std::vector<std::size_t> ForwardResult::choices() const {
  std::vector<std::size_t> out(std::size_t(soft.rows()));
  for (Index i = 0; i < soft.rows(); ++i) {
    Index best = 0;
    for (Index g = 1; g < soft.cols(); ++g) {
      if (soft(i, g) > soft(i, best)) best = g;
    }
    out[std::size_t(i)] = std::size_t(best);
  }
  return out;
}

ForwardResult gnn_forward(const GnnParams& params, const AgentGoalGraph& graph,
                          MessagePrecision precision) {
  const GnnShape& s = params.shape;
  const std::size_t n = graph.num_agents();
  std::vector<AgentNode> nodes;
  nodes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) nodes.emplace_back(params, local_input(graph, i, s));

  ForwardResult out;
  out.hidden_trace.reserve(s.rounds);
  for (std::size_t r = 0; r < s.rounds; ++r) {
    std::vector<std::vector<double>> sent(n);
    for (std::size_t i = 0; i < n; ++i) {
      sent[i] = nodes[i].emit();
      if (precision == MessagePrecision::kFloat32) {
        for (double& v : sent[i]) v = static_cast<double>(static_cast<float>(v));
      }
    }
    for (std::size_t i = 0; i < n; ++i) nodes[i].absorb(sent[graph.left[i]], sent[graph.right[i]]);
    out.hidden_trace.push_back(std::move(sent));
  }

  out.soft.resize(Index(n), Index(s.goal_slots));
  for (std::size_t i = 0; i < n; ++i) out.soft.row(Index(i)) = nodes[i].probabilities().transpose();
  return out;
}

// ---------------------------------------------------------------------------
// Batched tape: all agents' slot rows stacked (agent-major) so each layer is a
// single product; used only for training.

namespace {

struct Tape {
  std::size_t agents = 0;
  Index slots = 0;
  std::vector<char> candidate;        // agents * slots
  std::vector<std::size_t> counts;    // candidates per agent
  MatrixXd features;                  // rows x F
  MatrixXd enc_hidden;                // tanh activations
  std::vector<MatrixXd> state;        // rounds + 1
  std::vector<MatrixXd> pooled;       // rounds + 1, broadcast rows
  std::vector<MatrixXd> message_in;   // rounds
  std::vector<MatrixXd> channels;     // rounds
  std::vector<MatrixXd> update_in;    // rounds
  std::vector<MatrixXd> update_hidden;
  MatrixXd decoder_in;
  MatrixXd decoder_hidden;
  MatrixXd soft;                      // agents x slots
};

MatrixXd block_pool(const Tape& t, const MatrixXd& rows) {
  MatrixXd out(rows.rows(), rows.cols());
  for (std::size_t i = 0; i < t.agents; ++i) {
    RowVectorXd sum = RowVectorXd::Zero(rows.cols());
    for (Index g = 0; g < t.slots; ++g) {
      const Index r = Index(i) * t.slots + g;
      if (t.candidate[std::size_t(r)]) sum += rows.row(r);
    }
    sum /= static_cast<double>(t.counts[i]);
    out.middleRows(Index(i) * t.slots, t.slots) = sum.replicate(t.slots, 1);
  }
  return out;
}

// Adjoint of block_pool: every row of the broadcast feeds back equally into the
// candidate rows it averaged.
void block_pool_adjoint(const Tape& t, const MatrixXd& d_pooled, MatrixXd& d_rows) {
  for (std::size_t i = 0; i < t.agents; ++i) {
    const RowVectorXd total = d_pooled.middleRows(Index(i) * t.slots, t.slots).colwise().sum() /
                              static_cast<double>(t.counts[i]);
    for (Index g = 0; g < t.slots; ++g) {
      const Index r = Index(i) * t.slots + g;
      if (t.candidate[std::size_t(r)]) d_rows.row(r) += total;
    }
  }
}

void dense_backward(const MatrixXd& input, const MatrixXd& d_out, double weight, Dense& grad) {
  grad.weight.noalias() += weight * (d_out.transpose() * input);
  if (grad.bias.size() > 0) grad.bias += weight * d_out.colwise().sum().transpose();
}

MatrixXd tanh_backward(const MatrixXd& activation, const MatrixXd& d_activation) {
  return (d_activation.array() * (1.0 - activation.array().square())).matrix();
}

}  // namespace

double accumulate_gradient(const GnnParams& params, const AgentGoalGraph& graph,
                           const MatrixXd& labels, const ObjectiveOptions& options, double weight,
                           GnnParams& grad) {
  const GnnShape& s = params.shape;
  Tape t;
  t.agents = graph.num_agents();
  t.slots = Index(s.goal_slots);
  const Index rows = Index(t.agents) * t.slots;
  const Index gc = Index(s.goal_channels), ac = Index(s.agent_channels);
  const Index width = Index(s.state_width);

  t.features.resize(rows, Index(GnnShape::kFeatureWidth));
  t.candidate.resize(std::size_t(rows));
  t.counts.resize(t.agents);
  for (std::size_t i = 0; i < t.agents; ++i) {
    LocalInput in = local_input(graph, i, s);
    t.features.middleRows(Index(i) * t.slots, t.slots) = in.features;
    std::copy(in.candidate.begin(), in.candidate.end(),
              t.candidate.begin() + std::ptrdiff_t(i * s.goal_slots));
    t.counts[i] = in.num_candidates;
  }

  // Forward.
  t.enc_hidden = tanh_of(affine(t.features, params.encoder.hidden));
  t.state.push_back(tanh_of(affine(t.enc_hidden, params.encoder.output)));
  for (std::size_t r = 0; r < s.rounds; ++r) {
    const MatrixXd& state = t.state.back();
    t.pooled.push_back(block_pool(t, state));
    t.message_in.push_back(concat_columns({&state, &t.pooled.back()}));
    t.channels.push_back(tanh_of(affine(t.message_in.back(), params.message)));
    const MatrixXd& ch = t.channels.back();

    MatrixXd goal_part = ch.leftCols(gc);
    for (Index r2 = 0; r2 < rows; ++r2) {
      if (!t.candidate[std::size_t(r2)]) goal_part.row(r2).setZero();
    }
    const MatrixXd agent_part = block_pool(t, ch.rightCols(ac));

    MatrixXd goal_sum(rows, gc), agent_sum(rows, ac);
    for (std::size_t i = 0; i < t.agents; ++i) {
      const Index l = Index(graph.left[i]) * t.slots, rr = Index(graph.right[i]) * t.slots;
      goal_sum.middleRows(Index(i) * t.slots, t.slots) =
          goal_part.middleRows(l, t.slots) + goal_part.middleRows(rr, t.slots);
      agent_sum.middleRows(Index(i) * t.slots, t.slots) =
          agent_part.middleRows(l, t.slots) + agent_part.middleRows(rr, t.slots);
    }
    t.update_in.push_back(
        concat_columns({&goal_sum, &agent_sum, &state, &t.pooled.back(), &t.features}));
    t.update_hidden.push_back(tanh_of(affine(t.update_in.back(), params.update.hidden)));
    t.state.push_back(tanh_of(affine(t.update_hidden.back(), params.update.output)));
  }
  t.pooled.push_back(block_pool(t, t.state.back()));
  t.decoder_in = concat_columns({&t.state.back(), &t.pooled.back(), &t.features});
  t.decoder_hidden = tanh_of(affine(t.decoder_in, params.decoder.hidden));
  const MatrixXd score = affine(t.decoder_hidden, params.decoder.output);
  t.soft.resize(Index(t.agents), t.slots);
  for (std::size_t i = 0; i < t.agents; ++i) {
    const VectorXd sc = score.col(0).segment(Index(i) * t.slots, t.slots);
    const std::vector<char> mask(t.candidate.begin() + std::ptrdiff_t(i * s.goal_slots),
                                 t.candidate.begin() + std::ptrdiff_t((i + 1) * s.goal_slots));
    t.soft.row(Index(i)) = masked_softmax(sc, mask).transpose();
  }

  MatrixXd d_soft;
  const double value = training_objective(t.soft, labels, options, &d_soft);
  if (!std::isfinite(value)) return value;

  // Backward.
  MatrixXd d_score(rows, 1);
  for (std::size_t i = 0; i < t.agents; ++i) {
    const RowVectorXd a = t.soft.row(Index(i));
    const RowVectorXd da = d_soft.row(Index(i));
    const double inner = a.dot(da);
    for (Index g = 0; g < t.slots; ++g) {
      d_score(Index(i) * t.slots + g, 0) = a(g) * (da(g) - inner);
    }
  }
  dense_backward(t.decoder_hidden, d_score, weight, grad.decoder.output);
  MatrixXd d_pre = tanh_backward(t.decoder_hidden, d_score * params.decoder.output.weight);
  dense_backward(t.decoder_in, d_pre, weight, grad.decoder.hidden);
  MatrixXd d_in = d_pre * params.decoder.hidden.weight;
  MatrixXd d_state = d_in.leftCols(width);
  block_pool_adjoint(t, d_in.middleCols(width, width), d_state);

  for (std::size_t r = s.rounds; r-- > 0;) {
    const MatrixXd d_pre_out = tanh_backward(t.state[r + 1], d_state);
    dense_backward(t.update_hidden[r], d_pre_out, weight, grad.update.output);
    const MatrixXd d_pre_hidden =
        tanh_backward(t.update_hidden[r], d_pre_out * params.update.output.weight);
    dense_backward(t.update_in[r], d_pre_hidden, weight, grad.update.hidden);
    const MatrixXd d_update_in = d_pre_hidden * params.update.hidden.weight;

    MatrixXd d_prev = d_update_in.middleCols(gc + ac, width);
    MatrixXd d_pooled = d_update_in.middleCols(gc + ac + width, width);

    // Route neighbor sums back to the senders' channels.
    MatrixXd d_goal = MatrixXd::Zero(rows, gc);
    MatrixXd d_agent = MatrixXd::Zero(rows, ac);
    for (std::size_t i = 0; i < t.agents; ++i) {
      const Index self = Index(i) * t.slots;
      const auto dg = d_update_in.block(self, 0, t.slots, gc);
      const auto da = d_update_in.block(self, gc, t.slots, ac);
      for (std::size_t nb : {graph.left[i], graph.right[i]}) {
        d_goal.middleRows(Index(nb) * t.slots, t.slots) += dg;
        d_agent.middleRows(Index(nb) * t.slots, t.slots) += da;
      }
    }
    MatrixXd d_channels = MatrixXd::Zero(rows, gc + ac);
    for (Index r2 = 0; r2 < rows; ++r2) {
      if (t.candidate[std::size_t(r2)]) d_channels.row(r2).leftCols(gc) = d_goal.row(r2);
    }
    MatrixXd d_agent_rows = MatrixXd::Zero(rows, ac);
    block_pool_adjoint(t, d_agent, d_agent_rows);
    d_channels.rightCols(ac) = d_agent_rows;

    const MatrixXd d_pre_msg = tanh_backward(t.channels[r], d_channels);
    dense_backward(t.message_in[r], d_pre_msg, weight, grad.message);
    const MatrixXd d_msg_in = d_pre_msg * params.message.weight;
    d_prev += d_msg_in.leftCols(width);
    d_pooled += d_msg_in.rightCols(width);
    block_pool_adjoint(t, d_pooled, d_prev);
    d_state = std::move(d_prev);
  }

  const MatrixXd d_pre_enc_out = tanh_backward(t.state[0], d_state);
  dense_backward(t.enc_hidden, d_pre_enc_out, weight, grad.encoder.output);
  const MatrixXd d_pre_enc_hidden =
      tanh_backward(t.enc_hidden, d_pre_enc_out * params.encoder.output.weight);
  dense_backward(t.features, d_pre_enc_hidden, weight, grad.encoder.hidden);
  return value;
}

}  // namespace swarmwatch::gnn
