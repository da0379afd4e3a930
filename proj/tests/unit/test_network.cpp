#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "swarmwatch/error.hpp"
#include "swarmwatch/gnn/evaluate.hpp"
#include "swarmwatch/gnn/network.hpp"
#include "swarmwatch/gnn/train.hpp"

using namespace swarmwatch;
using namespace swarmwatch::gnn;

namespace {

GnnShape small_shape() {
  GnnShape s;
  s.goal_slots = 4;
  s.state_width = 5;
  s.mlp_width = 6;
  s.rounds = 2;
  return s;
}

// The reference graph padded to the network's slot count.
AgentGoalGraph padded(std::size_t na, std::size_t ng, std::size_t slots, std::uint64_t seed,
                      std::size_t index = 0) {
  return pad_ghost_goals(sample_graph(na, ng, 10, seed, index).graph, slots);
}

}  // namespace

TEST_CASE("reference shape") {
  const GnnShape s;
  CHECK(s.hidden_width() == 32);
  CHECK(s.rounds == 5);
  CHECK(s.goal_slots == 10);
  GnnShape bad;
  bad.rounds = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("tensor table covers every parameter once") {
  auto p = GnnParams::random(GnnShape{}, 1);
  std::size_t total = 0;
  for (const auto& t : p.tensors()) total += t.size();
  CHECK(total == p.parameter_count());
  const auto flat = p.flatten();
  CHECK(flat.size() == total);
  auto q = GnnParams::zeros(GnnShape{});
  q.assign(flat);
  CHECK(q.flatten() == flat);
  CHECK(q.all_finite());
  CHECK_THROWS_AS(q.assign(std::vector<double>(3)), Error);
}

TEST_CASE("zero weights give uniform rows over candidates") {
  const auto p = GnnParams::zeros(GnnShape{});
  const auto g = padded(5, 7, 10, 1);
  const auto r = gnn_forward(p, g);
  for (Eigen::Index i = 0; i < 5; ++i) {
    for (Eigen::Index j = 0; j < 10; ++j) CHECK(r.soft(i, j) == doctest::Approx(0.1).epsilon(1e-15));
  }
}

TEST_CASE("rows are distributions supported on candidates") {
  const auto p = GnnParams::random(GnnShape{}, 2);
  for (std::size_t cap : {3, 6, 10}) {
    const auto g = pad_ghost_goals(sample_graph(5, 10, cap, 5, cap).graph, 10);
    const auto r = gnn_forward(p, g);
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK(r.soft.row(Eigen::Index(i)).sum() == doctest::Approx(1.0).epsilon(1e-12));
      for (std::size_t j = 0; j < 10; ++j) {
        const bool cand = std::find(g.candidates[i].begin(), g.candidates[i].end(), j) !=
                          g.candidates[i].end();
        if (!cand) CHECK(r.soft(Eigen::Index(i), Eigen::Index(j)) == 0.0);
        if (cand) CHECK(r.soft(Eigen::Index(i), Eigen::Index(j)) > 0.0);
      }
    }
  }
}

TEST_CASE("forward is deterministic and traces every transmitted vector") {
  const auto p = GnnParams::random(GnnShape{}, 3);
  const auto g = padded(5, 10, 10, 3);
  const auto a = gnn_forward(p, g), b = gnn_forward(p, g);
  CHECK(a.soft == b.soft);
  REQUIRE(a.hidden_trace.size() == 5);
  for (const auto& round : a.hidden_trace) {
    REQUIRE(round.size() == 5);
    for (const auto& h : round) CHECK(h.size() == 32);
  }
}

TEST_CASE("float32 messages are the exact messages rounded") {
  const auto p = GnnParams::random(GnnShape{}, 4);
  const auto g = padded(5, 10, 10, 4);
  const auto f = gnn_forward(p, g, MessagePrecision::kFloat32);
  const auto e = gnn_forward(p, g, MessagePrecision::kExact);
  for (const auto& round : f.hidden_trace) {
    for (const auto& h : round) {
      for (double v : h) CHECK(double(float(v)) == v);
    }
  }
  CHECK((f.soft - e.soft).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("goal permutation equivariance") {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 20; ++t) {
    const auto p = GnnParams::random(GnnShape{}, 100 + t);
    const auto lg = sample_graph(5, 10, 10, 7, t);
    std::vector<std::size_t> perm(10);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    // Goal j of the permuted instance is goal perm[j] of the original.
    CostMatrix c(5, 10);
    for (std::size_t i = 0; i < 5; ++i) {
      for (std::size_t j = 0; j < 10; ++j) c(i, j) = lg.graph.true_cost(i, perm[j]);
    }
    const auto g2 = build_graph_from_costs(lg.graph.agent_positions, c);
    const auto a = gnn_forward(p, lg.graph, MessagePrecision::kExact).soft;
    const auto b = gnn_forward(p, g2, MessagePrecision::kExact).soft;
    double worst = 0;
    for (Eigen::Index i = 0; i < 5; ++i) {
      for (Eigen::Index j = 0; j < 10; ++j) worst = std::max(worst, std::abs(b(i, j) - a(i, Eigen::Index(perm[j]))));
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("agent nodes reproduce the centralized forward") {
  const auto p = GnnParams::random(GnnShape{}, 8);
  const auto g = padded(6, 8, 10, 8);
  std::vector<AgentNode> nodes;
  for (std::size_t i = 0; i < 6; ++i) nodes.emplace_back(p, local_input(g, i, p.shape));
  for (std::size_t k = 0; k < p.shape.rounds; ++k) {
    std::vector<std::vector<double>> out;
    for (const auto& n : nodes) out.push_back(n.emit());
    for (std::size_t i = 0; i < 6; ++i) nodes[i].absorb(out[g.left[i]], out[g.right[i]]);
  }
  const auto r = gnn_forward(p, g, MessagePrecision::kExact);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(nodes[i].round() == p.shape.rounds);
    CHECK(nodes[i].probabilities() == r.soft.row(Eigen::Index(i)).transpose());
    CHECK(nodes[i].choice() == r.choices()[i]);
  }
}

TEST_CASE("graph must match the slot count") {
  const auto p = GnnParams::random(GnnShape{}, 1);
  CHECK_THROWS_AS(gnn_forward(p, sample_graph(5, 7, 10, 1, 0).graph), Error);
}

TEST_CASE("analytic gradient matches central differences in every tensor") {
  const GnnShape shape = small_shape();
  auto p = GnnParams::random(shape, 3);
  const std::vector<LabeledGraph> data{sample_graph(3, 4, 10, 9, 0)};
  const ObjectiveOptions o;
  auto grad = objective_gradient(p, data, o);
  auto tp = p.tensors();
  auto g = grad.tensors();
  for (std::size_t t = 0; t < tp.size(); ++t) {
    double diff2 = 0, norm2 = 0;
    for (std::size_t k = 0; k < tp[t].size(); ++k) {
      const double saved = tp[t].data[k];
      tp[t].data[k] = saved + 1e-5;
      const double fp = mean_objective(p, data, o);
      tp[t].data[k] = saved - 1e-5;
      const double fm = mean_objective(p, data, o);
      tp[t].data[k] = saved;
      const double fd = (fp - fm) / 2e-5;
      diff2 += (fd - g[t].data[k]) * (fd - g[t].data[k]);
      norm2 += fd * fd + g[t].data[k] * g[t].data[k];
    }
    INFO(tp[t].name);
    CHECK(std::sqrt(diff2) <= 1e-4 * std::sqrt(norm2));
  }
}

TEST_CASE("uniform-choice collision baseline") {
  CHECK(uniform_choice_diversity_pct(2, 2) == doctest::Approx(50.0));
  CHECK(uniform_choice_diversity_pct(3, 3) == doctest::Approx(100.0 * 6.0 / 27.0));
  CHECK(uniform_choice_diversity_pct(5, 10) == doctest::Approx(100.0 * 30240.0 / 100000.0));
  CHECK(uniform_choice_diversity_pct(11, 10) == 0.0);
}
