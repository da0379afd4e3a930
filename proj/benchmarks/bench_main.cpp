#include <random>

#include <benchmark/benchmark.h>

#include "swarmwatch/box_icp.hpp"
#include "swarmwatch/gnn/decentralized.hpp"
#include "swarmwatch/gnn/network.hpp"
#include "swarmwatch/gnn/train.hpp"
#include "swarmwatch/lsa.hpp"
#include "swarmwatch/sim/registration_trial.hpp"
#include "swarmwatch/sim/scene.hpp"

using namespace swarmwatch;

static void BM_SolveLsa(benchmark::State& state) {
  const auto n = std::size_t(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  CostMatrix c(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) c(i, j) = u(rng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(solve_lsa(c));
}
BENCHMARK(BM_SolveLsa)->Arg(5)->Arg(10)->Arg(50)->Arg(200);

static void BM_BruteForceLsa(benchmark::State& state) {
  const auto n = std::size_t(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  CostMatrix c(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) c(i, j) = u(rng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_lsa(c));
}
BENCHMARK(BM_BruteForceLsa)->Arg(5)->Arg(7);

static void BM_BoxIcpPair(benchmark::State& state) {
  const sim::Scene scene = sim::generate_scene({}, 0);
  IcpOptions icp;
  icp.rotation_starts = std::size_t(state.range(0));
  std::uint64_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sim::registration_trial(scene, sim::PairRegime{}, icp, 0, k++ % 200));
  }
}
BENCHMARK(BM_BoxIcpPair)->Arg(1)->Arg(5);

static void BM_GnnForward(benchmark::State& state) {
  const auto p = gnn::GnnParams::random(gnn::GnnShape{}, 1);
  const auto g = gnn::sample_graph(5, 10, 10, 1, 0).graph;
  for (auto _ : state) benchmark::DoNotOptimize(gnn::gnn_forward(p, g));
}
BENCHMARK(BM_GnnForward);

static void BM_DecentralizedInfer(benchmark::State& state) {
  const auto p = gnn::GnnParams::random(gnn::GnnShape{}, 1);
  const auto views = gnn::local_views(gnn::sample_graph(5, 10, 10, 1, 0).graph);
  for (auto _ : state) benchmark::DoNotOptimize(gnn::decentralized_infer(p, views));
}
BENCHMARK(BM_DecentralizedInfer);

static void BM_GradientOneGraph(benchmark::State& state) {
  const auto p = gnn::GnnParams::random(gnn::GnnShape{}, 1);
  const std::vector<gnn::LabeledGraph> data{gnn::sample_graph(5, 10, 10, 1, 0)};
  for (auto _ : state) benchmark::DoNotOptimize(gnn::objective_gradient(p, data, {}));
}
BENCHMARK(BM_GradientOneGraph);

BENCHMARK_MAIN();
