#include "swarmctl/commands.hpp"

#include <numbers>
#include <sstream>

#include <json.hpp>

#include "swarmwatch/error.hpp"
#include "swarmwatch/gnn/evaluate.hpp"
#include "swarmwatch/gnn/io.hpp"
#include "swarmwatch/protocol.hpp"
#include "swarmwatch/random.hpp"
#include "swarmwatch/sim/config.hpp"
#include "swarmwatch/sim/mission.hpp"
#include "swarmwatch/sim/report.hpp"
#include "swarmwatch/sim/scene.hpp"

namespace swarmctl {

using nlohmann::json;
using swarmwatch::Error;
using swarmwatch::ErrorCode;

namespace {

std::string provenance(const std::string& command, const json& config) {
  const std::string text = config.dump();
  return "# swarmctl " + command + " schema_version=" + std::to_string(kCsvSchemaVersion) +
         " config_hash=" + swarmwatch::sim::hash_hex(swarmwatch::fnv1a64(text)) +
         " config=" + text + "\n";
}

std::ostringstream numeric_stream() {
  std::ostringstream out;
  out.precision(17);
  return out;
}

const char* optimizer_name(swarmwatch::gnn::Optimizer o) {
  return o == swarmwatch::gnn::Optimizer::kAdam ? "adam" : "sgd";
}

const char* reduction_name(swarmwatch::gnn::CeReduction r) {
  return r == swarmwatch::gnn::CeReduction::kSumEntries ? "sum" : "mean";
}

}  // namespace

std::string cmd_gen_dataset(const GenDatasetArgs& a) {
  if (a.count == 0) throw Error(ErrorCode::kInvalidArgument, "count must be >= 1");
  if (a.out.empty()) throw Error(ErrorCode::kInvalidArgument, "an output path is required");
  if (a.count > 0xffffffffu) throw Error(ErrorCode::kTooLarge, "count does not fit the file header");
  swarmwatch::gnn::Dataset d;
  d.header = {static_cast<std::uint32_t>(a.num_agents), static_cast<std::uint32_t>(a.num_goals),
              static_cast<std::uint32_t>(a.max_candidates), static_cast<std::uint32_t>(a.count),
              a.seed};
  d.graphs = swarmwatch::gnn::gen_dataset(a.num_agents, a.num_goals, a.count, a.max_candidates, a.seed);
  swarmwatch::gnn::save_dataset(d, a.out);
  return "wrote " + std::to_string(a.count) + " graphs (n_a=" + std::to_string(a.num_agents) +
         ", n_g=" + std::to_string(a.num_goals) + ") to " + a.out + "\n";
}

std::string cmd_train(const TrainArgs& a) {
  using namespace swarmwatch::gnn;
  if (a.out.empty()) throw Error(ErrorCode::kInvalidArgument, "an output path is required");
  const Dataset data = load_dataset(a.dataset);
  if (data.header.num_goals > GnnShape{}.goal_slots) {
    throw Error(ErrorCode::kShapeMismatch, "dataset has more goals than the network has slots");
  }
  std::vector<LabeledGraph> graphs = data.graphs;
  for (auto& g : graphs) g.graph = pad_ghost_goals(std::move(g.graph), GnnShape{}.goal_slots);

  TrainOptions o = a.options;
  o.seed = a.seed;
  const auto& ob = o.objective;
  const json config = {
      {"dataset", a.dataset}, {"dataset_seed", data.header.seed}, {"graphs", data.header.count},
      {"seed", a.seed}, {"epochs", o.epochs}, {"learning_rate", o.learning_rate},
      {"batch_size", o.batch_size}, {"optimizer", optimizer_name(o.optimizer)},
      {"momentum", o.momentum}, {"cosine_schedule", o.cosine_schedule},
      {"final_lr_fraction", o.final_lr_fraction}, {"alpha", ob.alpha}, {"eps", ob.eps},
      {"ce_reduction", reduction_name(ob.reduction)}};

  const TrainResult r = train(GnnParams::random(GnnShape{}, a.seed), graphs, o);
  save_params(r.params, a.out);

  auto out = numeric_stream();
  out << provenance("train", config) << "epoch,mean_objective\n";
  for (std::size_t e = 0; e < r.loss_curve.size(); ++e) out << e + 1 << ',' << r.loss_curve[e] << '\n';
  return out.str();
}

std::string cmd_eval_assign(const EvalAssignArgs& a) {
  using namespace swarmwatch::gnn;
  if (a.min_goals < a.num_agents || a.max_goals < a.min_goals) {
    throw Error(ErrorCode::kInvalidArgument, "goal range must satisfy n_a <= min <= max");
  }
  const GnnParams params = load_params(a.params);
  const json config = {{"params", a.params},       {"n_a", a.num_agents},
                       {"min_goals", a.min_goals}, {"max_goals", a.max_goals},
                       {"trials", a.trials},       {"seed", a.seed},
                       {"ghost_cost", a.ghost_cost}, {"max_candidates", a.max_candidates}};
  std::vector<AssignmentScore> scores;
  for (std::size_t g = a.min_goals; g <= a.max_goals; ++g) {
    scores.push_back(eval_assignment(params, a.num_agents, g, a.trials, a.seed,
                                     {a.ghost_cost, a.max_candidates}));
  }
  auto out = numeric_stream();
  out << provenance("eval-assign", config) << "metric";
  for (const auto& s : scores) out << ',' << s.num_goals;
  out << "\noptimality_pct";
  for (const auto& s : scores) out << ',' << s.optimality_pct;
  out << "\ndiversity_pct";
  for (const auto& s : scores) out << ',' << s.diversity_pct;
  out << '\n';
  return out.str();
}

std::string cmd_eval_registration(const EvalRegistrationArgs& a) {
  using namespace swarmwatch::sim;
  if (a.pairs == 0) throw Error(ErrorCode::kInvalidArgument, "pairs must be >= 1");
  const Scene scene = generate_scene(SceneOptions{}, a.seed);
  const json config = {{"pairs", a.pairs}, {"jitter_grid", a.jitter_grid}, {"seed", a.seed},
                       {"max_angle", a.regime.max_angle},
                       {"max_translation", a.regime.max_translation},
                       {"scale_min", a.regime.scale_min}, {"scale_max", a.regime.scale_max},
                       {"max_shear", a.regime.max_shear}, {"stress", a.stress},
                       {"tol", a.icp.tol}, {"max_iter", a.icp.max_iter},
                       {"with_scale", a.icp.with_scale},
                       {"rotation_starts", a.icp.rotation_starts},
                       {"rotation_span", a.icp.rotation_span}};
  auto out = numeric_stream();
  out << provenance("eval-registration", config)
      << "row,max_angle,max_translation,scale_min,scale_max,jitter_fraction,max_shear,pairs,"
         "accuracy_pct,converged_pct,mean_iterations\n";

  std::vector<PairRegime> rows;
  for (double j : a.jitter_grid) {
    PairRegime r = a.regime;
    r.jitter_fraction = j;
    rows.push_back(r);
  }
  if (a.stress) {
    PairRegime r = a.regime;
    r.max_angle = std::numbers::pi;
    rows.push_back(r);
  }
  for (std::size_t row = 0; row < rows.size(); ++row) {
    const PairRegime& r = rows[row];
    std::size_t correct = 0, converged = 0, iterations = 0;
    for (std::size_t k = 0; k < a.pairs; ++k) {
      const PairTrial t = registration_trial(scene, r, a.icp, a.seed, row * a.pairs + k);
      correct += t.correct;
      converged += t.converged;
      iterations += t.iterations;
    }
    const double n = static_cast<double>(a.pairs);
    out << (a.stress && row + 1 == rows.size() ? "stress" : "regime") << ',' << r.max_angle << ','
        << r.max_translation << ',' << r.scale_min << ',' << r.scale_max << ','
        << r.jitter_fraction << ',' << r.max_shear << ',' << a.pairs << ','
        << 100.0 * double(correct) / n << ',' << 100.0 * double(converged) / n << ','
        << double(iterations) / n << '\n';
  }
  return out.str();
}

std::string cmd_simulate(const SimulateArgs& a) {
  using namespace swarmwatch::sim;
  if (a.format != "jsonl" && a.format != "csv") {
    throw Error(ErrorCode::kInvalidArgument, "format must be jsonl or csv");
  }
  if (a.runs == 0) throw Error(ErrorCode::kInvalidArgument, "runs must be >= 1");
  MissionConfig config = load_mission_config(a.config);
  if (a.override_seed) config.seed = a.seed;
  if (!a.params.empty()) config.assignment.params_path = a.params;
  const swarmwatch::gnn::GnnParams params = swarmwatch::gnn::load_params(config.assignment.params_path);

  std::ostringstream out;
  if (a.format == "csv") {
    out << provenance("simulate", json::parse(canonical_config_json(config)))
        << report_csv_header() << '\n';
  }
  const std::uint64_t first = config.seed;
  for (std::size_t k = 0; k < a.runs; ++k) {
    config.seed = first + k;
    const MissionReport report = run_mission(config, params);
    if (a.format == "csv") {
      out << report_csv_rows(report);
    } else {
      out << report_json(report) << '\n';
    }
  }
  return out.str();
}

std::string cmd_bandwidth(const BandwidthArgs& a) {
  if (a.step == 0 || a.max_boxes < a.min_boxes || !(a.link_bps > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "need step >= 1, min <= max and a positive link rate");
  }
  const json config = {{"min_boxes", a.min_boxes}, {"max_boxes", a.max_boxes}, {"step", a.step},
                       {"hidden_width", a.hidden_width}, {"link_bps", a.link_bps}};
  std::ostringstream out;
  out.precision(10);
  out << provenance("bandwidth", config)
      << "num_boxes,hidden_width,bytes,framing_overhead,latency_s\n";
  for (std::size_t n = a.min_boxes; n <= a.max_boxes; n += a.step) {
    const auto b = swarmwatch::wire::bandwidth_estimate(n, a.hidden_width, a.link_bps);
    out << n << ',' << a.hidden_width << ',' << b.bytes << ',' << b.framing_overhead << ','
        << b.latency_seconds << '\n';
  }
  return out.str();
}

}  // namespace swarmctl
