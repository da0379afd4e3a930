#include <fstream>
#include <iostream>
#include <numbers>
#include <string>

#include <CLI11.hpp>

#include "swarmctl/commands.hpp"
#include "swarmwatch/error.hpp"

namespace {

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw swarmwatch::Error(swarmwatch::ErrorCode::kIo, "cannot create " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"swarmctl: whale-watching swarm toolkit"};
  app.require_subcommand(1);
  std::string out_path;

  swarmctl::GenDatasetArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-dataset", "Generate labeled agent/goal graphs");
  gen_cmd->add_option("--agents", gen.num_agents, "Agents per graph")->capture_default_str();
  gen_cmd->add_option("--goals", gen.num_goals, "Goals per graph")->capture_default_str();
  gen_cmd->add_option("--count", gen.count, "Number of graphs")->capture_default_str();
  gen_cmd->add_option("--max-candidates", gen.max_candidates, "Visible goals per agent")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Run seed")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Dataset file")->required();

  swarmctl::TrainArgs tr;
  std::string optimizer = "adam", reduction = "sum";
  auto* train_cmd = app.add_subcommand("train", "Train the assignment network");
  train_cmd->add_option("--dataset", tr.dataset, "Dataset file")->required();
  train_cmd->add_option("--out", tr.out, "Parameter file to write")->required();
  train_cmd->add_option("--log", out_path, "Loss curve CSV (stdout if omitted)");
  train_cmd->add_option("--seed", tr.seed, "Init and shuffle seed")->capture_default_str();
  train_cmd->add_option("--epochs", tr.options.epochs)->capture_default_str();
  train_cmd->add_option("--lr", tr.options.learning_rate)->capture_default_str();
  train_cmd->add_option("--batch", tr.options.batch_size)->capture_default_str();
  train_cmd->add_option("--optimizer", optimizer)->check(CLI::IsMember({"adam", "sgd"}))->capture_default_str();
  train_cmd->add_option("--momentum", tr.options.momentum, "SGD momentum")->capture_default_str();
  train_cmd->add_option("--cosine", tr.options.cosine_schedule, "Cosine learning-rate decay")->capture_default_str();
  train_cmd->add_option("--final-lr-fraction", tr.options.final_lr_fraction)->capture_default_str();
  train_cmd->add_option("--alpha", tr.options.objective.alpha)->capture_default_str();
  train_cmd->add_option("--ce-reduction", reduction)->check(CLI::IsMember({"sum", "mean"}))->capture_default_str();

  swarmctl::EvalAssignArgs ev;
  auto* eval_cmd = app.add_subcommand("eval-assign", "Optimality/diversity sweep over goal counts");
  eval_cmd->add_option("--params", ev.params, "Parameter file")->required();
  eval_cmd->add_option("--agents", ev.num_agents)->capture_default_str();
  eval_cmd->add_option("--min-goals", ev.min_goals)->capture_default_str();
  eval_cmd->add_option("--max-goals", ev.max_goals)->capture_default_str();
  eval_cmd->add_option("--trials", ev.trials)->capture_default_str();
  eval_cmd->add_option("--seed", ev.seed)->capture_default_str();
  eval_cmd->add_option("--ghost-cost", ev.ghost_cost)->capture_default_str();
  eval_cmd->add_option("--out", out_path, "CSV file (stdout if omitted)");

  swarmctl::EvalRegistrationArgs er;
  bool no_stress = false;
  auto* reg_cmd = app.add_subcommand("eval-registration", "Box-ICP matching accuracy on view pairs");
  reg_cmd->add_option("--pairs", er.pairs)->capture_default_str();
  reg_cmd->add_option("--jitter", er.jitter_grid, "Corner jitter grid (fraction of box side)")->capture_default_str();
  reg_cmd->add_option("--seed", er.seed)->capture_default_str();
  reg_cmd->add_option("--max-angle", er.regime.max_angle)->capture_default_str();
  reg_cmd->add_option("--max-translation", er.regime.max_translation)->capture_default_str();
  reg_cmd->add_option("--scale-min", er.regime.scale_min)->capture_default_str();
  reg_cmd->add_option("--scale-max", er.regime.scale_max)->capture_default_str();
  reg_cmd->add_option("--max-shear", er.regime.max_shear)->capture_default_str();
  reg_cmd->add_option("--rotation-starts", er.icp.rotation_starts, "Initial rotations tried by Box-ICP")->capture_default_str();
  reg_cmd->add_flag("--no-stress", no_stress, "Skip the large-rotation row");
  reg_cmd->add_option("--out", out_path, "CSV file (stdout if omitted)");

  swarmctl::SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Run the full mission pipeline");
  sim_cmd->add_option("--config", sim.config, "YAML mission config")->required();
  sim_cmd->add_option("--params", sim.params, "Parameter file (overrides assignment.params)");
  auto* seed_opt = sim_cmd->add_option("--seed", sim.seed, "Override the config seed");
  sim_cmd->add_option("--runs", sim.runs, "Consecutive seeds to run")->capture_default_str();
  sim_cmd->add_option("--format", sim.format)->check(CLI::IsMember({"jsonl", "csv"}))->capture_default_str();
  sim_cmd->add_option("--out", out_path, "Report file (stdout if omitted)");

  swarmctl::BandwidthArgs bw;
  auto* bw_cmd = app.add_subcommand("bandwidth", "Per-link message size and latency table");
  bw_cmd->add_option("--min-boxes", bw.min_boxes)->capture_default_str();
  bw_cmd->add_option("--max-boxes", bw.max_boxes)->capture_default_str();
  bw_cmd->add_option("--step", bw.step)->capture_default_str();
  bw_cmd->add_option("--hidden-width", bw.hidden_width)->capture_default_str();
  bw_cmd->add_option("--link-bps", bw.link_bps)->capture_default_str();
  bw_cmd->add_option("--out", out_path, "CSV file (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);

  std::string phase = app.get_subcommands().front()->get_name();
  try {
    if (gen_cmd->parsed()) {
      std::cerr << swarmctl::cmd_gen_dataset(gen);
    } else if (train_cmd->parsed()) {
      tr.options.optimizer = optimizer == "adam" ? swarmwatch::gnn::Optimizer::kAdam
                                                 : swarmwatch::gnn::Optimizer::kSgd;
      tr.options.objective.reduction = reduction == "sum" ? swarmwatch::gnn::CeReduction::kSumEntries
                                                          : swarmwatch::gnn::CeReduction::kMeanEntries;
      emit(swarmctl::cmd_train(tr), out_path);
    } else if (eval_cmd->parsed()) {
      emit(swarmctl::cmd_eval_assign(ev), out_path);
    } else if (reg_cmd->parsed()) {
      er.stress = !no_stress;
      emit(swarmctl::cmd_eval_registration(er), out_path);
    } else if (sim_cmd->parsed()) {
      sim.override_seed = seed_opt->count() > 0;
      emit(swarmctl::cmd_simulate(sim), out_path);
    } else if (bw_cmd->parsed()) {
      emit(swarmctl::cmd_bandwidth(bw), out_path);
    }
  } catch (const swarmwatch::Error& e) {
    std::cerr << "swarmctl " << phase << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "swarmctl " << phase << ": " << e.what() << '\n';
    return 3;
  }
  return 0;
}
