#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "swarmctl/commands.hpp"
#include "swarmwatch/error.hpp"
#include "swarmwatch/gnn/io.hpp"
#include "swarmwatch/sim/config.hpp"
#include "swarmwatch/sim/report.hpp"

using namespace swarmwatch;

namespace {

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string golden(const char* name) { return read_text(std::filesystem::path(SWARMWATCH_GOLDEN_DIR) / name); }

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::filesystem::path scratch() {
  const auto dir = std::filesystem::temp_directory_path() / "swarmwatch_test_cli";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string random_params_file() {
  const auto path = (scratch() / "random.swgn").string();
  gnn::save_params(gnn::GnnParams::random(gnn::GnnShape{}, 1), path);
  return path;
}

}  // namespace

TEST_CASE("bandwidth table matches its golden file") {
  const std::string out = swarmctl::cmd_bandwidth({});
  CHECK(out == golden("bandwidth.csv"));
  const auto rows = lines(out);
  REQUIRE(rows.size() == 23);
  CHECK(rows[0].rfind("# swarmctl bandwidth schema_version=1 config_hash=", 0) == 0);
  CHECK(rows[2] == "0,32,128,8,0.001024");
  CHECK(rows[22] == "20,32,308,8,0.002464");
}

TEST_CASE("bandwidth rejects a zero step") {
  swarmctl::BandwidthArgs a;
  a.step = 0;
  CHECK_THROWS_AS(swarmctl::cmd_bandwidth(a), Error);
}

TEST_CASE("gen-dataset is deterministic and validates its count") {
  swarmctl::GenDatasetArgs a;
  a.count = 25;
  a.seed = 4;
  a.out = (scratch() / "a.swds").string();
  swarmctl::cmd_gen_dataset(a);
  const auto first = read_text(a.out);
  a.out = (scratch() / "b.swds").string();
  swarmctl::cmd_gen_dataset(a);
  CHECK(read_text(a.out) == first);
  CHECK(gnn::load_dataset(a.out).graphs.size() == 25);

  a.count = 0;
  try {
    swarmctl::cmd_gen_dataset(a);
    FAIL("expected InvalidArgument");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidArgument);
  }
}

TEST_CASE("train writes parameters and a loss curve") {
  swarmctl::GenDatasetArgs g;
  g.count = 8;
  g.out = (scratch() / "train.swds").string();
  swarmctl::cmd_gen_dataset(g);
  swarmctl::TrainArgs t;
  t.dataset = g.out;
  t.out = (scratch() / "train.swgn").string();
  t.options.epochs = 2;
  t.options.batch_size = 4;
  const auto rows = lines(swarmctl::cmd_train(t));
  REQUIRE(rows.size() == 4);
  CHECK(rows[1] + "\n" == golden("train.header"));
  CHECK(rows[2].rfind("1,", 0) == 0);
  CHECK(gnn::load_params(t.out).all_finite());
}

TEST_CASE("eval-assign sweeps six goal counts") {
  swarmctl::EvalAssignArgs a;
  a.params = random_params_file();
  a.trials = 20;
  const auto rows = lines(swarmctl::cmd_eval_assign(a));
  REQUIRE(rows.size() == 4);
  CHECK(rows[1] + "\n" == golden("eval_assign.header"));
  CHECK(std::count(rows[2].begin(), rows[2].end(), ',') == 6);
  CHECK(rows[2].rfind("optimality_pct,", 0) == 0);
  CHECK(rows[3].rfind("diversity_pct,", 0) == 0);

  a.params = (scratch() / "missing.swgn").string();
  CHECK_THROWS_AS(swarmctl::cmd_eval_assign(a), Error);
}

TEST_CASE("eval-registration rows") {
  swarmctl::EvalRegistrationArgs a;
  a.pairs = 10;
  const auto rows = lines(swarmctl::cmd_eval_registration(a));
  REQUIRE(rows.size() == 2 + 3 + 1);
  CHECK(rows[1] + "\n" == golden("eval_registration.header"));
  CHECK(rows[2].rfind("regime,", 0) == 0);
  CHECK(rows[5].rfind("stress,", 0) == 0);
}

TEST_CASE("simulate is byte-identical across runs and stamps its config") {
  const auto config = scratch() / "mission.yaml";
  {
    std::ofstream out(config);
    out << "seed: 3\nfleet:\n  agents: 2\nscene:\n  whales: 6\nassignment:\n  params: random.swgn\n";
  }
  random_params_file();
  swarmctl::SimulateArgs a;
  a.config = config.string();
  const std::string first = swarmctl::cmd_simulate(a);
  CHECK(first == swarmctl::cmd_simulate(a));
  CHECK(first.find("\"consensus_ok\":true") != std::string::npos);
  const std::string hash = sim::hash_hex(sim::config_hash(sim::load_mission_config(a.config)));
  CHECK(first.find(hash) != std::string::npos);

  a.format = "csv";
  a.runs = 2;
  const auto rows = lines(swarmctl::cmd_simulate(a));
  REQUIRE(rows.size() == 2 + 2 * 2);
  CHECK(rows[0].rfind("# swarmctl simulate schema_version=1 config_hash=", 0) == 0);
  CHECK(rows[1] + "\n" == golden("simulate.header"));

  a.format = "xml";
  CHECK_THROWS_AS(swarmctl::cmd_simulate(a), Error);
}

TEST_CASE("the documented example config parses") {
  const auto c = sim::load_mission_config(SWARMWATCH_EXAMPLE_CONFIG);
  const sim::MissionConfig d;
  CHECK(c.scene.whales == d.scene.whales);
  CHECK(c.fleet.agents == d.fleet.agents);
  CHECK(c.registration.rotation_starts == d.registration.rotation_starts);
  CHECK(c.scout.threshold == d.scout.threshold);
  // Every documented value equals the built-in default.
  sim::MissionConfig resolved = d;
  resolved.assignment.params_path = c.assignment.params_path;
  CHECK(sim::canonical_config_json(c) == sim::canonical_config_json(resolved));
}
