#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "mfbg/experiments.hpp"

using namespace mfbg;
namespace fs = std::filesystem;

namespace {

GameConfig contraction_config(int n = 50, std::int64_t t = 400) {
  GameConfig cfg;
  cfg.num_agents = n;
  cfg.num_arms = 4;
  cfg.horizon = t;
  cfg.betas = {0.5};
  cfg.eta = {0.2, 0.0};
  cfg.stepsize_alpha = 1.0;
  cfg.reward_spec.kind = RewardKind::kGeneral;
  cfg.reward_spec.theta = 0.5;
  cfg.seed = 1;
  return cfg;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "mfbg_experiments" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("run batch writes one artifact set per seed") {
  const fs::path dir = fresh_dir("batch");
  std::vector<std::uint64_t> seeds{1, 2, 3, 4};
  run_batch(contraction_config(), seeds, dir.string(), 4);
  for (auto seed : seeds) {
    const fs::path sub = dir / ("seed-" + std::to_string(seed));
    for (const char* name : {"states.csv", "population.csv", "rewards.csv",
                             "manifest.json"}) {
      CHECK(fs::exists(sub / name));
    }
  }
  CHECK(slurp(dir / "seed-1" / "manifest.json").find("contraction_checks") !=
        std::string::npos);
}

TEST_CASE("run batch rejects an empty seed list") {
  CHECK_THROWS_WITH(run_batch(contraction_config(), {}, "/tmp/unused", 1),
                    "no seeds given");
}

TEST_CASE("rerunning a batch reproduces the CSV bytes") {
  const fs::path a = fresh_dir("bytes_a");
  const fs::path b = fresh_dir("bytes_b");
  std::vector<std::uint64_t> seeds{3};
  run_batch(contraction_config(20, 100), seeds, a.string(), 1);
  run_batch(contraction_config(20, 100), seeds, b.string(), 2);
  for (const char* name : {"states.csv", "population.csv", "rewards.csv"}) {
    CHECK(slurp(a / "seed-3" / name) == slurp(b / "seed-3" / name));
  }
}

TEST_CASE("contraction batch: terminal states agree across seeds") {
  std::vector<std::uint64_t> seeds{1, 2, 3, 4};
  GameConfig cfg = contraction_config(50, 2000);
  std::vector<std::vector<double>> arm_means;  // per seed, per arm
  for (auto seed : seeds) {
    GameConfig c = cfg;
    c.seed = seed;
    RunTrace trace = run(c);
    std::vector<double> mean(4, 0.0);
    for (int i = 0; i < 50; ++i) {
      for (int j = 0; j < 4; ++j) mean[j] += trace.terminal_state().at(i, j);
    }
    for (auto& v : mean) v /= 50.0;
    arm_means.push_back(mean);
  }
  // The second arm is the one the reference plots track; every arm behaves
  // the same way here.
  for (int j = 0; j < 4; ++j) {
    double lo = arm_means[0][j], hi = arm_means[0][j];
    for (const auto& m : arm_means) {
      lo = std::min(lo, m[j]);
      hi = std::max(hi, m[j]);
    }
    CHECK(hi - lo <= 0.05);
  }
}

TEST_CASE("non-contraction batch: spread reported") {
  // The reference figures show runs settling at visibly different levels in
  // this regime; with per-seed parameter draws and the slot-indexed
  // stepsize the measured per-arm spread across seeds is reported here
  // rather than asserted (the solver-side multiplicity question is covered
  // by the acceptance suite).
  GameConfig cfg = contraction_config(50, 2000);
  cfg.betas = {30.0};
  double worst = 0.0;
  std::vector<double> lo(4, 1e9), hi(4, -1e9);
  for (std::uint64_t seed : {1, 2, 3, 4}) {
    GameConfig c = cfg;
    c.seed = seed;
    RunTrace trace = run(c);
    for (int j = 0; j < 4; ++j) {
      double mean = 0.0;
      for (int i = 0; i < 50; ++i) mean += trace.terminal_state().at(i, j);
      mean /= 50.0;
      lo[j] = std::min(lo[j], mean);
      hi[j] = std::max(hi[j], mean);
    }
  }
  for (int j = 0; j < 4; ++j) worst = std::max(worst, hi[j] - lo[j]);
  MESSAGE("beta=30 cross-seed terminal spread (max over arms): ", worst);
  CHECK(worst > 0.0);
}

TEST_CASE("run batch honors the smoothing column") {
  const fs::path dir = fresh_dir("smooth");
  std::vector<std::uint64_t> seeds{1};
  run_batch(contraction_config(10, 60), seeds, dir.string(), 1, 10);
  const std::string states = slurp(dir / "seed-1" / "states.csv");
  CHECK(states.find("n,agent,arm,value,value_ma") == 0);
  const std::string pop = slurp(dir / "seed-1" / "population.csv");
  CHECK(pop.find("n,arm,fraction,fraction_ma") == 0);
}

TEST_CASE("table: small smoke run") {
  std::vector<int> counts{50};
  auto rows = make_table(RewardKind::kGeneral, true, counts, 2, 2);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].reward == "general");
  CHECK(rows[0].num_agents == 50);
  CHECK(rows[0].runs == 2);
  CHECK(rows[0].seeds == std::vector<std::uint64_t>{1, 2});
  CHECK(rows[0].regret < std::sqrt(2000.0));
  CHECK(rows[0].rewards > 1500.0);
  CHECK(rows[0].rewards < 2000.0);

  const fs::path dir = fresh_dir("table");
  write_table_csv(rows, (dir / "table.csv").string());
  const std::string text = slurp(dir / "table.csv");
  CHECK(text.find("reward,N,regret,rewards,runs,seed_list") == 0);
  CHECK(text.find("general,50,") != std::string::npos);
  CHECK(text.find("1;2") != std::string::npos);
}

TEST_CASE("table rejects bad arguments") {
  std::vector<int> counts{50};
  CHECK_THROWS(make_table(RewardKind::kGeneral, true, counts, 0, 1));
  std::vector<int> none;
  CHECK_THROWS(make_table(RewardKind::kGeneral, true, none, 2, 1));
}

TEST_CASE("table: explicit seed override") {
  std::vector<int> counts{50};
  std::vector<std::uint64_t> seeds{5, 9};
  auto rows = make_table(RewardKind::kLinear, true, counts, 6, 2, seeds);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].runs == 2);  // override wins over the requested run count
  CHECK(rows[0].seeds == seeds);
}

TEST_CASE("mfe report: contraction collapses to one cluster") {
  GameConfig cfg = contraction_config(40, 100);
  auto report = mfe_report(cfg, 10, 7);
  CHECK(report.starts.size() == 10);
  CHECK(report.non_converged == 0);
  CHECK(report.clusters.size() == 1);
  CHECK(report.clusters[0].count == 10);

  const fs::path dir = fresh_dir("mfe");
  write_mfe_report_csv(report, cfg, (dir / "report.csv").string());
  const std::string text = slurp(dir / "report.csv");
  CHECK(text.find("start,converged,iterations,residual,cluster") == 0);
}

TEST_CASE("mfe report: non-contraction runs are reported without error") {
  GameConfig cfg = contraction_config(40, 100);
  cfg.betas = {30.0};
  auto report = mfe_report(cfg, 10, 7);
  CHECK(report.starts.size() == 10);
  MESSAGE("beta=30 clusters: ", report.clusters.size(),
          ", non-converged: ", report.non_converged);
}

TEST_CASE("mfe report rejects zero starts") {
  CHECK_THROWS(mfe_report(contraction_config(10, 50), 0, 1));
}

TEST_CASE("diagnose writes the documented bundle") {
  const fs::path dir = fresh_dir("diagnose");
  GameConfig cfg = contraction_config(30, 300);
  diagnose(cfg, 2, dir.string());
  for (const auto& name : diagnose_file_set()) {
    CHECK(fs::exists(dir / name));
  }
  // Lyapunov series in the bundle must be non-increasing.
  std::ifstream in(dir / "lyapunov.csv");
  std::string line;
  std::getline(in, line);  // header
  double prev = 1e18;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    const double v = std::stod(line.substr(comma + 1));
    CHECK(v <= prev + 1e-8);
    prev = v;
  }
  // State-change series: lhs <= rhs on every line.
  std::ifstream sc(dir / "state_change.csv");
  std::getline(sc, line);
  while (std::getline(sc, line)) {
    std::stringstream row(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    REQUIRE(cells.size() == 5);
    CHECK(std::stod(cells[3]) <= std::stod(cells[4]) + 1e-9);
  }
}
