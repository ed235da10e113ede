// Command-line front end. Everything goes through the shared-library C API.
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mfbg.h"

namespace {

int fail(mfbg_status status) {
  std::fprintf(stderr, "error (%s): %s\n", mfbg_status_name(status), mfbg_last_error());
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mean-field bandit game simulator and analysis toolkit"};
  app.require_subcommand(1);

  // run
  std::string run_config, run_out;
  std::vector<std::uint64_t> run_seeds;
  int run_count = 0;
  int run_workers = 4;
  int run_smooth = 0;
  auto* run = app.add_subcommand("run", "simulate one config over a batch of seeds");
  run->add_option("--config", run_config, "config file (JSON)")->required();
  run->add_option("--out", run_out, "output directory")->required();
  run->add_option("--seeds", run_seeds, "explicit seed list")->delimiter(',');
  run->add_option("--runs", run_count, "use seeds 1..k instead of an explicit list");
  run->add_option("--workers", run_workers, "concurrent runs");
  run->add_option("--smooth-window", run_smooth,
                  "centered moving-average column for plotting (50 matches the "
                  "reference figures; 0 disables)");

  // table
  std::string tbl_reward = "general", tbl_out;
  bool tbl_contraction = true;
  std::vector<int32_t> tbl_counts{50, 100, 200};
  std::vector<std::uint64_t> tbl_seeds;
  int tbl_runs = 6;
  int tbl_workers = 4;
  auto* table = app.add_subcommand(
      "table", "regret / cumulative-reward summary at T=2000, M=4");
  table->add_option("--reward", tbl_reward, "general or linear")
      ->check(CLI::IsMember({"general", "linear"}));
  table->add_flag("--contraction,!--non-contraction", tbl_contraction,
                  "parameter set satisfying (or violating) the contraction condition");
  table->add_option("--N", tbl_counts, "agent counts")->delimiter(',');
  table->add_option("--runs", tbl_runs, "seeds per cell (1..k)");
  table->add_option("--seeds", tbl_seeds, "explicit seed list override")->delimiter(',');
  table->add_option("--out", tbl_out, "output CSV")->required();
  table->add_option("--workers", tbl_workers, "concurrent runs");

  // mfe
  std::string mfe_config, mfe_out;
  int mfe_starts = 10;
  double mfe_damping = 0.5, mfe_tol = 1e-10;
  std::int64_t mfe_max_iter = 100000;
  std::uint64_t mfe_seed = 0;
  auto* mfe = app.add_subcommand("mfe", "fixed-point search from random starts");
  mfe->add_option("--config", mfe_config, "config file (JSON)")->required();
  mfe->add_option("--starts", mfe_starts, "number of random initializations");
  mfe->add_option("--damping", mfe_damping, "fixed-point damping in (0,1]");
  mfe->add_option("--tol", mfe_tol, "residual tolerance");
  mfe->add_option("--max-iter", mfe_max_iter, "iteration cap");
  mfe->add_option("--seed", mfe_seed, "start-draw seed (default: config seed)");
  mfe->add_option("--out", mfe_out, "output CSV")->required();

  // diagnose
  std::string diag_config, diag_out;
  std::uint64_t diag_seed = 1;
  auto* diag = app.add_subcommand(
      "diagnose", "simulation vs deterministic-dynamics diagnostics bundle");
  diag->add_option("--config", diag_config, "config file (JSON)")->required();
  diag->add_option("--seed", diag_seed, "run seed");
  diag->add_option("--out", diag_out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    if (run_seeds.empty() && run_count > 0) {
      for (int k = 1; k <= run_count; ++k) run_seeds.push_back(k);
    }
    if (run_seeds.empty()) {
      std::fprintf(stderr, "error: no seeds given (use --seeds or --runs)\n");
      return 1;
    }
    mfbg_status st = mfbg_cmd_run(run_config.c_str(), run_seeds.data(),
                                  run_seeds.size(), run_out.c_str(), run_workers,
                                  run_smooth);
    if (st != MFBG_OK) return fail(st);
    std::printf("wrote %zu trace set(s) under %s\n", run_seeds.size(), run_out.c_str());
    return 0;
  }

  if (table->parsed()) {
    mfbg_status st = mfbg_cmd_table(
        tbl_reward.c_str(), tbl_contraction ? 1 : 0, tbl_counts.data(),
        tbl_counts.size(), tbl_runs, tbl_seeds.empty() ? nullptr : tbl_seeds.data(),
        tbl_seeds.size(), tbl_out.c_str(), tbl_workers);
    if (st != MFBG_OK) return fail(st);
    std::printf("wrote %s\n", tbl_out.c_str());
    return 0;
  }

  if (mfe->parsed()) {
    mfbg_status st = mfbg_cmd_mfe(mfe_config.c_str(), mfe_starts, mfe_damping, mfe_tol,
                                  mfe_max_iter, mfe_seed, mfe_out.c_str());
    if (st != MFBG_OK) return fail(st);
    std::printf("wrote %s\n", mfe_out.c_str());
    return 0;
  }

  if (diag->parsed()) {
    mfbg_status st =
        mfbg_cmd_diagnose(diag_config.c_str(), diag_seed, diag_out.c_str());
    if (st != MFBG_OK) return fail(st);
    std::printf("wrote diagnostics under %s\n", diag_out.c_str());
    return 0;
  }
  return 1;
}
