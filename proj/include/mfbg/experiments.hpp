#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mfbg/analysis.hpp"
#include "mfbg/config.hpp"
#include "mfbg/meanfield.hpp"
#include "mfbg/sim.hpp"

namespace mfbg {

// One simulation per seed under out_dir/seed-<k>/, each with the trace CSVs
// and a manifest echoing the resolved config, arm thetas and contraction
// checks. Seeds run concurrently up to `workers` threads.
void run_batch(const GameConfig& config, std::span<const std::uint64_t> seeds,
               const std::string& out_dir, int workers, int smooth_window = 0);

struct TableRow {
  std::string reward;
  int num_agents = 0;
  double regret = 0.0;   // mean over agents and seeds
  double rewards = 0.0;  // mean over seeds of per-agent-averaged totals
  int runs = 0;
  std::vector<std::uint64_t> seeds;
};

// Benchmark configuration for one experiment family. Contraction picks
// (theta, beta, eta) = (0.5, 0.5, 0.2) general / (1, 2, 0.2) linear; the
// non-contraction variants raise beta to 30 / 40. M = 4, T = 2000.
GameConfig table_config(RewardKind kind, bool contraction, int num_agents,
                        std::uint64_t seed);

std::vector<TableRow> make_table(RewardKind kind, bool contraction,
                                 std::span<const int> agent_counts, int runs,
                                 int workers,
                                 std::span<const std::uint64_t> seed_override = {});
void write_table_csv(std::span<const TableRow> rows, const std::string& path);

struct MfeReport {
  struct Cluster {
    StateProfile representative;
    int count = 0;
    double max_residual = 0.0;
  };
  std::vector<MfeSolution> starts;   // one per random initialization
  std::vector<Cluster> clusters;     // converged solutions, merged at 1e-4
  int non_converged = 0;
};

// Random symmetric starts drawn from start_seed. Non-convergence of a start
// is recorded, never fatal.
MfeReport mfe_report(const GameConfig& config, int starts, std::uint64_t start_seed,
                     const MfeOptions& options = {});
void write_mfe_report_csv(const MfeReport& report, const GameConfig& config,
                          const std::string& path);

// One simulation plus the deterministic trajectory from the same initial
// state; writes distance/lyapunov/pseudotrajectory/state-change/variance
// series and the check report under out_dir.
void diagnose(const GameConfig& config, std::uint64_t seed, const std::string& out_dir);

// Files diagnose() is contracted to produce (relative names).
std::vector<std::string> diagnose_file_set();

}  // namespace mfbg
