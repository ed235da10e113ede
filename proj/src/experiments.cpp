#include "mfbg/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "mfbg/csv.hpp"
#include "mfbg/policy.hpp"

namespace mfbg {

namespace {

using nlohmann::json;

int clamp_workers(int workers, std::size_t jobs) {
  if (workers < 1) workers = 1;
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<int>(
      std::min<std::size_t>({static_cast<std::size_t>(workers), jobs, hw}));
}

// Runs fn(k) for k in [0, jobs) across a small worker pool. Each job owns its
// outputs, so scheduling order cannot change any result.
template <typename Fn>
void parallel_for(std::size_t jobs, int workers, Fn&& fn) {
  workers = clamp_workers(workers, jobs);
  if (workers <= 1) {
    for (std::size_t k = 0; k < jobs; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t k = next.fetch_add(1); k < jobs; k = next.fetch_add(1)) fn(k);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const GameConfig& resolved, const std::string& path) {
  json m;
  m["config"] = json::parse(config_to_json(resolved));
  m["arm_thetas"] = resolved.reward_spec.arm_thetas;
  const double theta = resolved.reward_spec.theta;
  const double eta = resolved.eta.limit();
  json checks;
  if (!resolved.heterogeneous_beta()) {
    auto g = contraction_check_general(theta, resolved.betas[0], eta);
    auto l = contraction_check_linear(theta, resolved.betas[0], eta);
    checks["general"] = {{"satisfied", g.satisfied}, {"margin", g.margin}};
    checks["linear"] = {{"satisfied", l.satisfied}, {"margin", l.margin}};
  } else {
    auto g = contraction_check_heterogeneous(theta, resolved.betas, false);
    auto l = contraction_check_heterogeneous(theta, resolved.betas, true);
    checks["heterogeneous_general"] = {{"satisfied", g.satisfied}, {"margin", g.margin}};
    checks["heterogeneous_linear"] = {{"satisfied", l.satisfied}, {"margin", l.margin}};
  }
  m["contraction_checks"] = checks;
  m["generated_at"] = timestamp_utc();  // only line that may differ across reruns

  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write manifest: " + path);
  out << m.dump(2) << '\n';
}

}  // namespace

void run_batch(const GameConfig& config, std::span<const std::uint64_t> seeds,
               const std::string& out_dir, int workers, int smooth_window) {
  if (seeds.empty()) throw std::invalid_argument("no seeds given");
  validate_config(config);
  ensure_directory(out_dir);

  parallel_for(seeds.size(), workers, [&](std::size_t k) {
    GameConfig cfg = config;
    cfg.seed = seeds[k];
    RunTrace trace = run(cfg);
    const std::string dir = out_dir + "/seed-" + std::to_string(seeds[k]);
    ensure_directory(dir);
    export_trace_csv(trace, dir, smooth_window);
    write_manifest(trace.config, dir + "/manifest.json");
  });
}

GameConfig table_config(RewardKind kind, bool contraction, int num_agents,
                        std::uint64_t seed) {
  GameConfig cfg;
  cfg.num_agents = num_agents;
  cfg.num_arms = 4;
  cfg.horizon = 2000;
  cfg.stepsize_alpha = 1.0;
  cfg.eta = {0.2, 0.0};
  cfg.seed = seed;
  cfg.reward_spec.kind = kind;
  if (kind == RewardKind::kGeneral) {
    cfg.reward_spec.theta = 0.5;
    cfg.betas = {contraction ? 0.5 : 30.0};
  } else if (kind == RewardKind::kLinear) {
    cfg.reward_spec.theta = 1.0;
    cfg.betas = {contraction ? 2.0 : 40.0};
  } else {
    throw std::invalid_argument("table supports the built-in reward families only");
  }
  return cfg;
}

std::vector<TableRow> make_table(RewardKind kind, bool contraction,
                                 std::span<const int> agent_counts, int runs,
                                 int workers,
                                 std::span<const std::uint64_t> seed_override) {
  if (runs < 1) throw std::invalid_argument("runs must be >= 1");
  if (agent_counts.empty()) throw std::invalid_argument("no agent counts given");

  std::vector<std::uint64_t> seeds;
  if (!seed_override.empty()) {
    seeds.assign(seed_override.begin(), seed_override.end());
  } else {
    for (int k = 1; k <= runs; ++k) seeds.push_back(static_cast<std::uint64_t>(k));
  }
  const int R = static_cast<int>(seeds.size());

  struct Cell {
    double regret = 0.0;
    double rewards = 0.0;
  };
  std::vector<Cell> cells(agent_counts.size() * seeds.size());
  parallel_for(cells.size(), workers, [&](std::size_t idx) {
    const std::size_t ni = idx / seeds.size();
    const std::size_t si = idx % seeds.size();
    GameConfig cfg = table_config(kind, contraction, agent_counts[ni], seeds[si]);
    RunTrace trace = run(cfg);
    cells[idx] = {mean_regret(trace), cumulative_reward(trace)};
  });

  std::vector<TableRow> rows;
  for (std::size_t ni = 0; ni < agent_counts.size(); ++ni) {
    TableRow row;
    row.reward = reward_kind_name(kind);
    row.num_agents = agent_counts[ni];
    row.runs = R;
    row.seeds = seeds;
    for (std::size_t si = 0; si < seeds.size(); ++si) {
      row.regret += cells[ni * seeds.size() + si].regret;
      row.rewards += cells[ni * seeds.size() + si].rewards;
    }
    row.regret /= R;
    row.rewards /= R;
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_table_csv(std::span<const TableRow> rows, const std::string& path) {
  CsvWriter w(path);
  w.row({"reward", "N", "regret", "rewards", "runs", "seed_list"});
  for (const auto& row : rows) {
    std::string seed_list;
    for (std::size_t k = 0; k < row.seeds.size(); ++k) {
      if (k) seed_list += ';';
      seed_list += std::to_string(row.seeds[k]);
    }
    w.row({row.reward, std::to_string(row.num_agents), format_double(row.regret),
           format_double(row.rewards), std::to_string(row.runs), seed_list});
  }
}

MfeReport mfe_report(const GameConfig& config, int starts, std::uint64_t start_seed,
                     const MfeOptions& options) {
  if (starts < 1) throw std::invalid_argument("starts must be >= 1");
  GameConfig cfg = resolve_config(config);
  const int M = cfg.num_arms;

  MfeReport report;
  Rng rng(substream_seed(start_seed, kSolverStartStream));
  for (int k = 0; k < starts; ++k) {
    // Symmetric starts: fixed points assign all agents the same arm values,
    // and for large N a random full matrix averages out to the same mean
    // population no matter the draw, which would defeat the multi-start.
    std::vector<double> v(M);
    for (auto& x : v) x = rng.uniform01();
    report.starts.push_back(solve_mfe_symmetric(cfg, v, options));
  }

  for (const auto& sol : report.starts) {
    if (!sol.converged) {
      ++report.non_converged;
      continue;
    }
    bool placed = false;
    for (auto& cluster : report.clusters) {
      if (inf_distance(sol.state, cluster.representative, cfg) <= 1e-4) {
        ++cluster.count;
        cluster.max_residual = std::max(cluster.max_residual, sol.residual);
        placed = true;
        break;
      }
    }
    if (!placed) {
      report.clusters.push_back({sol.state, 1, sol.residual});
    }
  }
  return report;
}

void write_mfe_report_csv(const MfeReport& report, const GameConfig& config,
                          const std::string& path) {
  GameConfig cfg = resolve_config(config);
  CsvWriter w(path);
  w.row({"start", "converged", "iterations", "residual", "cluster"});
  for (std::size_t k = 0; k < report.starts.size(); ++k) {
    const auto& sol = report.starts[k];
    int cluster = -1;
    if (sol.converged) {
      for (std::size_t c = 0; c < report.clusters.size(); ++c) {
        if (inf_distance(sol.state, report.clusters[c].representative, cfg) <= 1e-4) {
          cluster = static_cast<int>(c);
          break;
        }
      }
    }
    w.row({std::to_string(k), sol.converged ? "1" : "0",
           std::to_string(sol.iterations), format_double(sol.residual),
           std::to_string(cluster)});
  }
}

std::vector<std::string> diagnose_file_set() {
  return {"manifest.json",  "states.csv",       "population.csv",
          "rewards.csv",    "ode_states.csv",   "distance.csv",
          "lyapunov.csv",   "pseudotrajectory.csv", "state_change.csv",
          "variance.csv",   "checks.csv"};
}

void diagnose(const GameConfig& config, std::uint64_t seed, const std::string& out_dir) {
  GameConfig cfg = config;
  cfg.seed = seed;
  cfg.snapshot_stride = 1;  // every series below needs full snapshots
  cfg = resolve_config(cfg);
  ensure_directory(out_dir);

  RunTrace trace = run(cfg);
  export_trace_csv(trace, out_dir);
  write_manifest(trace.config, out_dir + "/manifest.json");

  // Deterministic trajectory from the same initial state, over the same
  // effective time span as the discrete run.
  InterpolatedProcess interp = interpolated_process(trace, cfg.stepsize());
  const double t_total = interp.total_time();
  OdeTrajectory ode = integrate_ode(trace.initial_state(), cfg, t_total, 0.01);
  export_trajectory_csv(ode, cfg, out_dir + "/ode_states.csv");

  MfeSolution mfe = solve_mfe(cfg);
  {
    auto e = convergence_distance_series(trace, mfe.state);
    CsvWriter w(out_dir + "/distance.csv");
    w.row({"n", "distance"});
    for (std::size_t k = 0; k < e.size(); ++k) {
      w.row({std::to_string(trace.snapshot_slots[k]), format_double(e[k])});
    }
  }
  {
    auto v = lyapunov_series(ode, mfe.state, cfg);
    CsvWriter w(out_dir + "/lyapunov.csv");
    w.row({"t", "value"});
    for (std::size_t k = 0; k < v.size(); ++k) {
      w.row({format_double(ode.times[k]), format_double(v[k])});
    }
  }
  {
    CsvWriter w(out_dir + "/pseudotrajectory.csv");
    w.row({"t", "window", "distance"});
    const double window = std::min(1.0, t_total / 4.0);
    for (double frac : {0.1, 0.5, 0.9}) {
      double t = std::min(frac * t_total, t_total - window);
      double d = pseudotrajectory_distance(interp, cfg, t, window, 0.01);
      w.row({format_double(t), format_double(window), format_double(d)});
    }
  }
  {
    // One sampled (agent, arm) pair; the bound holds for all of them.
    Rng pick(substream_seed(cfg.seed, kProfilePairStream));
    const int agent = static_cast<int>(pick.uniform01() * cfg.num_agents);
    const auto arms = cfg.has_subsets() ? cfg.arm_subsets[agent] : std::vector<int>{};
    int arm;
    if (cfg.has_subsets()) {
      arm = arms[static_cast<std::size_t>(pick.uniform01() * arms.size())];
    } else {
      arm = static_cast<int>(pick.uniform01() * cfg.num_arms);
    }
    auto series = state_change_series(trace, agent, arm);
    CsvWriter w(out_dir + "/state_change.csv");
    w.row({"K", "agent", "arm", "lhs", "rhs"});
    for (std::size_t k = 0; k < series.size(); ++k) {
      w.row({std::to_string(k), std::to_string(agent + 1), std::to_string(arm + 1),
             format_double(series[k].lhs), format_double(series[k].rhs)});
    }
  }
  {
    auto report = population_variance_check(cfg, 200, cfg.seed);
    CsvWriter w(out_dir + "/variance.csv");
    w.row({"arm", "empirical_var", "analytic_var", "bound"});
    for (int j = 0; j < cfg.num_arms; ++j) {
      w.row({std::to_string(j + 1), format_double(report.empirical[j]),
             format_double(report.analytic[j]), format_double(report.bound)});
    }
  }
  write_check_report_csv(cfg, out_dir + "/checks.csv");
}

}  // namespace mfbg
