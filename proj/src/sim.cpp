#include "mfbg/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mfbg/csv.hpp"
#include "mfbg/policy.hpp"

namespace mfbg {

const StateProfile& RunTrace::state_at(std::int64_t n) const {
  auto it = std::lower_bound(snapshot_slots.begin(), snapshot_slots.end(), n);
  if (it == snapshot_slots.end() || *it != n) {
    throw std::runtime_error("state snapshot for slot " + std::to_string(n) +
                             " was thinned out");
  }
  return snapshots[static_cast<std::size_t>(it - snapshot_slots.begin())];
}

PopulationProfile population_profile(std::span<const std::int32_t> actions,
                                     int num_agents, int num_arms) {
  if (actions.size() != static_cast<std::size_t>(num_agents)) {
    throw std::invalid_argument("actions length must equal num_agents");
  }
  std::vector<double> counts(num_arms, 0.0);
  for (std::int32_t a : actions) {
    if (a < 0 || a >= num_arms) throw std::invalid_argument("invalid arm index");
    counts[a] += 1.0;
  }
  for (auto& c : counts) c /= static_cast<double>(num_agents);
  return PopulationProfile{std::move(counts)};
}

SlotRecord step(StateProfile& state, const GameConfig& config, std::int64_t n,
                std::span<Rng> agent_rngs) {
  const int N = config.num_agents;
  const int M = config.num_arms;
  const double eta_n = config.eta.at(n);

  SlotRecord rec;
  rec.actions.resize(N);
  rec.sigma.assign(static_cast<std::size_t>(N) * M, 0.0);
  rec.rewards.resize(N);

  // Everyone samples before anyone observes or updates.
  for (int i = 0; i < N; ++i) {
    std::span<double> row{rec.sigma.data() + static_cast<std::size_t>(i) * M,
                          static_cast<std::size_t>(M)};
    sigma_row(config, state, i, eta_n, row);
    if (!config.has_subsets()) {
      rec.actions[i] = static_cast<std::int32_t>(sample_arm(row, agent_rngs[i]));
    } else {
      const auto& sub = config.arm_subsets[i];
      std::vector<double> local(sub.size());
      for (std::size_t k = 0; k < sub.size(); ++k) local[k] = row[sub[k]];
      int local_idx = sample_arm(local, agent_rngs[i]);
      rec.actions[i] = static_cast<std::int32_t>(sub[local_idx]);
    }
  }

  rec.population = population_profile(rec.actions, N, M);

  const double gamma = config.stepsize().at(n);
  for (int i = 0; i < N; ++i) {
    const int a = rec.actions[i];
    const double r = reward_at(config.reward_spec, rec.population.fractions, a);
    rec.rewards[i] = r;
    // Only the played arm moves; it slides toward the realized reward.
    state.at(i, a) += gamma * (r - state.at(i, a));
  }
  return rec;
}

RunTrace run(const GameConfig& config) {
  RunTrace trace;
  if (config.horizon == 0) {
    // Zero-slot runs are a legal degenerate case here even though configs
    // from files require at least one slot.
    GameConfig padded = config;
    padded.horizon = 1;
    trace.config = resolve_config(padded);
    trace.config.horizon = 0;
  } else {
    trace.config = resolve_config(config);
  }
  const GameConfig& cfg = trace.config;
  const int N = cfg.num_agents;
  const int M = cfg.num_arms;
  const std::int64_t T = std::max<std::int64_t>(cfg.horizon, 0);

  std::vector<Rng> rngs;
  rngs.reserve(N);
  for (int i = 0; i < N; ++i) rngs.push_back(agent_rng(cfg, i));
  StateProfile state = init_state_profile(cfg, rngs);

  trace.actions.reserve(static_cast<std::size_t>(T) * N);
  trace.population.reserve(static_cast<std::size_t>(T) * M);
  trace.realized_rewards.reserve(static_cast<std::size_t>(T) * N);
  trace.sigma.reserve(static_cast<std::size_t>(T) * N * M);

  for (std::int64_t n = 0; n < T; ++n) {
    if (n % cfg.snapshot_stride == 0) {
      trace.snapshot_slots.push_back(n);
      trace.snapshots.push_back(state);
    }
    SlotRecord rec = step(state, cfg, n, rngs);
    trace.actions.insert(trace.actions.end(), rec.actions.begin(), rec.actions.end());
    trace.population.insert(trace.population.end(), rec.population.fractions.begin(),
                            rec.population.fractions.end());
    trace.realized_rewards.insert(trace.realized_rewards.end(), rec.rewards.begin(),
                                  rec.rewards.end());
    trace.sigma.insert(trace.sigma.end(), rec.sigma.begin(), rec.sigma.end());
  }
  trace.snapshot_slots.push_back(T);
  trace.snapshots.push_back(state);
  return trace;
}

std::vector<double> empirical_regrets(const RunTrace& trace) {
  const int N = trace.num_agents();
  const int M = trace.num_arms();
  const std::int64_t T = trace.horizon();

  // gap(i, j) = sum_n [ r(f_n, j) - E_sigma r(f_n, .) ]
  std::vector<double> gaps(static_cast<std::size_t>(N) * M, 0.0);
  for (std::int64_t n = 0; n < T; ++n) {
    PopulationProfile f{std::vector<double>(trace.population_row(n).begin(),
                                            trace.population_row(n).end())};
    std::vector<double> r = reward_vector(trace.config.reward_spec, f);
    for (int i = 0; i < N; ++i) {
      auto srow = trace.sigma_row_at(n, i);
      double expected = 0.0;
      for (int j = 0; j < M; ++j) expected += srow[j] * r[j];
      for (int j = 0; j < M; ++j) {
        gaps[static_cast<std::size_t>(i) * M + j] += r[j] - expected;
      }
    }
  }
  std::vector<double> out(N, 0.0);
  for (int i = 0; i < N; ++i) {
    double best = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (int j = 0; j < M; ++j) {
      if (!trace.config.active(i, j)) continue;
      best = std::max(best, gaps[static_cast<std::size_t>(i) * M + j]);
      any = true;
    }
    out[i] = (any && T > 0) ? best : 0.0;
  }
  return out;
}

double empirical_regret(const RunTrace& trace, int agent) {
  if (agent < 0 || agent >= trace.num_agents()) {
    throw std::invalid_argument("agent index out of range");
  }
  return empirical_regrets(trace)[agent];
}

double mean_regret(const RunTrace& trace) {
  auto regs = empirical_regrets(trace);
  double sum = 0.0;
  for (double r : regs) sum += r;
  return sum / static_cast<double>(regs.size());
}

double cumulative_reward(const RunTrace& trace) {
  double total = 0.0;
  for (double r : trace.realized_rewards) total += r;
  return total / static_cast<double>(trace.num_agents());
}

namespace {

// Centered moving average over the slot axis; shrinks the window at the ends.
std::vector<double> moving_average(std::span<const double> series, int window) {
  const std::int64_t n = static_cast<std::int64_t>(series.size());
  std::vector<double> out(series.size());
  const std::int64_t half = window / 2;
  for (std::int64_t t = 0; t < n; ++t) {
    const std::int64_t lo = std::max<std::int64_t>(0, t - half);
    const std::int64_t hi = std::min<std::int64_t>(n - 1, t + half);
    double sum = 0.0;
    for (std::int64_t k = lo; k <= hi; ++k) sum += series[k];
    out[t] = sum / static_cast<double>(hi - lo + 1);
  }
  return out;
}

}  // namespace

void export_trace_csv(const RunTrace& trace, const std::string& dir,
                      int smooth_window) {
  ensure_directory(dir);
  const int N = trace.num_agents();
  const int M = trace.num_arms();

  {
    CsvWriter w(dir + "/states.csv");
    if (smooth_window > 0) {
      w.row({"n", "agent", "arm", "value", "value_ma"});
      // Smoothing needs the per-(agent, arm) series in slot order.
      const std::size_t S = trace.snapshots.size();
      for (int i = 0; i < N; ++i) {
        for (int j = 0; j < M; ++j) {
          if (!trace.config.active(i, j)) continue;
          std::vector<double> series(S);
          for (std::size_t k = 0; k < S; ++k) series[k] = trace.snapshots[k].at(i, j);
          auto ma = moving_average(series, smooth_window);
          for (std::size_t k = 0; k < S; ++k) {
            w.row({std::to_string(trace.snapshot_slots[k]), std::to_string(i + 1),
                   std::to_string(j + 1), format_double(series[k]),
                   format_double(ma[k])});
          }
        }
      }
    } else {
      w.row({"n", "agent", "arm", "value"});
      for (std::size_t k = 0; k < trace.snapshots.size(); ++k) {
        for (int i = 0; i < N; ++i) {
          for (int j = 0; j < M; ++j) {
            if (!trace.config.active(i, j)) continue;
            w.row({std::to_string(trace.snapshot_slots[k]), std::to_string(i + 1),
                   std::to_string(j + 1), format_double(trace.snapshots[k].at(i, j))});
          }
        }
      }
    }
  }

  {
    CsvWriter w(dir + "/population.csv");
    if (smooth_window > 0) {
      w.row({"n", "arm", "fraction", "fraction_ma"});
      for (int j = 0; j < M; ++j) {
        std::vector<double> series(trace.horizon());
        for (std::int64_t n = 0; n < trace.horizon(); ++n) {
          series[n] = trace.population_at(n, j);
        }
        auto ma = moving_average(series, smooth_window);
        for (std::int64_t n = 0; n < trace.horizon(); ++n) {
          w.row({std::to_string(n), std::to_string(j + 1), format_double(series[n]),
                 format_double(ma[n])});
        }
      }
    } else {
      w.row({"n", "arm", "fraction"});
      for (std::int64_t n = 0; n < trace.horizon(); ++n) {
        for (int j = 0; j < M; ++j) {
          w.row({std::to_string(n), std::to_string(j + 1),
                 format_double(trace.population_at(n, j))});
        }
      }
    }
  }

  {
    CsvWriter w(dir + "/rewards.csv");
    w.row({"n", "agent", "reward"});
    for (std::int64_t n = 0; n < trace.horizon(); ++n) {
      for (int i = 0; i < N; ++i) {
        w.row({std::to_string(n), std::to_string(i + 1),
               format_double(trace.realized(n, i))});
      }
    }
  }
}

}  // namespace mfbg
