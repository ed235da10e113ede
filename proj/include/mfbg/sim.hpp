#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mfbg/config.hpp"
#include "mfbg/state.hpp"

namespace mfbg {

// What one slot produced: simultaneous actions, the resulting population
// profile, realized rewards, and the policy matrix the actions were drawn
// from.
struct SlotRecord {
  std::vector<std::int32_t> actions;
  PopulationProfile population;
  std::vector<double> rewards;
  std::vector<double> sigma;  // num_agents x num_arms, row-major
};

// Full record of one run. Slot data is stored columnar; state snapshots keep
// slot 0, every snapshot_stride-th slot and the terminal state.
struct RunTrace {
  GameConfig config;  // resolved: arm_thetas filled in
  std::vector<std::int32_t> actions;     // T x N
  std::vector<double> population;        // T x M
  std::vector<double> realized_rewards;  // T x N
  std::vector<double> sigma;             // T x N x M
  std::vector<std::int64_t> snapshot_slots;
  std::vector<StateProfile> snapshots;

  std::int64_t horizon() const { return config.horizon; }
  int num_agents() const { return config.num_agents; }
  int num_arms() const { return config.num_arms; }

  std::int32_t action(std::int64_t n, int agent) const {
    return actions[static_cast<std::size_t>(n) * num_agents() + agent];
  }
  double population_at(std::int64_t n, int arm) const {
    return population[static_cast<std::size_t>(n) * num_arms() + arm];
  }
  std::span<const double> population_row(std::int64_t n) const {
    return {population.data() + static_cast<std::size_t>(n) * num_arms(),
            static_cast<std::size_t>(num_arms())};
  }
  double realized(std::int64_t n, int agent) const {
    return realized_rewards[static_cast<std::size_t>(n) * num_agents() + agent];
  }
  double sigma_at(std::int64_t n, int agent, int arm) const {
    return sigma[(static_cast<std::size_t>(n) * num_agents() + agent) * num_arms() + arm];
  }
  std::span<const double> sigma_row_at(std::int64_t n, int agent) const {
    return {sigma.data() +
                (static_cast<std::size_t>(n) * num_agents() + agent) * num_arms(),
            static_cast<std::size_t>(num_arms())};
  }

  bool full_snapshots() const {
    return static_cast<std::int64_t>(snapshots.size()) == horizon() + 1;
  }
  // State at the start of slot n (n == horizon gives the terminal state);
  // throws when the slot was thinned out.
  const StateProfile& state_at(std::int64_t n) const;
  const StateProfile& initial_state() const { return snapshots.front(); }
  const StateProfile& terminal_state() const { return snapshots.back(); }
};

// f(j) = (1/N) #{i : a_i == j}. Entries are exact multiples of 1/N.
PopulationProfile population_profile(std::span<const std::int32_t> actions,
                                     int num_agents, int num_arms);

// Advances the state by one slot in place and reports what happened. All
// agents act simultaneously: the population profile is computed from every
// sampled action before any state moves.
SlotRecord step(StateProfile& state, const GameConfig& config, std::int64_t n,
                std::span<Rng> agent_rngs);

// Runs the game from a fresh seeded initial state for config.horizon slots.
// Bit-identical across repeated calls with the same config.
RunTrace run(const GameConfig& config);

// max over the agent's arms of sum_n [ r(f_n, j) - sum_k sigma_n(k) r(f_n, k) ].
// Can be negative for a stochastic policy.
double empirical_regret(const RunTrace& trace, int agent);
std::vector<double> empirical_regrets(const RunTrace& trace);
double mean_regret(const RunTrace& trace);

// Mean over agents of each agent's summed realized reward.
double cumulative_reward(const RunTrace& trace);

// states.csv / population.csv / rewards.csv under `dir`. A positive
// smooth_window adds a centered moving-average column for plotting.
void export_trace_csv(const RunTrace& trace, const std::string& dir,
                      int smooth_window = 0);

}  // namespace mfbg
