#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mfbg/reward.hpp"
#include "mfbg/rng.hpp"
#include "mfbg/state.hpp"
#include "mfbg/stepsize.hpp"

namespace mfbg {

// Exploration weight. kappa == 0 means a constant eta0; kappa > 0 gives the
// diminishing schedule eta0/(n+1)^kappa shared by all agents.
struct EtaSpec {
  double eta0 = 0.2;
  double kappa = 0.0;

  bool diminishing() const { return kappa > 0.0; }
  double at(std::int64_t n) const;
  // Value the schedule settles at; this is what the deterministic
  // (continuous-time) computations use.
  double limit() const { return diminishing() ? 0.0 : eta0; }
};

// Full experiment description. `betas` holds either one shared value or one
// value per agent. `arm_subsets` is empty when every agent may play every
// arm; otherwise it lists 0-based arm ids per agent.
struct GameConfig {
  int num_agents = 100;
  int num_arms = 4;
  std::int64_t horizon = 2000;
  std::vector<double> betas{0.5};
  EtaSpec eta;
  double stepsize_alpha = 1.0;
  RewardSpec reward_spec;
  std::vector<std::vector<int>> arm_subsets;
  std::uint64_t seed = 1;
  int snapshot_stride = 1;

  double beta_of(int agent) const {
    return betas.size() == 1 ? betas[0] : betas[agent];
  }
  double beta_max() const;
  bool heterogeneous_beta() const { return betas.size() > 1; }
  bool has_subsets() const { return !arm_subsets.empty(); }
  int subset_size(int agent) const {
    return has_subsets() ? static_cast<int>(arm_subsets[agent].size()) : num_arms;
  }
  bool active(int agent, int arm) const;
  StepsizeSchedule stepsize() const { return {stepsize_alpha}; }
};

// Returns the config unchanged when every invariant holds; otherwise throws
// std::invalid_argument naming the first violated field.
GameConfig validate_config(const GameConfig& config);

// Validates, then fills reward_spec.arm_thetas from the run seed if they were
// not pinned explicitly.
GameConfig resolve_config(const GameConfig& config);

Rng agent_rng(const GameConfig& config, int agent);

// Each agent draws num_arms uniforms from its own stream, in arm order;
// entries off the agent's subset are zeroed afterwards so the draw layout
// never depends on the subsets.
StateProfile init_state_profile(const GameConfig& config);
StateProfile init_state_profile(const GameConfig& config, std::vector<Rng>& agent_rngs);

// Sup-norm over entries both computations may touch.
double inf_distance(const StateProfile& a, const StateProfile& b, const GameConfig& config);

// Config file round trip (JSON, documented in the README).
GameConfig parse_config_json(const std::string& text);
GameConfig load_config_file(const std::string& path);
std::string config_to_json(const GameConfig& config);
void save_config_file(const GameConfig& config, const std::string& path);

}  // namespace mfbg
