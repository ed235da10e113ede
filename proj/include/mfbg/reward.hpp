#pragma once

#include <functional>
#include <span>
#include <vector>

#include "mfbg/rng.hpp"
#include "mfbg/state.hpp"

namespace mfbg {

enum class RewardKind { kGeneral, kLinear, kCustom };

// Mean-field reward family. Built-in families read only the played arm's
// population fraction:
//   general: r(f, j) = 1 / (1 + theta(j) f(j))
//   linear:  r(f, j) = 1 - theta(j) f(j)
// with per-arm parameters theta(j) in [0.8*theta, theta].
//
// Custom functions must declare a Lipschitz constant and keep outputs in
// [0, 1], otherwise the contraction checks would be meaningless.
struct RewardSpec {
  RewardKind kind = RewardKind::kGeneral;
  double theta = 0.5;
  std::vector<double> arm_thetas;  // sampled from the run seed when empty

  std::function<double(std::span<const double>, int)> custom_fn;
  double custom_lipschitz = -1.0;
  bool custom_reads_full_profile = true;

  // True when r(f, j) depends on f(j) alone.
  bool own_arm_only() const {
    return kind != RewardKind::kCustom || !custom_reads_full_profile;
  }
};

const char* reward_kind_name(RewardKind kind);
RewardKind reward_kind_from_name(const std::string& name);

// One draw of theta(j) ~ U[0.8*theta, theta] per arm.
std::vector<double> sample_arm_thetas(double theta, int num_arms, Rng& rng);

double general_reward(double f_j, double theta_j);
double linear_reward(double f_j, double theta_j);

// r(f, j) for one arm; the per-arm form keeps large-M callers from paying
// for arms they never look at.
double reward_at(const RewardSpec& spec, std::span<const double> fractions, int arm);

std::vector<double> reward_vector(const RewardSpec& spec, const PopulationProfile& f);

// A constant L with |r(f,j) - r(f',j)| <= L |f(j) - f'(j)| for both built-in
// families; the declared constant for custom rewards.
double lipschitz_constant(const RewardSpec& spec);

}  // namespace mfbg
