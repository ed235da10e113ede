#include "mfbg/reward.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mfbg {

namespace {

void check_fraction(double f_j) {
  if (!(f_j >= -1e-9 && f_j <= 1.0 + 1e-9)) {
    throw std::runtime_error("population fraction outside [0,1]: " + std::to_string(f_j));
  }
}

}  // namespace

const char* reward_kind_name(RewardKind kind) {
  switch (kind) {
    case RewardKind::kGeneral: return "general";
    case RewardKind::kLinear: return "linear";
    case RewardKind::kCustom: return "custom";
  }
  return "?";
}

RewardKind reward_kind_from_name(const std::string& name) {
  if (name == "general") return RewardKind::kGeneral;
  if (name == "linear") return RewardKind::kLinear;
  if (name == "custom") return RewardKind::kCustom;
  throw std::invalid_argument("unknown reward kind: " + name);
}

std::vector<double> sample_arm_thetas(double theta, int num_arms, Rng& rng) {
  std::vector<double> out(num_arms);
  for (auto& t : out) t = rng.uniform(0.8 * theta, theta);
  return out;
}

double general_reward(double f_j, double theta_j) {
  check_fraction(f_j);
  return 1.0 / (1.0 + theta_j * f_j);
}

double linear_reward(double f_j, double theta_j) {
  check_fraction(f_j);
  return 1.0 - theta_j * f_j;
}

double reward_at(const RewardSpec& spec, std::span<const double> fractions, int arm) {
  switch (spec.kind) {
    case RewardKind::kGeneral:
      return general_reward(fractions[arm], spec.arm_thetas[arm]);
    case RewardKind::kLinear:
      return linear_reward(fractions[arm], spec.arm_thetas[arm]);
    case RewardKind::kCustom: {
      double r = spec.custom_fn(fractions, arm);
      if (!(r >= -1e-9 && r <= 1.0 + 1e-9)) {
        throw std::runtime_error("custom reward outside [0,1]: " + std::to_string(r));
      }
      return r;
    }
  }
  throw std::logic_error("unreachable reward kind");
}

std::vector<double> reward_vector(const RewardSpec& spec, const PopulationProfile& f) {
  std::vector<double> out(f.num_arms());
  for (int j = 0; j < f.num_arms(); ++j) out[j] = reward_at(spec, f.fractions, j);
  return out;
}

double lipschitz_constant(const RewardSpec& spec) {
  switch (spec.kind) {
    case RewardKind::kGeneral:
    case RewardKind::kLinear:
      // |dr/df_j| <= theta(j) <= theta for both families.
      return spec.theta;
    case RewardKind::kCustom:
      if (spec.custom_lipschitz < 0.0) {
        throw std::runtime_error("custom reward has no declared lipschitz constant");
      }
      return spec.custom_lipschitz;
  }
  throw std::logic_error("unreachable reward kind");
}

}  // namespace mfbg
