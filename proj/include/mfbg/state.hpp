#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mfbg {

// Learned-reward matrix, one row per agent, one column per arm.
// Entries live in [0, 1]; columns outside an agent's arm subset stay at 0
// and are ignored by every computation.
struct StateProfile {
  int num_agents = 0;
  int num_arms = 0;
  std::vector<double> values;  // row-major

  StateProfile() = default;
  StateProfile(int n, int m, double fill = 0.0)
      : num_agents(n), num_arms(m),
        values(static_cast<std::size_t>(n) * static_cast<std::size_t>(m), fill) {}

  double& at(int agent, int arm) {
    return values[static_cast<std::size_t>(agent) * num_arms + arm];
  }
  double at(int agent, int arm) const {
    return values[static_cast<std::size_t>(agent) * num_arms + arm];
  }
  std::span<double> row(int agent) {
    return {values.data() + static_cast<std::size_t>(agent) * num_arms,
            static_cast<std::size_t>(num_arms)};
  }
  std::span<const double> row(int agent) const {
    return {values.data() + static_cast<std::size_t>(agent) * num_arms,
            static_cast<std::size_t>(num_arms)};
  }
  bool same_shape(const StateProfile& other) const {
    return num_agents == other.num_agents && num_arms == other.num_arms;
  }
};

// Fraction of agents on each arm at one slot; a point on the simplex.
struct PopulationProfile {
  std::vector<double> fractions;

  int num_arms() const { return static_cast<int>(fractions.size()); }
  double operator[](int arm) const { return fractions[arm]; }
};

}  // namespace mfbg
