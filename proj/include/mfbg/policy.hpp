#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mfbg/config.hpp"
#include "mfbg/rng.hpp"
#include "mfbg/state.hpp"

namespace mfbg {

// sigma(s, j) = (1-eta) Exp(beta s(j)) / sum_k Exp(beta s(k)) + eta/K over the
// K arms in `state`. Exponentials are max-subtracted so large beta never
// overflows. Every entry is >= eta/K and the vector sums to 1.
void hedge_probabilities(std::span<const double> state, double beta, double eta,
                         std::span<double> out);
std::vector<double> hedge_probabilities(std::span<const double> state, double beta,
                                        double eta);

// Policy row of one agent in global arm coordinates; arms outside the agent's
// subset get probability 0. eta_n is the exploration weight for the slot.
void sigma_row(const GameConfig& config, const StateProfile& state, int agent,
               double eta_n, std::span<double> out);

// Inverse-CDF draw over a simplex vector with left-closed intervals.
int sample_arm(std::span<const double> probs, Rng& rng);

// Exact gradient of sigma(state, arm) with respect to every state entry:
//   l -> (1-eta) beta p(arm) (1{arm==l} - p(l)),  p = softmax(beta state).
std::vector<double> policy_jacobian(std::span<const double> state, double beta,
                                    double eta, int arm);

// eta0 / (n+1)^kappa
double eta_schedule(std::int64_t n, double eta0, double kappa);

// Helper for heterogeneous experiments: one beta per agent, U[lo, hi].
std::vector<double> sample_uniform_betas(int num_agents, double lo, double hi, Rng& rng);

}  // namespace mfbg
