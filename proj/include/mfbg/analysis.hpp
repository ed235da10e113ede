#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mfbg/config.hpp"
#include "mfbg/meanfield.hpp"
#include "mfbg/sim.hpp"

namespace mfbg {

struct CheckResult {
  bool satisfied = false;
  double margin = 0.0;  // positive iff satisfied
};

// General rewards: 4 theta (1-eta) beta < 1.
CheckResult contraction_check_general(double theta, double beta, double eta);
// Linear own-arm rewards: theta (1-eta) beta / 2 < 1.
CheckResult contraction_check_linear(double theta, double beta, double eta);
// Heterogeneous agents: beta_max replaces beta and the exploration weight is
// taken at its worst case (eta -> 0).
CheckResult contraction_check_heterogeneous(double theta, std::span<const double> betas,
                                            bool linear);

enum class ExpectationMode { kMeanField, kMonteCarlo };

// max over random profile pairs of
//   || E[r](s_a) - E[r](s_b) ||_inf / || s_a - s_b ||_inf
// with the expected reward vector taken from the deterministic closure or
// estimated from mc_samples sampled action profiles.
double empirical_contraction_estimate(const GameConfig& config, int num_pairs,
                                      Rng& rng, ExpectationMode mode,
                                      int mc_samples = 10000);

struct BoundPair {
  double lhs = 0.0;
  double rhs = 0.0;
};

// Both sides of the cumulative state-change inequality for one agent and arm
// at cutoff K, evaluated along a recorded trace:
//   lhs = beta s_0(j) + sum_{n<=K} beta ds_n(j) - ln sum_k Exp(beta s_0(k))
//   rhs = sum_{n<=K} [ beta (sigma_n - (eta_n/M) 1) . ds_n
//                      + (e-2) beta^2 sigma_n . ds_n^2 ] / (1 - eta_n)
// with ds_n the realized per-slot state change. Heterogeneous runs use the
// agent's own beta and the slot's eta. Rejected when any slot has eta == 1.
BoundPair state_change_bound(const RunTrace& trace, int agent, int arm,
                             std::int64_t cutoff);
// All cutoffs 0..T-1 in one pass.
std::vector<BoundPair> state_change_series(const RunTrace& trace, int agent, int arm);

struct VarianceReport {
  std::vector<double> empirical;  // per-arm sample variance of f at the MFE
  std::vector<double> analytic;   // per-arm sum_i sigma(1-sigma)/N^2
  double bound = 0.0;             // 1/(4N)
  MfeSolution mfe;
};

// Samples action profiles from the policy at the solved equilibrium and
// compares the per-arm variance of the resulting population profile against
// the 1/(4N) bound. Throws when the equilibrium solve does not converge.
VarianceReport population_variance_check(const GameConfig& config, int num_samples,
                                         std::uint64_t sample_seed);

// e_n = ||s_n - mfe||_inf at every snapshot slot of the trace.
std::vector<double> convergence_distance_series(const RunTrace& trace,
                                                const StateProfile& mfe);

// One row per check: name, inputs, verdict, margin.
void write_check_report_csv(const GameConfig& config, const std::string& path);

}  // namespace mfbg
