#include "mfbg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mfbg/csv.hpp"
#include "mfbg/policy.hpp"

namespace mfbg {

CheckResult contraction_check_general(double theta, double beta, double eta) {
  const double margin = 1.0 - 4.0 * theta * (1.0 - eta) * beta;
  return {margin > 0.0, margin};
}

CheckResult contraction_check_linear(double theta, double beta, double eta) {
  const double margin = 1.0 - theta * (1.0 - eta) * beta / 2.0;
  return {margin > 0.0, margin};
}

CheckResult contraction_check_heterogeneous(double theta, std::span<const double> betas,
                                            bool linear) {
  if (betas.empty()) throw std::invalid_argument("betas must be nonempty");
  double beta_max = betas[0];
  for (double b : betas) {
    if (!(b > 0.0)) throw std::invalid_argument("beta must be > 0");
    beta_max = std::max(beta_max, b);
  }
  return linear ? contraction_check_linear(theta, beta_max, 0.0)
                : contraction_check_general(theta, beta_max, 0.0);
}

double empirical_contraction_estimate(const GameConfig& config, int num_pairs,
                                      Rng& rng, ExpectationMode mode,
                                      int mc_samples) {
  if (num_pairs < 1) throw std::invalid_argument("num_pairs must be >= 1");
  const int N = config.num_agents;
  const int M = config.num_arms;

  auto random_profile = [&]() {
    StateProfile s(N, M);
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < M; ++j) {
        s.at(i, j) = config.active(i, j) ? rng.uniform01() : 0.0;
      }
    }
    return s;
  };

  auto expected_rewards = [&](const StateProfile& s) {
    if (mode == ExpectationMode::kMeanField) {
      PopulationProfile f = mean_population(s, config);
      return reward_vector(config.reward_spec, f);
    }
    return expected_reward_mc(s, config, mc_samples, rng);
  };

  double best = 0.0;
  for (int p = 0; p < num_pairs; ++p) {
    StateProfile a = random_profile();
    StateProfile b = random_profile();
    const double den = inf_distance(a, b, config);
    if (den < 1e-12) continue;  // degenerate pair
    auto ra = expected_rewards(a);
    auto rb = expected_rewards(b);
    double num = 0.0;
    for (int j = 0; j < M; ++j) num = std::max(num, std::abs(ra[j] - rb[j]));
    best = std::max(best, num / den);
  }
  return best;
}

namespace {

// Inputs shared by the running-sum evaluation below.
struct ChangeSeriesContext {
  const RunTrace* trace;
  int agent;
  double beta;
  double lse0;  // ln sum_k Exp(beta s_0(k)) over the agent's arms
};

double log_sum_exp_initial(const RunTrace& trace, int agent, double beta) {
  const StateProfile& s0 = trace.initial_state();
  const GameConfig& cfg = trace.config;
  double mx = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < cfg.num_arms; ++j) {
    if (cfg.active(agent, j)) mx = std::max(mx, beta * s0.at(agent, j));
  }
  double z = 0.0;
  for (int j = 0; j < cfg.num_arms; ++j) {
    if (cfg.active(agent, j)) z += std::exp(beta * s0.at(agent, j) - mx);
  }
  return mx + std::log(z);
}

}  // namespace

std::vector<BoundPair> state_change_series(const RunTrace& trace, int agent, int arm) {
  const GameConfig& cfg = trace.config;
  if (agent < 0 || agent >= cfg.num_agents) throw std::invalid_argument("bad agent");
  if (arm < 0 || arm >= cfg.num_arms || !cfg.active(agent, arm)) {
    throw std::invalid_argument("arm not playable by agent");
  }
  if (!trace.full_snapshots()) {
    throw std::runtime_error("state change series needs full snapshots (stride 1)");
  }
  const double e_minus_2 = std::exp(1.0) - 2.0;
  const double beta = cfg.beta_of(agent);
  const int subset = cfg.subset_size(agent);
  const double lse0 = log_sum_exp_initial(trace, agent, beta);
  const double lhs0 = beta * trace.initial_state().at(agent, arm) - lse0;

  std::vector<BoundPair> out;
  out.reserve(trace.horizon());
  double lhs_changes = 0.0;
  double rhs = 0.0;
  for (std::int64_t n = 0; n < trace.horizon(); ++n) {
    const double eta_n = cfg.eta.at(n);
    if (eta_n >= 1.0) {
      throw std::runtime_error("state change bound undefined for eta = 1");
    }
    const StateProfile& cur = trace.state_at(n);
    const StateProfile& next = trace.state_at(n + 1);
    double inner_linear = 0.0;
    double inner_quad = 0.0;
    for (int j = 0; j < cfg.num_arms; ++j) {
      if (!cfg.active(agent, j)) continue;
      const double ds = next.at(agent, j) - cur.at(agent, j);
      if (ds == 0.0) continue;
      const double sig = trace.sigma_at(n, agent, j);
      inner_linear += (sig - eta_n / subset) * ds;
      inner_quad += sig * ds * ds;
    }
    rhs += (beta * inner_linear + e_minus_2 * beta * beta * inner_quad) / (1.0 - eta_n);
    lhs_changes += beta * (next.at(agent, arm) - cur.at(agent, arm));
    out.push_back({lhs0 + lhs_changes, rhs});
  }
  return out;
}

BoundPair state_change_bound(const RunTrace& trace, int agent, int arm,
                             std::int64_t cutoff) {
  if (cutoff < 0 || cutoff >= trace.horizon()) {
    throw std::invalid_argument("cutoff must lie in [0, horizon)");
  }
  return state_change_series(trace, agent, arm)[static_cast<std::size_t>(cutoff)];
}

VarianceReport population_variance_check(const GameConfig& config, int num_samples,
                                         std::uint64_t sample_seed) {
  if (num_samples < 30) throw std::invalid_argument("num_samples must be >= 30");
  const int N = config.num_agents;
  const int M = config.num_arms;

  VarianceReport report;
  report.mfe = solve_mfe(config);
  if (!report.mfe.converged) {
    throw std::runtime_error("equilibrium solve did not converge");
  }
  report.bound = 1.0 / (4.0 * static_cast<double>(N));

  const double eta = config.eta.limit();
  std::vector<double> sigma(static_cast<std::size_t>(N) * M);
  for (int i = 0; i < N; ++i) {
    std::span<double> row{sigma.data() + static_cast<std::size_t>(i) * M,
                          static_cast<std::size_t>(M)};
    sigma_row(config, report.mfe.state, i, eta, row);
  }

  report.analytic.assign(M, 0.0);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < M; ++j) {
      const double p = sigma[static_cast<std::size_t>(i) * M + j];
      report.analytic[j] += p * (1.0 - p);
    }
  }
  for (auto& v : report.analytic) v /= static_cast<double>(N) * N;

  Rng rng(substream_seed(sample_seed, kVarianceStream));
  std::vector<double> sum(M, 0.0), sum_sq(M, 0.0), fractions(M);
  for (int k = 0; k < num_samples; ++k) {
    std::fill(fractions.begin(), fractions.end(), 0.0);
    for (int i = 0; i < N; ++i) {
      std::span<const double> row{sigma.data() + static_cast<std::size_t>(i) * M,
                                  static_cast<std::size_t>(M)};
      fractions[sample_arm(row, rng)] += 1.0;
    }
    for (int j = 0; j < M; ++j) {
      const double f = fractions[j] / static_cast<double>(N);
      sum[j] += f;
      sum_sq[j] += f * f;
    }
  }
  report.empirical.assign(M, 0.0);
  for (int j = 0; j < M; ++j) {
    const double mean = sum[j] / num_samples;
    report.empirical[j] = (sum_sq[j] - num_samples * mean * mean) / (num_samples - 1);
  }
  return report;
}

std::vector<double> convergence_distance_series(const RunTrace& trace,
                                                const StateProfile& mfe) {
  std::vector<double> out;
  out.reserve(trace.snapshots.size());
  for (const auto& snap : trace.snapshots) {
    out.push_back(inf_distance(snap, mfe, trace.config));
  }
  return out;
}

void write_check_report_csv(const GameConfig& config, const std::string& path) {
  CsvWriter w(path);
  w.row({"check", "inputs", "satisfied", "margin"});
  const double theta = config.reward_spec.kind == RewardKind::kCustom
                           ? lipschitz_constant(config.reward_spec)
                           : config.reward_spec.theta;
  const double eta = config.eta.limit();
  auto emit = [&](const char* name, const std::string& inputs, CheckResult res) {
    w.row({name, inputs, res.satisfied ? "1" : "0", format_double(res.margin)});
  };
  if (!config.heterogeneous_beta()) {
    const double beta = config.betas[0];
    const std::string inputs = "theta=" + format_double(theta) +
                               ";beta=" + format_double(beta) +
                               ";eta=" + format_double(eta);
    emit("contraction_general", inputs, contraction_check_general(theta, beta, eta));
    emit("contraction_linear", inputs, contraction_check_linear(theta, beta, eta));
  } else {
    const std::string inputs = "theta=" + format_double(theta) +
                               ";beta_max=" + format_double(config.beta_max());
    emit("contraction_heterogeneous_general", inputs,
         contraction_check_heterogeneous(theta, config.betas, false));
    emit("contraction_heterogeneous_linear", inputs,
         contraction_check_heterogeneous(theta, config.betas, true));
  }
}

}  // namespace mfbg
