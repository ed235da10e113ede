#include "mfbg/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mfbg {

void hedge_probabilities(std::span<const double> state, double beta, double eta,
                         std::span<double> out) {
  const std::size_t k = state.size();
  if (k == 0 || out.size() != k) throw std::invalid_argument("bad state size");
  double mx = state[0];
  for (double v : state) {
    if (!std::isfinite(v)) throw std::runtime_error("non-finite state entry");
    mx = std::max(mx, v);
  }
  double z = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    out[j] = std::exp(beta * (state[j] - mx));
    z += out[j];
  }
  const double mix = eta / static_cast<double>(k);
  for (std::size_t j = 0; j < k; ++j) out[j] = (1.0 - eta) * out[j] / z + mix;
}

std::vector<double> hedge_probabilities(std::span<const double> state, double beta,
                                        double eta) {
  std::vector<double> out(state.size());
  hedge_probabilities(state, beta, eta, out);
  return out;
}

void sigma_row(const GameConfig& config, const StateProfile& state, int agent,
               double eta_n, std::span<double> out) {
  const double beta = config.beta_of(agent);
  if (!config.has_subsets()) {
    hedge_probabilities(state.row(agent), beta, eta_n, out);
    return;
  }
  const auto& sub = config.arm_subsets[agent];
  std::vector<double> local(sub.size());
  for (std::size_t k = 0; k < sub.size(); ++k) local[k] = state.at(agent, sub[k]);
  std::vector<double> probs(sub.size());
  hedge_probabilities(local, beta, eta_n, probs);
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t k = 0; k < sub.size(); ++k) out[sub[k]] = probs[k];
}

int sample_arm(std::span<const double> probs, Rng& rng) {
  double sum = 0.0;
  for (double p : probs) {
    if (p < -1e-9) throw std::runtime_error("negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::runtime_error("probabilities do not sum to 1");
  const double u = rng.uniform01();
  double cum = 0.0;
  for (std::size_t j = 0; j < probs.size(); ++j) {
    cum += probs[j];
    if (u < cum) return static_cast<int>(j);
  }
  // u landed in the rounding tail; return the last arm with mass.
  for (std::size_t j = probs.size(); j-- > 0;) {
    if (probs[j] > 0.0) return static_cast<int>(j);
  }
  return static_cast<int>(probs.size()) - 1;
}

std::vector<double> policy_jacobian(std::span<const double> state, double beta,
                                    double eta, int arm) {
  // Only the softmax part depends on the state, so the gradient carries the
  // pure softmax p, not the eta-mixed probabilities.
  const std::size_t k = state.size();
  double mx = state[0];
  for (double v : state) {
    if (!std::isfinite(v)) throw std::runtime_error("non-finite state entry");
    mx = std::max(mx, v);
  }
  std::vector<double> p(k);
  double z = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    p[j] = std::exp(beta * (state[j] - mx));
    z += p[j];
  }
  for (auto& v : p) v /= z;
  std::vector<double> grad(k);
  for (std::size_t l = 0; l < k; ++l) {
    const double indicator = (static_cast<std::size_t>(arm) == l) ? 1.0 : 0.0;
    grad[l] = (1.0 - eta) * beta * p[arm] * (indicator - p[l]);
  }
  return grad;
}

double eta_schedule(std::int64_t n, double eta0, double kappa) {
  if (!(eta0 >= 0.0 && eta0 <= 1.0)) throw std::invalid_argument("eta0 out of range [0,1]");
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be > 0");
  return eta0 / std::pow(static_cast<double>(n + 1), kappa);
}

std::vector<double> sample_uniform_betas(int num_agents, double lo, double hi, Rng& rng) {
  if (!(lo > 0.0 && hi >= lo)) throw std::invalid_argument("need 0 < lo <= hi");
  std::vector<double> out(num_agents);
  for (auto& b : out) b = rng.uniform(lo, hi);
  return out;
}

}  // namespace mfbg
