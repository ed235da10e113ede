#include "mfbg/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mfbg/csv.hpp"
#include "mfbg/policy.hpp"

namespace mfbg {

namespace {

void mean_population_into(const StateProfile& state, const GameConfig& config,
                          std::vector<double>& fractions,
                          std::vector<double>& sigma_buf) {
  const int N = config.num_agents;
  const int M = config.num_arms;
  const double eta = config.eta.limit();
  fractions.assign(M, 0.0);
  sigma_buf.resize(M);
  for (int i = 0; i < N; ++i) {
    sigma_row(config, state, i, eta, sigma_buf);
    for (int j = 0; j < M; ++j) fractions[j] += sigma_buf[j];
  }
  for (auto& f : fractions) f /= static_cast<double>(N);
}

void ode_rhs_into(const StateProfile& state, const GameConfig& config,
                  StateProfile& out, std::vector<double>& fractions,
                  std::vector<double>& sigma_buf, std::vector<double>& reward_buf) {
  const int N = config.num_agents;
  const int M = config.num_arms;
  const double eta = config.eta.limit();
  mean_population_into(state, config, fractions, sigma_buf);
  reward_buf.resize(M);
  for (int j = 0; j < M; ++j) {
    reward_buf[j] = reward_at(config.reward_spec, fractions, j);
  }
  for (int i = 0; i < N; ++i) {
    sigma_row(config, state, i, eta, sigma_buf);
    for (int j = 0; j < M; ++j) {
      out.at(i, j) =
          config.active(i, j) ? sigma_buf[j] * (reward_buf[j] - state.at(i, j)) : 0.0;
    }
  }
}

}  // namespace

PopulationProfile mean_population(const StateProfile& state, const GameConfig& config) {
  std::vector<double> fractions, sigma_buf;
  mean_population_into(state, config, fractions, sigma_buf);
  return PopulationProfile{std::move(fractions)};
}

StateProfile ode_rhs(const StateProfile& state, const GameConfig& config) {
  StateProfile out(state.num_agents, state.num_arms);
  std::vector<double> f, s, r;
  ode_rhs_into(state, config, out, f, s, r);
  return out;
}

OdeTrajectory integrate_ode(const StateProfile& initial, const GameConfig& config,
                            double t_end, double dt) {
  if (!(t_end > 0.0) || !(dt > 0.0)) throw std::invalid_argument("need t_end > 0 and dt > 0");

  OdeTrajectory traj;
  StateProfile y = initial;
  traj.times.push_back(0.0);
  traj.states.push_back(y);

  const std::size_t total = y.values.size();
  StateProfile k1(y.num_agents, y.num_arms), k2 = k1, k3 = k1, k4 = k1, tmp = k1;
  std::vector<double> fbuf, sbuf, rbuf;

  double t = 0.0;
  while (t < t_end - 1e-12) {
    const double h = std::min(dt, t_end - t);
    ode_rhs_into(y, config, k1, fbuf, sbuf, rbuf);
    for (std::size_t idx = 0; idx < total; ++idx) {
      tmp.values[idx] = y.values[idx] + 0.5 * h * k1.values[idx];
    }
    ode_rhs_into(tmp, config, k2, fbuf, sbuf, rbuf);
    for (std::size_t idx = 0; idx < total; ++idx) {
      tmp.values[idx] = y.values[idx] + 0.5 * h * k2.values[idx];
    }
    ode_rhs_into(tmp, config, k3, fbuf, sbuf, rbuf);
    for (std::size_t idx = 0; idx < total; ++idx) {
      tmp.values[idx] = y.values[idx] + h * k3.values[idx];
    }
    ode_rhs_into(tmp, config, k4, fbuf, sbuf, rbuf);
    for (std::size_t idx = 0; idx < total; ++idx) {
      y.values[idx] += (h / 6.0) * (k1.values[idx] + 2.0 * k2.values[idx] +
                                    2.0 * k3.values[idx] + k4.values[idx]);
    }

    for (double& v : y.values) {
      if (!std::isfinite(v)) throw std::runtime_error("ode state became non-finite");
      if (v < 0.0 || v > 1.0) {
        if (v < -1e-9 || v > 1.0 + 1e-9) {
          throw std::runtime_error("ode overshoot beyond tolerance; decrease dt");
        }
        v = std::clamp(v, 0.0, 1.0);
      }
    }
    t += h;
    traj.times.push_back(t);
    traj.states.push_back(y);
  }
  return traj;
}

namespace {

MfeSolution iterate_full(const GameConfig& config, StateProfile s,
                         const MfeOptions& opt) {
  const int N = config.num_agents;
  const int M = config.num_arms;
  if (!(opt.damping > 0.0 && opt.damping <= 1.0)) {
    throw std::invalid_argument("damping must lie in (0, 1]");
  }
  std::vector<double> fractions, sigma_buf, rewards(M);
  MfeSolution sol;
  for (std::int64_t it = 0; it < opt.max_iter; ++it) {
    mean_population_into(s, config, fractions, sigma_buf);
    for (int j = 0; j < M; ++j) rewards[j] = reward_at(config.reward_spec, fractions, j);
    double residual = 0.0;
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < M; ++j) {
        if (!config.active(i, j)) continue;
        residual = std::max(residual, std::abs(rewards[j] - s.at(i, j)));
      }
    }
    sol.iterations = it;
    sol.residual = residual;
    if (residual <= opt.tol) {
      sol.converged = true;
      sol.state = std::move(s);
      return sol;
    }
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < M; ++j) {
        if (!config.active(i, j)) continue;
        s.at(i, j) = (1.0 - opt.damping) * s.at(i, j) + opt.damping * rewards[j];
      }
    }
  }
  sol.iterations = opt.max_iter;
  sol.state = std::move(s);
  return sol;
}

}  // namespace

MfeSolution solve_mfe(const GameConfig& config, const MfeOptions& options) {
  StateProfile s(config.num_agents, config.num_arms, 0.5);
  for (int i = 0; i < config.num_agents; ++i) {
    for (int j = 0; j < config.num_arms; ++j) {
      if (!config.active(i, j)) s.at(i, j) = 0.0;
    }
  }
  return iterate_full(config, std::move(s), options);
}

MfeSolution solve_mfe_from(const GameConfig& config, const StateProfile& initial,
                           const MfeOptions& options) {
  if (initial.num_agents != config.num_agents || initial.num_arms != config.num_arms) {
    throw std::invalid_argument("initial profile shape mismatch");
  }
  return iterate_full(config, initial, options);
}

StateProfile broadcast_symmetric(const GameConfig& config,
                                 std::span<const double> arm_values) {
  if (arm_values.size() != static_cast<std::size_t>(config.num_arms)) {
    throw std::invalid_argument("arm value vector length must equal num_arms");
  }
  StateProfile s(config.num_agents, config.num_arms);
  for (int i = 0; i < config.num_agents; ++i) {
    for (int j = 0; j < config.num_arms; ++j) {
      s.at(i, j) = config.active(i, j) ? arm_values[j] : 0.0;
    }
  }
  return s;
}

MfeSolution solve_mfe_symmetric(const GameConfig& config,
                                std::span<const double> initial_arm_values,
                                const MfeOptions& options) {
  // Iterate on the shared arm vector; any fixed point assigns every agent the
  // same value on each playable arm, so nothing is lost by the reduction.
  if (initial_arm_values.size() != static_cast<std::size_t>(config.num_arms)) {
    throw std::invalid_argument("arm value vector length must equal num_arms");
  }
  if (!(options.damping > 0.0 && options.damping <= 1.0)) {
    throw std::invalid_argument("damping must lie in (0, 1]");
  }
  const int M = config.num_arms;
  std::vector<bool> arm_used(M, false);
  for (int i = 0; i < config.num_agents; ++i) {
    for (int j = 0; j < M; ++j) {
      if (config.active(i, j)) arm_used[j] = true;
    }
  }

  std::vector<double> v(initial_arm_values.begin(), initial_arm_values.end());
  std::vector<double> fractions, sigma_buf;
  StateProfile s = broadcast_symmetric(config, v);
  MfeSolution sol;
  for (std::int64_t it = 0; it < options.max_iter; ++it) {
    mean_population_into(s, config, fractions, sigma_buf);
    double residual = 0.0;
    std::vector<double> rewards(M, 0.0);
    for (int j = 0; j < M; ++j) {
      if (!arm_used[j]) continue;
      rewards[j] = reward_at(config.reward_spec, fractions, j);
      residual = std::max(residual, std::abs(rewards[j] - v[j]));
    }
    sol.iterations = it;
    sol.residual = residual;
    if (residual <= options.tol) {
      sol.converged = true;
      break;
    }
    for (int j = 0; j < M; ++j) {
      if (!arm_used[j]) continue;
      v[j] = (1.0 - options.damping) * v[j] + options.damping * rewards[j];
    }
    s = broadcast_symmetric(config, v);
  }
  if (!sol.converged) sol.iterations = options.max_iter;
  sol.state = broadcast_symmetric(config, v);
  return sol;
}

std::vector<double> lyapunov_series(const OdeTrajectory& trajectory,
                                    const StateProfile& mfe, const GameConfig& config) {
  std::vector<double> out;
  out.reserve(trajectory.states.size());
  for (const auto& st : trajectory.states) out.push_back(inf_distance(st, mfe, config));
  return out;
}

InterpolatedProcess::InterpolatedProcess(std::vector<double> knots,
                                         std::vector<StateProfile> states)
    : knots_(std::move(knots)), states_(std::move(states)) {
  if (knots_.size() != states_.size() || knots_.size() < 1) {
    throw std::invalid_argument("knots and states must match and be nonempty");
  }
}

StateProfile InterpolatedProcess::eval(double t) const {
  if (t < -1e-12 || t > total_time() + 1e-12) {
    throw std::invalid_argument("time outside the interpolated range");
  }
  t = std::clamp(t, 0.0, total_time());
  auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
  std::size_t n = static_cast<std::size_t>(it - knots_.begin());
  if (n == 0) return states_.front();
  if (n >= knots_.size()) return states_.back();
  --n;
  const double h = t - knots_[n];
  const double gap = knots_[n + 1] - knots_[n];
  StateProfile out = states_[n];
  const StateProfile& next = states_[n + 1];
  const double w = h / gap;
  for (std::size_t idx = 0; idx < out.values.size(); ++idx) {
    out.values[idx] += w * (next.values[idx] - out.values[idx]);
  }
  return out;
}

InterpolatedProcess interpolated_process(const RunTrace& trace,
                                         const StepsizeSchedule& schedule) {
  if (!trace.full_snapshots()) {
    throw std::runtime_error("interpolated process needs full snapshots (stride 1)");
  }
  std::vector<double> knots(trace.snapshots.size());
  knots[0] = 0.0;
  for (std::size_t n = 1; n < knots.size(); ++n) {
    knots[n] = knots[n - 1] + schedule.at(static_cast<std::int64_t>(n) - 1);
  }
  return InterpolatedProcess(std::move(knots), trace.snapshots);
}

double pseudotrajectory_distance(const InterpolatedProcess& interp,
                                 const GameConfig& config, double t, double window,
                                 double dt) {
  if (window < 0.0) throw std::invalid_argument("window must be >= 0");
  if (window == 0.0) return 0.0;
  if (t + window > interp.total_time() + 1e-12) {
    throw std::invalid_argument("interpolated process not defined beyond t + window");
  }
  StateProfile y = interp.eval(t);
  double d = inf_distance(interp.eval(t), y, config);  // 0 by construction

  StateProfile k1(y.num_agents, y.num_arms), k2 = k1, k3 = k1, k4 = k1, tmp = k1;
  std::vector<double> fbuf, sbuf, rbuf;
  const std::size_t total = y.values.size();
  double h_done = 0.0;
  while (h_done < window - 1e-12) {
    const double h = std::min(dt, window - h_done);
    ode_rhs_into(y, config, k1, fbuf, sbuf, rbuf);
    for (std::size_t idx = 0; idx < total; ++idx) {
      tmp.values[idx] = y.values[idx] + 0.5 * h * k1.values[idx];
    }
    ode_rhs_into(tmp, config, k2, fbuf, sbuf, rbuf);
    for (std::size_t idx = 0; idx < total; ++idx) {
      tmp.values[idx] = y.values[idx] + 0.5 * h * k2.values[idx];
    }
    ode_rhs_into(tmp, config, k3, fbuf, sbuf, rbuf);
    for (std::size_t idx = 0; idx < total; ++idx) {
      tmp.values[idx] = y.values[idx] + h * k3.values[idx];
    }
    ode_rhs_into(tmp, config, k4, fbuf, sbuf, rbuf);
    for (std::size_t idx = 0; idx < total; ++idx) {
      y.values[idx] += (h / 6.0) * (k1.values[idx] + 2.0 * k2.values[idx] +
                                    2.0 * k3.values[idx] + k4.values[idx]);
    }
    h_done += h;
    d = std::max(d, inf_distance(interp.eval(t + h_done), y, config));
  }
  return d;
}

std::vector<double> expected_reward_mc(const StateProfile& state,
                                       const GameConfig& config, int num_samples,
                                       Rng& rng) {
  if (num_samples < 1) throw std::invalid_argument("num_samples must be >= 1");
  const int N = config.num_agents;
  const int M = config.num_arms;
  const double eta = config.eta.limit();

  // Policy rows are fixed by the state; precompute them once.
  std::vector<double> sigma(static_cast<std::size_t>(N) * M);
  for (int i = 0; i < N; ++i) {
    std::span<double> row{sigma.data() + static_cast<std::size_t>(i) * M,
                          static_cast<std::size_t>(M)};
    sigma_row(config, state, i, eta, row);
  }

  std::vector<double> sums(M, 0.0);
  std::vector<double> fractions(M);
  for (int k = 0; k < num_samples; ++k) {
    std::fill(fractions.begin(), fractions.end(), 0.0);
    for (int i = 0; i < N; ++i) {
      std::span<const double> row{sigma.data() + static_cast<std::size_t>(i) * M,
                                  static_cast<std::size_t>(M)};
      fractions[sample_arm(row, rng)] += 1.0;
    }
    for (auto& f : fractions) f /= static_cast<double>(N);
    for (int j = 0; j < M; ++j) {
      sums[j] += reward_at(config.reward_spec, fractions, j);
    }
  }
  for (auto& s : sums) s /= static_cast<double>(num_samples);
  return sums;
}

void export_trajectory_csv(const OdeTrajectory& trajectory, const GameConfig& config,
                           const std::string& path) {
  CsvWriter w(path);
  w.row({"t", "agent", "arm", "value"});
  for (std::size_t k = 0; k < trajectory.states.size(); ++k) {
    const auto& st = trajectory.states[k];
    for (int i = 0; i < st.num_agents; ++i) {
      for (int j = 0; j < st.num_arms; ++j) {
        if (!config.active(i, j)) continue;
        w.row({format_double(trajectory.times[k]), std::to_string(i + 1),
               std::to_string(j + 1), format_double(st.at(i, j))});
      }
    }
  }
}

}  // namespace mfbg
