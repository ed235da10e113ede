#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mfbg/config.hpp"
#include "mfbg/sim.hpp"
#include "mfbg/state.hpp"
#include "mfbg/stepsize.hpp"

namespace mfbg {

struct OdeTrajectory {
  std::vector<double> times;
  std::vector<StateProfile> states;
};

struct MfeSolution {
  StateProfile state;
  double residual = 0.0;  // ||R(s) - s||_inf at the returned state
  std::int64_t iterations = 0;
  bool converged = false;
};

struct MfeOptions {
  double tol = 1e-10;
  std::int64_t max_iter = 100000;
  double damping = 0.5;  // s <- (1-damping) s + damping R(s)
};

// Deterministic closure of the population profile:
// f(j) = (1/N) sum_i sigma(s^i, j), summing only agents that may play j.
// Diminishing exploration schedules are evaluated at their limit.
PopulationProfile mean_population(const StateProfile& state, const GameConfig& config);

// d s^i(j) / dt = sigma(s^i, j) (r(f(s), j) - s^i(j))
StateProfile ode_rhs(const StateProfile& state, const GameConfig& config);

// Classical 4th-order fixed-step integration. Entries may be clamped back
// into [0, 1] only for overshoot below 1e-9; anything larger means dt is too
// coarse and raises.
OdeTrajectory integrate_ode(const StateProfile& initial, const GameConfig& config,
                            double t_end, double dt);

// Damped fixed-point iteration on R(s)^i(j) = r(f(s), j), started from the
// all-0.5 profile unless a start is given. Non-convergence is reported via
// the flag, not thrown: callers probe non-contraction regimes on purpose.
MfeSolution solve_mfe(const GameConfig& config, const MfeOptions& options = {});
MfeSolution solve_mfe_from(const GameConfig& config, const StateProfile& initial,
                           const MfeOptions& options = {});

// Same iteration on one shared arm-value vector, broadcast over agents.
// Fixed points are identical across agents, so this is the natural space for
// multi-start searches; the full-matrix form above handles arbitrary starts.
MfeSolution solve_mfe_symmetric(const GameConfig& config,
                                std::span<const double> initial_arm_values,
                                const MfeOptions& options = {});

// Every agent gets arm_values on its playable arms, 0 elsewhere.
StateProfile broadcast_symmetric(const GameConfig& config,
                                 std::span<const double> arm_values);

// V(t_k) = ||s(t_k) - mfe||_inf along a trajectory.
std::vector<double> lyapunov_series(const OdeTrajectory& trajectory,
                                    const StateProfile& mfe, const GameConfig& config);

// Piecewise-linear embedding of a discrete run at knots tau_n = sum_{k<n} gamma_k.
class InterpolatedProcess {
 public:
  InterpolatedProcess(std::vector<double> knots, std::vector<StateProfile> states);

  double total_time() const { return knots_.back(); }
  std::span<const double> knots() const { return knots_; }
  const std::vector<StateProfile>& knot_states() const { return states_; }
  // Linear between knots; t must lie in [0, total_time()].
  StateProfile eval(double t) const;

 private:
  std::vector<double> knots_;
  std::vector<StateProfile> states_;
};

// Requires full snapshots (stride 1).
InterpolatedProcess interpolated_process(const RunTrace& trace,
                                         const StepsizeSchedule& schedule);

// sup_{0<=h<=window} || interp(t+h) - Phi_h(interp(t)) ||_inf on the dt grid,
// where Phi is the flow of the deterministic dynamics.
double pseudotrajectory_distance(const InterpolatedProcess& interp,
                                 const GameConfig& config, double t, double window,
                                 double dt);

// Monte-Carlo estimate of E[r(f, j)] under sigma(state); validation aid for
// the deterministic closure above.
std::vector<double> expected_reward_mc(const StateProfile& state,
                                       const GameConfig& config, int num_samples,
                                       Rng& rng);

// Trajectory export: same layout as states.csv with a real-valued t column.
void export_trajectory_csv(const OdeTrajectory& trajectory, const GameConfig& config,
                           const std::string& path);

}  // namespace mfbg
