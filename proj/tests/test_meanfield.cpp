#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "mfbg/meanfield.hpp"
#include "mfbg/policy.hpp"
#include "mfbg/sim.hpp"

using namespace mfbg;

namespace {

GameConfig contraction_config(int n = 100) {
  GameConfig cfg;
  cfg.num_agents = n;
  cfg.num_arms = 4;
  cfg.horizon = 2000;
  cfg.betas = {0.5};
  cfg.eta = {0.2, 0.0};
  cfg.stepsize_alpha = 1.0;
  cfg.reward_spec.kind = RewardKind::kGeneral;
  cfg.reward_spec.theta = 0.5;
  cfg.seed = 1;
  return cfg;
}

}  // namespace

TEST_CASE("mean population: shared state reproduces one policy row") {
  GameConfig cfg = resolve_config(contraction_config(7));
  std::vector<double> v{0.9, 0.2, 0.5, 0.7};
  StateProfile s = broadcast_symmetric(cfg, v);
  PopulationProfile f = mean_population(s, cfg);
  auto sigma = hedge_probabilities(v, 0.5, 0.2);
  for (int j = 0; j < 4; ++j) CHECK(f[j] == doctest::Approx(sigma[j]).epsilon(1e-14));
}

TEST_CASE("mean population: eta = 1 is uniform") {
  GameConfig cfg = contraction_config(5);
  cfg.eta = {1.0, 0.0};
  cfg = resolve_config(cfg);
  StateProfile s = init_state_profile(cfg);
  PopulationProfile f = mean_population(s, cfg);
  for (int j = 0; j < 4; ++j) CHECK(f[j] == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("mean population: two-agent hand average") {
  GameConfig cfg = contraction_config(2);
  cfg.num_arms = 2;
  cfg.betas = {1.0};
  cfg.eta = {0.0, 0.0};
  cfg = resolve_config(cfg);
  StateProfile s(2, 2);
  s.at(0, 0) = 0.9;
  s.at(0, 1) = 0.1;
  s.at(1, 0) = 0.3;
  s.at(1, 1) = 0.6;
  PopulationProfile f = mean_population(s, cfg);
  const double p0 = std::exp(0.9) / (std::exp(0.9) + std::exp(0.1));
  const double q0 = std::exp(0.3) / (std::exp(0.3) + std::exp(0.6));
  CHECK(f[0] == doctest::Approx(0.5 * (p0 + q0)).epsilon(1e-14));
  CHECK(f[0] + f[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mean population is a simplex point") {
  GameConfig cfg = contraction_config(9);
  cfg.arm_subsets.assign(9, {});
  for (int i = 0; i < 9; ++i) {
    cfg.arm_subsets[i] = (i % 2 == 0) ? std::vector<int>{0, 1, 2} : std::vector<int>{1, 3};
  }
  cfg = resolve_config(cfg);
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    StateProfile s(9, 4);
    for (int i = 0; i < 9; ++i) {
      for (int j = 0; j < 4; ++j) {
        s.at(i, j) = cfg.active(i, j) ? rng.uniform01() : 0.0;
      }
    }
    PopulationProfile f = mean_population(s, cfg);
    double sum = 0.0;
    for (int j = 0; j < 4; ++j) {
      CHECK(f[j] >= 0.0);
      CHECK(f[j] <= 1.0);
      sum += f[j];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("ode right side vanishes at the fixed point") {
  GameConfig cfg = resolve_config(contraction_config(40));
  MfeSolution mfe = solve_mfe(cfg);
  REQUIRE(mfe.converged);
  StateProfile d = ode_rhs(mfe.state, cfg);
  for (double v : d.values) CHECK(std::abs(v) <= 1e-9);
}

TEST_CASE("ode right side: symmetric linear closed form") {
  GameConfig cfg = contraction_config(10);
  cfg.eta = {1.0, 0.0};
  cfg.reward_spec.kind = RewardKind::kLinear;
  cfg.reward_spec.theta = 0.8;
  cfg.reward_spec.arm_thetas = {0.8, 0.8, 0.8, 0.8};
  cfg = resolve_config(cfg);
  std::vector<double> v{0.3, 0.5, 0.8, 0.2};
  StateProfile s = broadcast_symmetric(cfg, v);
  StateProfile d = ode_rhs(s, cfg);
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 4; ++j) {
      const double expected = 0.25 * (1.0 - 0.8 / 4.0 - v[j]);
      CHECK(d.at(i, j) == doctest::Approx(expected).epsilon(1e-13));
    }
  }
}

TEST_CASE("ode derivative sign follows the reward gap") {
  GameConfig cfg = resolve_config(contraction_config(12));
  Rng rng(10);
  StateProfile s(12, 4);
  for (auto& v : s.values) v = rng.uniform01();
  PopulationProfile f = mean_population(s, cfg);
  auto r = reward_vector(cfg.reward_spec, f);
  StateProfile d = ode_rhs(s, cfg);
  for (int i = 0; i < 12; ++i) {
    for (int j = 0; j < 4; ++j) {
      const double gap = r[j] - s.at(i, j);
      if (gap > 1e-12) CHECK(d.at(i, j) > 0.0);
      if (gap < -1e-12) CHECK(d.at(i, j) < 0.0);
    }
  }
}

TEST_CASE("integrator: equilibrium start stays put") {
  GameConfig cfg = resolve_config(contraction_config(20));
  MfeSolution mfe = solve_mfe(cfg);
  REQUIRE(mfe.converged);
  OdeTrajectory traj = integrate_ode(mfe.state, cfg, 5.0, 0.05);
  CHECK(inf_distance(traj.states.back(), mfe.state, cfg) <= 1e-8);
}

TEST_CASE("integrator: long horizon lands on the solved fixed point") {
  GameConfig cfg = resolve_config(contraction_config(30));
  StateProfile s0 = init_state_profile(cfg);
  OdeTrajectory traj = integrate_ode(s0, cfg, 80.0, 0.01);
  MfeSolution mfe = solve_mfe(cfg);
  REQUIRE(mfe.converged);
  CHECK(inf_distance(traj.states.back(), mfe.state, cfg) <= 1e-4);
}

TEST_CASE("integrator: step halving shows fourth order") {
  GameConfig cfg = resolve_config(contraction_config(10));
  StateProfile s0 = init_state_profile(cfg);
  auto terminal = [&](double dt) {
    return integrate_ode(s0, cfg, 2.0, dt).states.back();
  };
  StateProfile y1 = terminal(0.2), y2 = terminal(0.1), y4 = terminal(0.05);
  const double e1 = inf_distance(y1, y2, cfg);
  const double e2 = inf_distance(y2, y4, cfg);
  const double order = std::log2(e1 / e2);
  CHECK(order >= 3.5);
  CHECK(order <= 4.5);
}

TEST_CASE("integrator rejects bad arguments") {
  GameConfig cfg = resolve_config(contraction_config(5));
  StateProfile s0 = init_state_profile(cfg);
  CHECK_THROWS(integrate_ode(s0, cfg, -1.0, 0.1));
  CHECK_THROWS(integrate_ode(s0, cfg, 1.0, 0.0));
}

TEST_CASE("solver: closed form under forced uniform play") {
  GameConfig cfg = contraction_config(15);
  cfg.eta = {1.0, 0.0};
  cfg.reward_spec.kind = RewardKind::kLinear;
  cfg.reward_spec.theta = 0.9;
  cfg = resolve_config(cfg);
  MfeSolution mfe = solve_mfe(cfg);
  REQUIRE(mfe.converged);
  for (int i = 0; i < 15; ++i) {
    for (int j = 0; j < 4; ++j) {
      const double expected = 1.0 - cfg.reward_spec.arm_thetas[j] / 4.0;
      CHECK(mfe.state.at(i, j) == doctest::Approx(expected).epsilon(1e-9));
    }
  }
}

TEST_CASE("solver: contraction regime is start-independent") {
  GameConfig cfg = resolve_config(contraction_config(25));
  Rng rng(77);
  MfeSolution first = solve_mfe(cfg);
  REQUIRE(first.converged);
  CHECK(first.residual <= 1e-10);
  for (int k = 0; k < 10; ++k) {
    StateProfile s0(25, 4);
    for (auto& v : s0.values) v = rng.uniform01();
    MfeSolution sol = solve_mfe_from(cfg, s0);
    REQUIRE(sol.converged);
    CHECK(inf_distance(sol.state, first.state, cfg) <= 1e-6);
  }
  // Symmetric reduction agrees with the full iteration.
  std::vector<double> v0(4, 0.3);
  MfeSolution sym = solve_mfe_symmetric(cfg, v0);
  REQUIRE(sym.converged);
  CHECK(inf_distance(sym.state, first.state, cfg) <= 1e-6);
}

TEST_CASE("solver: non-contraction starts are reported, not thrown") {
  GameConfig cfg = contraction_config(40);
  cfg.betas = {30.0};
  cfg = resolve_config(cfg);
  Rng rng(5);
  int converged = 0;
  for (int k = 0; k < 10; ++k) {
    std::vector<double> v0(4);
    for (auto& v : v0) v = rng.uniform01();
    MfeSolution sol = solve_mfe_symmetric(cfg, v0);
    if (sol.converged) {
      ++converged;
      CHECK(sol.residual <= 1e-10);
    }
  }
  // Every start is allowed to fail; the call itself must not throw.
  MESSAGE("beta=30 starts converged: ", converged, "/10");
}

TEST_CASE("solver residual definition") {
  GameConfig cfg = resolve_config(contraction_config(10));
  MfeSolution mfe = solve_mfe(cfg);
  PopulationProfile f = mean_population(mfe.state, cfg);
  auto r = reward_vector(cfg.reward_spec, f);
  double res = 0.0;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 4; ++j) {
      res = std::max(res, std::abs(r[j] - mfe.state.at(i, j)));
    }
  }
  CHECK(res <= 1e-10);
}

TEST_CASE("lyapunov series decays under contraction") {
  GameConfig cfg = resolve_config(contraction_config(20));
  MfeSolution mfe = solve_mfe(cfg);
  REQUIRE(mfe.converged);

  OdeTrajectory at_fixed = integrate_ode(mfe.state, cfg, 2.0, 0.05);
  for (double v : lyapunov_series(at_fixed, mfe.state, cfg)) CHECK(v <= 1e-8);

  StateProfile s0 = init_state_profile(cfg);
  OdeTrajectory traj = integrate_ode(s0, cfg, 30.0, 0.02);
  auto series = lyapunov_series(traj, mfe.state, cfg);
  for (std::size_t k = 1; k < series.size(); ++k) {
    CHECK(series[k] <= series[k - 1] + 1e-8);
  }
  // log V regression slope is negative: exponential decay.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < series.size(); ++k) {
    if (series[k] <= 0.0) break;
    const double x = traj.times[k], y = std::log(series[k]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++count;
  }
  REQUIRE(count >= 10);
  const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  CHECK(slope < 0.0);
}

TEST_CASE("interpolated process knots and midpoints") {
  GameConfig cfg = contraction_config(5);
  cfg.horizon = 6;
  RunTrace trace = run(cfg);
  InterpolatedProcess interp = interpolated_process(trace, cfg.stepsize());

  // alpha = 1: tau_3 = 1 + 1/2 + 1/3
  CHECK(interp.knots()[3] == doctest::Approx(1.0 + 0.5 + 1.0 / 3.0).epsilon(1e-14));

  for (std::size_t n = 0; n < interp.knots().size(); ++n) {
    StateProfile at_knot = interp.eval(interp.knots()[n]);
    CHECK(inf_distance(at_knot, trace.state_at(n), trace.config) <= 1e-12);
  }
  // midpoint of the first interval averages the endpoint states
  StateProfile mid = interp.eval(0.5);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 4; ++j) {
      const double expected =
          0.5 * (trace.state_at(0).at(i, j) + trace.state_at(1).at(i, j));
      CHECK(mid.at(i, j) == doctest::Approx(expected).epsilon(1e-13));
    }
  }
}

TEST_CASE("interpolated process rejects thinned traces") {
  GameConfig cfg = contraction_config(5);
  cfg.horizon = 50;
  cfg.snapshot_stride = 10;
  RunTrace trace = run(cfg);
  CHECK_THROWS(interpolated_process(trace, cfg.stepsize()));
}

TEST_CASE("pseudotrajectory distance: exact solutions and empty windows") {
  GameConfig cfg = resolve_config(contraction_config(12));
  // A polyline through closely spaced samples of the flow is an exact
  // solution up to interpolation error, so the windowed distance collapses.
  StateProfile s0 = init_state_profile(cfg);
  std::vector<double> knots;
  for (int k = 0; k <= 60; ++k) knots.push_back(0.05 * k);
  OdeTrajectory flow = integrate_ode(s0, cfg, knots.back() + 0.1, 0.0025);
  std::vector<StateProfile> states;
  for (double tau : knots) {
    const auto it = std::lower_bound(flow.times.begin(), flow.times.end(), tau - 1e-9);
    states.push_back(flow.states[static_cast<std::size_t>(it - flow.times.begin())]);
  }
  InterpolatedProcess interp(knots, states);

  CHECK(pseudotrajectory_distance(interp, cfg, 0.5, 0.0, 0.01) == 0.0);
  const double d = pseudotrajectory_distance(interp, cfg, 0.3, 1.0, 0.01);
  CHECK(d <= 5e-4);

  CHECK_THROWS(pseudotrajectory_distance(interp, cfg, knots.back(), 1.0, 0.01));
}

TEST_CASE("pseudotrajectory distance shrinks along a real run") {
  GameConfig cfg = contraction_config(60);
  cfg.stepsize_alpha = 0.75;
  cfg.horizon = 1500;
  RunTrace trace = run(cfg);
  InterpolatedProcess interp = interpolated_process(trace, cfg.stepsize());
  const double total = interp.total_time();
  const double early =
      pseudotrajectory_distance(interp, trace.config, 0.1 * total, 1.0, 0.01);
  const double late =
      pseudotrajectory_distance(interp, trace.config, 0.9 * total - 1.0, 1.0, 0.01);
  CHECK(late < early);
}

TEST_CASE("monte-carlo expected rewards straddle the closure") {
  GameConfig cfg = resolve_config(contraction_config(50));
  StateProfile s = init_state_profile(cfg);
  Rng rng(123);
  auto mc = expected_reward_mc(s, cfg, 4000, rng);
  PopulationProfile f = mean_population(s, cfg);
  auto closure = reward_vector(cfg.reward_spec, f);
  for (int j = 0; j < 4; ++j) {
    CHECK(std::abs(mc[j] - closure[j]) <= 0.01);  // O(1/sqrt(K)) + O(1/N) slack
  }
}
