// Acceptance suite: reproduction targets and invariants checked end to end,
// one verdict line per criterion. Exit code is the number of failures.
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "mfbg/analysis.hpp"
#include "mfbg/experiments.hpp"
#include "mfbg/meanfield.hpp"
#include "mfbg/policy.hpp"
#include "mfbg/sim.hpp"

using namespace mfbg;

namespace {

int g_checks_failed = 0;
std::vector<std::string> g_notes;

void note(const std::string& line) { g_notes.push_back(line); }

bool expect(bool ok, const std::string& what) {
  if (!ok) {
    ++g_checks_failed;
    note("FAILED: " + what);
  }
  return ok;
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

constexpr double kSqrtHorizon = 44.721359549995796;  // sqrt(2000)
constexpr int kWorkers = 8;

struct TablePair {
  std::vector<TableRow> general;
  std::vector<TableRow> linear;
};

TablePair run_tables(bool contraction) {
  const std::vector<int> counts{50, 100, 200};
  TablePair out;
  out.general = make_table(RewardKind::kGeneral, contraction, counts, 6, kWorkers);
  out.linear = make_table(RewardKind::kLinear, contraction, counts, 6, kWorkers);
  return out;
}

bool check_rewards_band(const std::vector<TableRow>& rows,
                        const std::vector<double>& reference, const char* label) {
  bool ok = true;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const double rel = std::abs(rows[k].rewards - reference[k]) / reference[k];
    note(std::string(label) + " N=" + std::to_string(rows[k].num_agents) +
         ": rewards=" + fmt(rows[k].rewards) + " reference=" + fmt(reference[k]) +
         " deviation=" + fmt(100.0 * rel) + "%");
    ok &= expect(rel <= 0.05, std::string(label) + " rewards within 5% at N=" +
                                  std::to_string(rows[k].num_agents));
  }
  return ok;
}

bool check_regret_cap(const std::vector<TableRow>& rows, const char* label) {
  bool ok = true;
  for (const auto& row : rows) {
    note(std::string(label) + " N=" + std::to_string(row.num_agents) +
         ": regret=" + fmt(row.regret));
    ok &= expect(row.regret < kSqrtHorizon,
                 std::string(label) + " regret below sqrt(T) at N=" +
                     std::to_string(row.num_agents));
  }
  return ok;
}

// ---- criteria ----

TablePair g_contraction_tables;
TablePair g_noncontraction_tables;

bool criterion_table_contraction() {
  g_contraction_tables = run_tables(true);
  const std::vector<double> general_ref{1791.904, 1796.961, 1791.061};
  const std::vector<double> linear_ref{1541.083, 1554.948, 1560.613};
  bool ok = true;
  ok &= check_rewards_band(g_contraction_tables.general, general_ref, "general/contraction");
  ok &= check_rewards_band(g_contraction_tables.linear, linear_ref, "linear/contraction");
  ok &= check_regret_cap(g_contraction_tables.general, "general/contraction");
  ok &= check_regret_cap(g_contraction_tables.linear, "linear/contraction");
  for (std::size_t k = 0; k < 3; ++k) {
    ok &= expect(g_contraction_tables.general[k].regret <
                     g_contraction_tables.linear[k].regret,
                 "general regret below linear regret at N=" +
                     std::to_string(g_contraction_tables.general[k].num_agents));
  }
  return ok;
}

bool criterion_table_noncontraction() {
  g_noncontraction_tables = run_tables(false);
  const std::vector<double> general_ref{1786.238, 1784.582, 1791.829};
  const std::vector<double> linear_ref{1552.282, 1558.675, 1559.661};
  bool ok = true;
  ok &= check_rewards_band(g_noncontraction_tables.general, general_ref,
                           "general/non-contraction");
  ok &= check_rewards_band(g_noncontraction_tables.linear, linear_ref,
                           "linear/non-contraction");
  ok &= check_regret_cap(g_noncontraction_tables.general, "general/non-contraction");
  ok &= check_regret_cap(g_noncontraction_tables.linear, "linear/non-contraction");
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& gen_non = g_noncontraction_tables.general[k];
    const auto& gen_con = g_contraction_tables.general[k];
    note("general ordering N=" + std::to_string(gen_non.num_agents) +
         ": non-contraction=" + fmt(gen_non.regret) +
         " vs contraction=" + fmt(gen_con.regret));
    ok &= expect(gen_non.regret > gen_con.regret,
                 "general non-contraction regret exceeds contraction at N=" +
                     std::to_string(gen_non.num_agents));
    const auto& lin_non = g_noncontraction_tables.linear[k];
    const auto& lin_con = g_contraction_tables.linear[k];
    note("linear ordering N=" + std::to_string(lin_non.num_agents) +
         ": non-contraction=" + fmt(lin_non.regret) +
         " vs contraction=" + fmt(lin_con.regret));
    ok &= expect(lin_non.regret > lin_con.regret,
                 "linear non-contraction regret exceeds contraction at N=" +
                     std::to_string(lin_non.num_agents));
  }
  return ok;
}

GameConfig contraction_config(int n, std::int64_t t, std::uint64_t seed,
                              double alpha = 1.0) {
  GameConfig cfg;
  cfg.num_agents = n;
  cfg.num_arms = 4;
  cfg.horizon = t;
  cfg.betas = {0.5};
  cfg.eta = {0.2, 0.0};
  cfg.stepsize_alpha = alpha;
  cfg.reward_spec.kind = RewardKind::kGeneral;
  cfg.reward_spec.theta = 0.5;
  cfg.seed = seed;
  return cfg;
}

bool criterion_mfe_uniqueness() {
  bool ok = true;
  GameConfig cfg = resolve_config(contraction_config(100, 5000, 1));

  // Ten random starts agree to 1e-6.
  auto report = mfe_report(cfg, 10, 17);
  ok &= expect(report.non_converged == 0, "all solver starts converge");
  double spread = 0.0;
  for (const auto& a : report.starts) {
    for (const auto& b : report.starts) {
      spread = std::max(spread, inf_distance(a.state, b.state, cfg));
    }
  }
  note("solver start spread: " + fmt(spread));
  ok &= expect(spread <= 1e-6, "fixed points from 10 starts within 1e-6");

  // Four simulations end near the solved equilibrium.
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    GameConfig run_cfg = contraction_config(100, 5000, seed);
    RunTrace trace = run(run_cfg);
    MfeSolution mfe = solve_mfe(trace.config);
    ok &= expect(mfe.converged, "per-seed equilibrium solve converges");
    const double e_T = inf_distance(trace.terminal_state(), mfe.state, trace.config);

    GameConfig relaxed = contraction_config(100, 5000, seed, 0.75);
    RunTrace trace75 = run(relaxed);
    MfeSolution mfe75 = solve_mfe(trace75.config);
    const double e_T75 =
        inf_distance(trace75.terminal_state(), mfe75.state, trace75.config);
    note("seed " + std::to_string(seed) + ": |s_T - mfe|_inf = " + fmt(e_T) +
         " at alpha=1 (supplementary alpha=0.75 run: " + fmt(e_T75) + ")");
    ok &= expect(e_T <= 0.05, "terminal state within 0.05 of the equilibrium, seed " +
                                  std::to_string(seed));
  }
  return ok;
}

bool criterion_multiple_mfe() {
  GameConfig cfg = contraction_config(100, 2000, 1);
  cfg.betas = {30.0};
  bool found = false;
  for (std::uint64_t batch = 1; batch <= 3 && !found; ++batch) {
    auto report = mfe_report(cfg, 10, 1000 + batch);
    double separation = 0.0;
    for (const auto& a : report.clusters) {
      for (const auto& b : report.clusters) {
        separation = std::max(
            separation, inf_distance(a.representative, b.representative,
                                     resolve_config(cfg)));
      }
    }
    note("batch " + std::to_string(batch) + ": clusters=" +
         std::to_string(report.clusters.size()) + " max separation=" +
         fmt(separation) + " non-converged=" + std::to_string(report.non_converged));
    if (report.clusters.size() >= 2 && separation > 0.05) found = true;
  }
  return expect(found,
                "at least two fixed-point clusters separated by 0.05 at beta=30 "
                "within three start batches");
}

bool criterion_state_change_inequality() {
  bool ok = true;
  std::vector<GameConfig> configs;
  configs.push_back(contraction_config(50, 2000, 11));  // homogeneous general
  {
    GameConfig het = contraction_config(50, 2000, 12);  // heterogeneous, fading eta
    Rng rng(substream_seed(12, 99));
    het.betas = sample_uniform_betas(50, 0.3, 0.9, rng);
    het.eta = {0.2, 0.5};
    configs.push_back(het);
  }
  {
    GameConfig lin = contraction_config(50, 2000, 13);  // homogeneous linear
    lin.reward_spec.kind = RewardKind::kLinear;
    lin.reward_spec.theta = 1.0;
    lin.betas = {1.0};
    configs.push_back(lin);
  }
  for (std::size_t c = 0; c < configs.size(); ++c) {
    RunTrace trace = run(configs[c]);
    double min_slack = 1e18;
    bool holds = true;
    for (int i = 0; i < configs[c].num_agents; ++i) {
      for (int j = 0; j < configs[c].num_arms; ++j) {
        auto series = state_change_series(trace, i, j);
        for (const auto& [lhs, rhs] : series) {
          min_slack = std::min(min_slack, rhs - lhs);
          holds &= lhs <= rhs + 1e-9;
        }
      }
    }
    note("trace " + std::to_string(c + 1) + ": min slack rhs-lhs = " + fmt(min_slack));
    ok &= expect(holds, "state-change inequality on trace " + std::to_string(c + 1) +
                            " at every agent, arm and cutoff");
  }
  return ok;
}

bool criterion_contraction_constant() {
  GameConfig cfg;
  cfg.num_agents = 50;
  cfg.num_arms = 4;
  cfg.horizon = 100;
  cfg.betas = {2.0};
  cfg.eta = {0.2, 0.0};
  cfg.stepsize_alpha = 1.0;
  cfg.reward_spec.kind = RewardKind::kLinear;
  cfg.reward_spec.theta = 1.0;
  cfg.seed = 14;
  cfg = resolve_config(cfg);
  Rng rng(substream_seed(14, kProfilePairStream));
  const double estimate =
      empirical_contraction_estimate(cfg, 100, rng, ExpectationMode::kMeanField);
  const double bound = 1.0 * (1.0 - 0.2) * 2.0 / 2.0;
  note("empirical estimate " + fmt(estimate) + " vs constant " + fmt(bound));
  return expect(estimate <= bound + 1e-9,
                "empirical lipschitz estimate within the linear contraction constant");
}

bool criterion_pseudotrajectory() {
  GameConfig cfg = contraction_config(100, 2000, 1, 0.75);
  RunTrace trace = run(cfg);
  InterpolatedProcess interp = interpolated_process(trace, cfg.stepsize());
  const double total = interp.total_time();
  const double window = 1.0;
  std::vector<double> distances;
  for (double frac : {0.1, 0.5, 0.9}) {
    double t = std::min(frac * total, total - window);
    distances.push_back(
        pseudotrajectory_distance(interp, trace.config, t, window, 0.01));
  }
  note("pseudotrajectory distances at 0.1/0.5/0.9 of total time: " +
       fmt(distances[0]) + " / " + fmt(distances[1]) + " / " + fmt(distances[2]));
  bool ok = true;
  ok &= expect(distances[0] > distances[1] && distances[1] > distances[2],
               "pseudotrajectory distance strictly decreasing across probes");
  ok &= expect(distances[2] <= 0.05, "final pseudotrajectory distance within 0.05");
  return ok;
}

bool criterion_variance_bound() {
  bool ok = true;
  for (int n : {50, 100, 200}) {
    GameConfig cfg = resolve_config(contraction_config(n, 100, 2));
    auto report = population_variance_check(cfg, 200, 3);
    double worst_emp = 0.0, worst_true = 0.0;
    for (int j = 0; j < 4; ++j) {
      worst_emp = std::max(worst_emp, report.empirical[j]);
      worst_true = std::max(worst_true, report.analytic[j]);
    }
    note("N=" + std::to_string(n) + ": empirical var " + fmt(worst_emp) +
         ", analytic var " + fmt(worst_true) + ", bound " + fmt(report.bound));
    ok &= expect(worst_emp <= 2.0 * report.bound,
                 "empirical variance within twice the bound at N=" + std::to_string(n));
    ok &= expect(worst_true <= report.bound + 1e-15,
                 "analytic variance within the bound at N=" + std::to_string(n));
  }
  return ok;
}

bool criterion_numerical_hygiene() {
  bool ok = true;
  // Policy gradient against central differences.
  {
    Rng rng(2025);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const int m = 2 + static_cast<int>(rng.uniform01() * 5);
      const double beta = rng.uniform(0.2, 5.0);
      const double eta = rng.uniform(0.0, 0.9);
      std::vector<double> s(m);
      for (auto& v : s) v = rng.uniform01();
      const int arm = static_cast<int>(rng.uniform01() * m);
      auto grad = policy_jacobian(s, beta, eta, arm);
      for (int l = 0; l < m; ++l) {
        std::vector<double> up = s, dn = s;
        up[l] += 1e-6;
        dn[l] -= 1e-6;
        const double fd = (hedge_probabilities(up, beta, eta)[arm] -
                           hedge_probabilities(dn, beta, eta)[arm]) /
                          2e-6;
        worst = std::max(worst, std::abs(grad[l] - fd));
      }
    }
    note("policy gradient vs finite differences, worst |diff| = " + fmt(worst));
    ok &= expect(worst <= 1e-6, "policy gradient matches finite differences");
  }
  // Integrator order under step halving.
  {
    GameConfig cfg = resolve_config(contraction_config(10, 100, 5));
    StateProfile s0 = init_state_profile(cfg);
    auto terminal = [&](double dt) {
      return integrate_ode(s0, cfg, 2.0, dt).states.back();
    };
    const double e1 = inf_distance(terminal(0.2), terminal(0.1), cfg);
    const double e2 = inf_distance(terminal(0.1), terminal(0.05), cfg);
    const double order = std::log2(e1 / e2);
    note("observed integrator order: " + fmt(order));
    ok &= expect(order >= 3.5 && order <= 4.5, "integrator shows fourth order");
  }
  // Bit reproducibility.
  {
    GameConfig cfg = contraction_config(50, 500, 7);
    RunTrace a = run(cfg);
    RunTrace b = run(cfg);
    bool same = a.actions == b.actions && a.population == b.population &&
                a.realized_rewards == b.realized_rewards && a.sigma == b.sigma;
    for (std::size_t k = 0; same && k < a.snapshots.size(); ++k) {
      same &= a.snapshots[k].values == b.snapshots[k].values;
    }
    ok &= expect(same, "repeated runs are bit-identical");
  }
  return ok;
}

struct Criterion {
  const char* name;
  std::function<bool()> fn;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"1. contraction benchmark tables (rewards, regret cap, family ordering)",
       criterion_table_contraction},
      {"2. non-contraction benchmark tables (rewards, regret cap, regime ordering)",
       criterion_table_noncontraction},
      {"3. unique equilibrium under contraction (solver and simulations)",
       criterion_mfe_uniqueness},
      {"4. multiple equilibria without contraction (solver clusters at beta=30)",
       criterion_multiple_mfe},
      {"5. cumulative state-change inequality on full traces",
       criterion_state_change_inequality},
      {"6. linear-reward contraction constant bounds the empirical estimate",
       criterion_contraction_constant},
      {"7. interpolated run tracks the deterministic flow",
       criterion_pseudotrajectory},
      {"8. population variance bound at the equilibrium", criterion_variance_bound},
      {"9. numerical hygiene (gradient oracle, integrator order, determinism)",
       criterion_numerical_hygiene},
  };

  int failed = 0;
  for (const auto& criterion : criteria) {
    g_notes.clear();
    const int before = g_checks_failed;
    bool ok = false;
    try {
      ok = criterion.fn();
    } catch (const std::exception& e) {
      note(std::string("exception: ") + e.what());
      ok = false;
    }
    ok = ok && g_checks_failed == before;
    std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", criterion.name);
    for (const auto& line : g_notes) std::printf("    %s\n", line.c_str());
    if (!ok) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed;
}
