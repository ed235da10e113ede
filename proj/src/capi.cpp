#include "mfbg.h"

#include <cstring>
#include <exception>
#include <new>
#include <stdexcept>
#include <string>

#include "mfbg/analysis.hpp"
#include "mfbg/config.hpp"
#include "mfbg/experiments.hpp"
#include "mfbg/meanfield.hpp"
#include "mfbg/sim.hpp"

struct mfbg_config {
  mfbg::GameConfig cfg;
};
struct mfbg_trace {
  mfbg::RunTrace trace;
};
struct mfbg_mfe {
  mfbg::MfeSolution sol;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

// Config invariants raise std::invalid_argument from validate paths; other
// std::invalid_argument means a bad call argument.
template <typename Fn>
mfbg_status guarded(mfbg_status arg_status, Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return MFBG_OK;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return arg_status;
  } catch (const std::bad_alloc&) {
    set_error("out of memory");
    return MFBG_ERR_NUMERIC;
  } catch (const std::exception& e) {
    set_error(e.what());
    return MFBG_ERR_NUMERIC;
  }
}

template <typename Fn>
mfbg_status guarded_io(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return MFBG_OK;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return MFBG_ERR_INVALID_CONFIG;
  } catch (const std::exception& e) {
    set_error(e.what());
    return MFBG_ERR_IO;
  }
}

bool null_arg(const void* p) {
  if (p == nullptr) {
    set_error("null argument");
    return true;
  }
  return false;
}

bool slot_agent_ok(const mfbg_trace* trace, int64_t slot, int32_t agent) {
  if (slot < 0 || slot >= trace->trace.horizon()) {
    set_error("slot out of range");
    return false;
  }
  if (agent < 0 || agent >= trace->trace.num_agents()) {
    set_error("agent out of range");
    return false;
  }
  return true;
}

mfbg::MfeOptions options_from(double tol, int64_t max_iter, double damping) {
  mfbg::MfeOptions opt;
  if (tol > 0) opt.tol = tol;
  if (max_iter > 0) opt.max_iter = max_iter;
  if (damping > 0) opt.damping = damping;
  return opt;
}

}  // namespace

extern "C" {

const char* mfbg_last_error(void) { return g_last_error.c_str(); }

const char* mfbg_status_name(mfbg_status status) {
  switch (status) {
    case MFBG_OK: return "ok";
    case MFBG_ERR_INVALID_ARGUMENT: return "invalid argument";
    case MFBG_ERR_INVALID_CONFIG: return "invalid config";
    case MFBG_ERR_IO: return "io error";
    case MFBG_ERR_NUMERIC: return "numeric error";
    case MFBG_ERR_UNSUPPORTED: return "unsupported";
  }
  return "unknown";
}

/* ---- configuration ---- */

mfbg_status mfbg_config_create(mfbg_config** out) {
  if (null_arg(out)) return MFBG_ERR_INVALID_ARGUMENT;
  *out = new (std::nothrow) mfbg_config{};
  if (*out == nullptr) {
    set_error("out of memory");
    return MFBG_ERR_NUMERIC;
  }
  g_last_error.clear();
  return MFBG_OK;
}

void mfbg_config_free(mfbg_config* config) { delete config; }

mfbg_status mfbg_config_load_file(const char* path, mfbg_config** out) {
  if (null_arg(path) || null_arg(out)) return MFBG_ERR_INVALID_ARGUMENT;
  return guarded_io([&] { *out = new mfbg_config{mfbg::load_config_file(path)}; });
}

mfbg_status mfbg_config_load_string(const char* json_text, mfbg_config** out) {
  if (null_arg(json_text) || null_arg(out)) return MFBG_ERR_INVALID_ARGUMENT;
  return guarded_io([&] { *out = new mfbg_config{mfbg::parse_config_json(json_text)}; });
}

mfbg_status mfbg_config_save_file(const mfbg_config* config, const char* path) {
  if (null_arg(config) || null_arg(path)) return MFBG_ERR_INVALID_ARGUMENT;
  if (config->cfg.reward_spec.kind == mfbg::RewardKind::kCustom) {
    set_error("custom rewards cannot be serialized");
    return MFBG_ERR_UNSUPPORTED;
  }
  return guarded_io([&] { mfbg::save_config_file(config->cfg, path); });
}

mfbg_status mfbg_config_to_string(const mfbg_config* config, char** out) {
  if (null_arg(config) || null_arg(out)) return MFBG_ERR_INVALID_ARGUMENT;
  if (config->cfg.reward_spec.kind == mfbg::RewardKind::kCustom) {
    set_error("custom rewards cannot be serialized");
    return MFBG_ERR_UNSUPPORTED;
  }
  return guarded(MFBG_ERR_INVALID_CONFIG, [&] {
    std::string text = mfbg::config_to_json(config->cfg);
    *out = new char[text.size() + 1];
    std::memcpy(*out, text.c_str(), text.size() + 1);
  });
}

void mfbg_string_free(char* text) { delete[] text; }

#define MFBG_SETTER(name, type, stmt)                                   \
  mfbg_status name(mfbg_config* config, type value) {                   \
    if (null_arg(config)) return MFBG_ERR_INVALID_ARGUMENT;             \
    return guarded(MFBG_ERR_INVALID_ARGUMENT, [&] { stmt; });           \
  }

MFBG_SETTER(mfbg_config_set_num_agents, int32_t, config->cfg.num_agents = value)
MFBG_SETTER(mfbg_config_set_num_arms, int32_t, config->cfg.num_arms = value)
MFBG_SETTER(mfbg_config_set_horizon, int64_t, config->cfg.horizon = value)
MFBG_SETTER(mfbg_config_set_seed, uint64_t, config->cfg.seed = value)
MFBG_SETTER(mfbg_config_set_stepsize_alpha, double, config->cfg.stepsize_alpha = value)
MFBG_SETTER(mfbg_config_set_snapshot_stride, int32_t, config->cfg.snapshot_stride = value)

#undef MFBG_SETTER

mfbg_status mfbg_config_set_beta(mfbg_config* config, double beta) {
  if (null_arg(config)) return MFBG_ERR_INVALID_ARGUMENT;
  config->cfg.betas = {beta};
  g_last_error.clear();
  return MFBG_OK;
}

mfbg_status mfbg_config_set_betas(mfbg_config* config, const double* betas,
                                  size_t count) {
  if (null_arg(config) || null_arg(betas)) return MFBG_ERR_INVALID_ARGUMENT;
  if (count == 0) {
    set_error("empty beta array");
    return MFBG_ERR_INVALID_ARGUMENT;
  }
  config->cfg.betas.assign(betas, betas + count);
  g_last_error.clear();
  return MFBG_OK;
}

mfbg_status mfbg_config_set_eta(mfbg_config* config, double eta) {
  if (null_arg(config)) return MFBG_ERR_INVALID_ARGUMENT;
  config->cfg.eta = {eta, 0.0};
  g_last_error.clear();
  return MFBG_OK;
}

mfbg_status mfbg_config_set_eta_schedule(mfbg_config* config, double eta0,
                                         double kappa) {
  if (null_arg(config)) return MFBG_ERR_INVALID_ARGUMENT;
  config->cfg.eta = {eta0, kappa};
  g_last_error.clear();
  return MFBG_OK;
}

mfbg_status mfbg_config_set_reward(mfbg_config* config, const char* kind,
                                   double theta) {
  if (null_arg(config) || null_arg(kind)) return MFBG_ERR_INVALID_ARGUMENT;
  return guarded(MFBG_ERR_INVALID_ARGUMENT, [&] {
    config->cfg.reward_spec = mfbg::RewardSpec{};
    config->cfg.reward_spec.kind = mfbg::reward_kind_from_name(kind);
    config->cfg.reward_spec.theta = theta;
  });
}

mfbg_status mfbg_config_set_arm_thetas(mfbg_config* config, const double* thetas,
                                       size_t count) {
  if (null_arg(config) || null_arg(thetas)) return MFBG_ERR_INVALID_ARGUMENT;
  config->cfg.reward_spec.arm_thetas.assign(thetas, thetas + count);
  g_last_error.clear();
  return MFBG_OK;
}

mfbg_status mfbg_config_set_arm_subset(mfbg_config* config, int32_t agent,
                                       const int32_t* arms, size_t count) {
  if (null_arg(config) || null_arg(arms)) return MFBG_ERR_INVALID_ARGUMENT;
  if (agent < 0) {
    set_error("agent index must be >= 0");
    return MFBG_ERR_INVALID_ARGUMENT;
  }
  auto& subsets = config->cfg.arm_subsets;
  if (subsets.empty()) {
    // Agents without an explicit subset keep all arms.
    subsets.assign(config->cfg.num_agents, {});
    for (int i = 0; i < config->cfg.num_agents; ++i) {
      for (int j = 0; j < config->cfg.num_arms; ++j) subsets[i].push_back(j);
    }
  }
  if (agent >= static_cast<int32_t>(subsets.size())) {
    set_error("agent index out of range");
    return MFBG_ERR_INVALID_ARGUMENT;
  }
  subsets[agent].assign(arms, arms + count);
  g_last_error.clear();
  return MFBG_OK;
}

mfbg_status mfbg_config_set_custom_reward(mfbg_config* config, mfbg_reward_fn reward_fn,
                                          void* user, double lipschitz,
                                          int reads_full_profile) {
  if (null_arg(config) || null_arg(reinterpret_cast<const void*>(reward_fn))) {
    return MFBG_ERR_INVALID_ARGUMENT;
  }
  auto& spec = config->cfg.reward_spec;
  spec.kind = mfbg::RewardKind::kCustom;
  spec.custom_lipschitz = lipschitz;
  spec.custom_reads_full_profile = reads_full_profile != 0;
  spec.custom_fn = [reward_fn, user](std::span<const double> f, int arm) {
    return reward_fn(f.data(), static_cast<int32_t>(f.size()),
                     static_cast<int32_t>(arm), user);
  };
  g_last_error.clear();
  return MFBG_OK;
}

mfbg_status mfbg_config_validate(const mfbg_config* config) {
  if (null_arg(config)) return MFBG_ERR_INVALID_ARGUMENT;
  return guarded(MFBG_ERR_INVALID_CONFIG, [&] { mfbg::validate_config(config->cfg); });
}

#define MFBG_GETTER(name, holder, type, expr)                      \
  mfbg_status name(const holder* h, type* out) {                   \
    if (null_arg(h) || null_arg(out)) return MFBG_ERR_INVALID_ARGUMENT; \
    *out = (expr);                                                 \
    g_last_error.clear();                                          \
    return MFBG_OK;                                                \
  }

MFBG_GETTER(mfbg_config_get_num_agents, mfbg_config, int32_t, h->cfg.num_agents)
MFBG_GETTER(mfbg_config_get_num_arms, mfbg_config, int32_t, h->cfg.num_arms)
MFBG_GETTER(mfbg_config_get_horizon, mfbg_config, int64_t, h->cfg.horizon)
MFBG_GETTER(mfbg_config_get_seed, mfbg_config, uint64_t, h->cfg.seed)

/* ---- simulation ---- */

mfbg_status mfbg_simulate(const mfbg_config* config, mfbg_trace** out) {
  if (null_arg(config) || null_arg(out)) return MFBG_ERR_INVALID_ARGUMENT;
  return guarded(MFBG_ERR_INVALID_CONFIG,
                 [&] { *out = new mfbg_trace{mfbg::run(config->cfg)}; });
}

void mfbg_trace_free(mfbg_trace* trace) { delete trace; }

MFBG_GETTER(mfbg_trace_num_agents, mfbg_trace, int32_t, h->trace.num_agents())
MFBG_GETTER(mfbg_trace_num_arms, mfbg_trace, int32_t, h->trace.num_arms())
MFBG_GETTER(mfbg_trace_horizon, mfbg_trace, int64_t, h->trace.horizon())

#undef MFBG_GETTER

mfbg_status mfbg_trace_action(const mfbg_trace* trace, int64_t slot, int32_t agent,
                              int32_t* out) {
  if (null_arg(trace) || null_arg(out)) return MFBG_ERR_INVALID_ARGUMENT;
  if (!slot_agent_ok(trace, slot, agent)) return MFBG_ERR_INVALID_ARGUMENT;
  *out = trace->trace.action(slot, agent);
  g_last_error.clear();
  return MFBG_OK;
}

mfbg_status mfbg_trace_population(const mfbg_trace* trace, int64_t slot, double* out) {
  if (null_arg(trace) || null_arg(out)) return MFBG_ERR_INVALID_ARGUMENT;
  if (slot < 0 || slot >= trace->trace.horizon()) {
    set_error("slot out of range");
    return MFBG_ERR_INVALID_ARGUMENT;
  }
  auto row = trace->trace.population_row(slot);
  std::memcpy(out, row.data(), row.size() * sizeof(double));
  g_last_error.clear();
  return MFBG_OK;
}

mfbg_status mfbg_trace_reward(const mfbg_trace* trace, int64_t slot, int32_t agent,
                              double* out) {
  if (null_arg(trace) || null_arg(out)) return MFBG_ERR_INVALID_ARGUMENT;
  if (!slot_agent_ok(trace, slot, agent)) return MFBG_ERR_INVALID_ARGUMENT;
  *out = trace->trace.realized(slot, agent);
  g_last_error.clear();
  return MFBG_OK;
}

mfbg_status mfbg_trace_sigma(const mfbg_trace* trace, int64_t slot, int32_t agent,
                             double* out) {
  if (null_arg(trace) || null_arg(out)) return MFBG_ERR_INVALID_ARGUMENT;
  if (!slot_agent_ok(trace, slot, agent)) return MFBG_ERR_INVALID_ARGUMENT;
  auto row = trace->trace.sigma_row_at(slot, agent);
  std::memcpy(out, row.data(), row.size() * sizeof(double));
  g_last_error.clear();
  return MFBG_OK;
}

mfbg_status mfbg_trace_state(const mfbg_trace* trace, int64_t slot, double* out) {
  if (null_arg(trace) || null_arg(out)) return MFBG_ERR_INVALID_ARGUMENT;
  return guarded(MFBG_ERR_INVALID_ARGUMENT, [&] {
    const mfbg::StateProfile& s = trace->trace.state_at(slot);
    std::memcpy(out, s.values.data(), s.values.size() * sizeof(double));
  });
}

mfbg_status mfbg_trace_arm_thetas(const mfbg_trace* trace, double* out) {
  if (null_arg(trace) || null_arg(out)) return MFBG_ERR_INVALID_ARGUMENT;
  const auto& thetas = trace->trace.config.reward_spec.arm_thetas;
  std::memcpy(out, thetas.data(), thetas.size() * sizeof(double));
  g_last_error.clear();
  return MFBG_OK;
}

mfbg_status mfbg_trace_regret(const mfbg_trace* trace, int32_t agent, double* out) {
  if (null_arg(trace) || null_arg(out)) return MFBG_ERR_INVALID_ARGUMENT;
  return guarded(MFBG_ERR_INVALID_ARGUMENT,
                 [&] { *out = mfbg::empirical_regret(trace->trace, agent); });
}

mfbg_status mfbg_trace_mean_regret(const mfbg_trace* trace, double* out) {
  if (null_arg(trace) || null_arg(out)) return MFBG_ERR_INVALID_ARGUMENT;
  return guarded(MFBG_ERR_NUMERIC, [&] { *out = mfbg::mean_regret(trace->trace); });
}

mfbg_status mfbg_trace_cumulative_reward(const mfbg_trace* trace, double* out) {
  if (null_arg(trace) || null_arg(out)) return MFBG_ERR_INVALID_ARGUMENT;
  *out = mfbg::cumulative_reward(trace->trace);
  g_last_error.clear();
  return MFBG_OK;
}

mfbg_status mfbg_trace_export_csv(const mfbg_trace* trace, const char* dir) {
  if (null_arg(trace) || null_arg(dir)) return MFBG_ERR_INVALID_ARGUMENT;
  return guarded_io([&] { mfbg::export_trace_csv(trace->trace, dir); });
}

/* ---- equilibrium ---- */

mfbg_status mfbg_solve_mfe(const mfbg_config* config, double tol, int64_t max_iter,
                           double damping, mfbg_mfe** out) {
  if (null_arg(config) || null_arg(out)) return MFBG_ERR_INVALID_ARGUMENT;
  return guarded(MFBG_ERR_INVALID_CONFIG, [&] {
    mfbg::GameConfig cfg = mfbg::resolve_config(config->cfg);
    *out = new mfbg_mfe{mfbg::solve_mfe(cfg, options_from(tol, max_iter, damping))};
  });
}

mfbg_status mfbg_solve_mfe_from(const mfbg_config* config, const double* initial,
                                double tol, int64_t max_iter, double damping,
                                mfbg_mfe** out) {
  if (null_arg(config) || null_arg(initial) || null_arg(out)) {
    return MFBG_ERR_INVALID_ARGUMENT;
  }
  return guarded(MFBG_ERR_INVALID_CONFIG, [&] {
    mfbg::GameConfig cfg = mfbg::resolve_config(config->cfg);
    mfbg::StateProfile s(cfg.num_agents, cfg.num_arms);
    std::memcpy(s.values.data(), initial, s.values.size() * sizeof(double));
    *out = new mfbg_mfe{
        mfbg::solve_mfe_from(cfg, s, options_from(tol, max_iter, damping))};
  });
}

void mfbg_mfe_free(mfbg_mfe* mfe) { delete mfe; }

mfbg_status mfbg_mfe_converged(const mfbg_mfe* mfe, int* out) {
  if (null_arg(mfe) || null_arg(out)) return MFBG_ERR_INVALID_ARGUMENT;
  *out = mfe->sol.converged ? 1 : 0;
  g_last_error.clear();
  return MFBG_OK;
}

mfbg_status mfbg_mfe_residual(const mfbg_mfe* mfe, double* out) {
  if (null_arg(mfe) || null_arg(out)) return MFBG_ERR_INVALID_ARGUMENT;
  *out = mfe->sol.residual;
  g_last_error.clear();
  return MFBG_OK;
}

mfbg_status mfbg_mfe_iterations(const mfbg_mfe* mfe, int64_t* out) {
  if (null_arg(mfe) || null_arg(out)) return MFBG_ERR_INVALID_ARGUMENT;
  *out = mfe->sol.iterations;
  g_last_error.clear();
  return MFBG_OK;
}

mfbg_status mfbg_mfe_state(const mfbg_mfe* mfe, double* out) {
  if (null_arg(mfe) || null_arg(out)) return MFBG_ERR_INVALID_ARGUMENT;
  std::memcpy(out, mfe->sol.state.values.data(),
              mfe->sol.state.values.size() * sizeof(double));
  g_last_error.clear();
  return MFBG_OK;
}

mfbg_status mfbg_ode_terminal(const mfbg_config* config, const double* initial,
                              double t_end, double dt, double* out) {
  if (null_arg(config) || null_arg(out)) return MFBG_ERR_INVALID_ARGUMENT;
  return guarded(MFBG_ERR_INVALID_CONFIG, [&] {
    mfbg::GameConfig cfg = mfbg::resolve_config(config->cfg);
    mfbg::StateProfile s0(cfg.num_agents, cfg.num_arms);
    if (initial != nullptr) {
      std::memcpy(s0.values.data(), initial, s0.values.size() * sizeof(double));
    } else {
      s0 = mfbg::init_state_profile(cfg);
    }
    mfbg::OdeTrajectory traj = mfbg::integrate_ode(s0, cfg, t_end, dt);
    std::memcpy(out, traj.states.back().values.data(),
                traj.states.back().values.size() * sizeof(double));
  });
}

/* ---- analysis ---- */

mfbg_status mfbg_check_contraction_general(double theta, double beta, double eta,
                                           int* satisfied, double* margin) {
  if (null_arg(satisfied) || null_arg(margin)) return MFBG_ERR_INVALID_ARGUMENT;
  auto res = mfbg::contraction_check_general(theta, beta, eta);
  *satisfied = res.satisfied ? 1 : 0;
  *margin = res.margin;
  g_last_error.clear();
  return MFBG_OK;
}

mfbg_status mfbg_check_contraction_linear(double theta, double beta, double eta,
                                          int* satisfied, double* margin) {
  if (null_arg(satisfied) || null_arg(margin)) return MFBG_ERR_INVALID_ARGUMENT;
  auto res = mfbg::contraction_check_linear(theta, beta, eta);
  *satisfied = res.satisfied ? 1 : 0;
  *margin = res.margin;
  g_last_error.clear();
  return MFBG_OK;
}

mfbg_status mfbg_check_contraction_heterogeneous(double theta, const double* betas,
                                                 size_t count, int linear,
                                                 int* satisfied, double* margin) {
  if (null_arg(betas) || null_arg(satisfied) || null_arg(margin)) {
    return MFBG_ERR_INVALID_ARGUMENT;
  }
  return guarded(MFBG_ERR_INVALID_ARGUMENT, [&] {
    auto res = mfbg::contraction_check_heterogeneous(
        theta, std::span<const double>(betas, count), linear != 0);
    *satisfied = res.satisfied ? 1 : 0;
    *margin = res.margin;
  });
}

mfbg_status mfbg_state_change_bound(const mfbg_trace* trace, int32_t agent, int32_t arm,
                                    int64_t cutoff, double* lhs, double* rhs) {
  if (null_arg(trace) || null_arg(lhs) || null_arg(rhs)) {
    return MFBG_ERR_INVALID_ARGUMENT;
  }
  return guarded(MFBG_ERR_INVALID_ARGUMENT, [&] {
    auto pair = mfbg::state_change_bound(trace->trace, agent, arm, cutoff);
    *lhs = pair.lhs;
    *rhs = pair.rhs;
  });
}

mfbg_status mfbg_population_variance(const mfbg_config* config, int32_t num_samples,
                                     uint64_t sample_seed, double* empirical,
                                     double* analytic, double* bound) {
  if (null_arg(config) || null_arg(empirical) || null_arg(analytic) ||
      null_arg(bound)) {
    return MFBG_ERR_INVALID_ARGUMENT;
  }
  return guarded(MFBG_ERR_INVALID_CONFIG, [&] {
    mfbg::GameConfig cfg = mfbg::resolve_config(config->cfg);
    auto report = mfbg::population_variance_check(cfg, num_samples, sample_seed);
    std::memcpy(empirical, report.empirical.data(),
                report.empirical.size() * sizeof(double));
    std::memcpy(analytic, report.analytic.data(),
                report.analytic.size() * sizeof(double));
    *bound = report.bound;
  });
}

mfbg_status mfbg_empirical_contraction(const mfbg_config* config, int32_t num_pairs,
                                       uint64_t seed, int mode, int32_t mc_samples,
                                       double* out) {
  if (null_arg(config) || null_arg(out)) return MFBG_ERR_INVALID_ARGUMENT;
  return guarded(MFBG_ERR_INVALID_CONFIG, [&] {
    mfbg::GameConfig cfg = mfbg::resolve_config(config->cfg);
    mfbg::Rng rng(mfbg::substream_seed(seed, mfbg::kProfilePairStream));
    *out = mfbg::empirical_contraction_estimate(
        cfg, num_pairs, rng,
        mode == 0 ? mfbg::ExpectationMode::kMeanField
                  : mfbg::ExpectationMode::kMonteCarlo,
        mc_samples);
  });
}

/* ---- experiment drivers ---- */

mfbg_status mfbg_cmd_run(const char* config_path, const uint64_t* seeds,
                         size_t num_seeds, const char* out_dir, int workers,
                         int smooth_window) {
  if (null_arg(config_path) || null_arg(out_dir)) return MFBG_ERR_INVALID_ARGUMENT;
  if (seeds == nullptr || num_seeds == 0) {
    set_error("no seeds given");
    return MFBG_ERR_INVALID_ARGUMENT;
  }
  return guarded_io([&] {
    mfbg::GameConfig cfg = mfbg::load_config_file(config_path);
    mfbg::run_batch(cfg, std::span<const uint64_t>(seeds, num_seeds), out_dir, workers,
                    smooth_window);
  });
}

mfbg_status mfbg_cmd_table(const char* reward_kind, int contraction,
                           const int32_t* agent_counts, size_t num_counts,
                           int32_t runs, const uint64_t* seeds, size_t num_seeds,
                           const char* out_csv, int workers) {
  if (null_arg(reward_kind) || null_arg(agent_counts) || null_arg(out_csv)) {
    return MFBG_ERR_INVALID_ARGUMENT;
  }
  return guarded_io([&] {
    std::vector<int> counts(agent_counts, agent_counts + num_counts);
    std::span<const uint64_t> seed_override;
    if (seeds != nullptr && num_seeds > 0) {
      seed_override = std::span<const uint64_t>(seeds, num_seeds);
    }
    auto rows = mfbg::make_table(mfbg::reward_kind_from_name(reward_kind),
                                 contraction != 0, counts, runs, workers,
                                 seed_override);
    mfbg::write_table_csv(rows, out_csv);
  });
}

mfbg_status mfbg_cmd_mfe(const char* config_path, int32_t starts, double damping,
                         double tol, int64_t max_iter, uint64_t start_seed,
                         const char* out_csv) {
  if (null_arg(config_path) || null_arg(out_csv)) return MFBG_ERR_INVALID_ARGUMENT;
  return guarded_io([&] {
    mfbg::GameConfig cfg = mfbg::load_config_file(config_path);
    const uint64_t seed = start_seed != 0 ? start_seed : cfg.seed;
    auto report =
        mfbg::mfe_report(cfg, starts, seed, options_from(tol, max_iter, damping));
    mfbg::write_mfe_report_csv(report, cfg, out_csv);
  });
}

mfbg_status mfbg_cmd_diagnose(const char* config_path, uint64_t seed,
                              const char* out_dir) {
  if (null_arg(config_path) || null_arg(out_dir)) return MFBG_ERR_INVALID_ARGUMENT;
  return guarded_io([&] {
    mfbg::GameConfig cfg = mfbg::load_config_file(config_path);
    mfbg::diagnose(cfg, seed, out_dir);
  });
}

} /* extern "C" */
