/* mfbg — large-population bandit games with mean-field rewards.
 *
 * C interface to the simulation and analysis core. All objects are opaque
 * handles created and destroyed by this library; every function returns an
 * mfbg_status, and mfbg_last_error() describes the most recent failure on
 * the calling thread.
 *
 * Indices are 0-based throughout this interface (agents, arms, slots).
 * Unless stated otherwise, output buffers must be caller-allocated with the
 * documented capacity.
 */
#ifndef MFBG_H
#define MFBG_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MFBG_API __declspec(dllexport)
#else
#define MFBG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mfbg_status {
  MFBG_OK = 0,
  MFBG_ERR_INVALID_ARGUMENT = 1, /* bad pointer, index, or parameter */
  MFBG_ERR_INVALID_CONFIG = 2,   /* a config invariant is violated */
  MFBG_ERR_IO = 3,               /* file could not be read or written */
  MFBG_ERR_NUMERIC = 4,          /* runtime numeric failure */
  MFBG_ERR_UNSUPPORTED = 5       /* operation not defined for this input */
} mfbg_status;

typedef struct mfbg_config mfbg_config; /* experiment description */
typedef struct mfbg_trace mfbg_trace;   /* one recorded simulation run */
typedef struct mfbg_mfe mfbg_mfe;       /* fixed-point solve result */

/* Message for the last failing call on this thread; empty string if none. */
MFBG_API const char* mfbg_last_error(void);
MFBG_API const char* mfbg_status_name(mfbg_status status);

/* ---- configuration ------------------------------------------------- */

/* Fresh config with library defaults (100 agents, 4 arms, 2000 slots,
 * general reward theta 0.5, beta 0.5, eta 0.2, alpha 1, seed 1). */
MFBG_API mfbg_status mfbg_config_create(mfbg_config** out);
MFBG_API void mfbg_config_free(mfbg_config* config);

MFBG_API mfbg_status mfbg_config_load_file(const char* path, mfbg_config** out);
MFBG_API mfbg_status mfbg_config_load_string(const char* json_text, mfbg_config** out);
MFBG_API mfbg_status mfbg_config_save_file(const mfbg_config* config, const char* path);
/* JSON text; free the returned buffer with mfbg_string_free. */
MFBG_API mfbg_status mfbg_config_to_string(const mfbg_config* config, char** out);
MFBG_API void mfbg_string_free(char* text);

MFBG_API mfbg_status mfbg_config_set_num_agents(mfbg_config* config, int32_t n);
MFBG_API mfbg_status mfbg_config_set_num_arms(mfbg_config* config, int32_t m);
MFBG_API mfbg_status mfbg_config_set_horizon(mfbg_config* config, int64_t t);
MFBG_API mfbg_status mfbg_config_set_seed(mfbg_config* config, uint64_t seed);
MFBG_API mfbg_status mfbg_config_set_stepsize_alpha(mfbg_config* config, double alpha);
MFBG_API mfbg_status mfbg_config_set_snapshot_stride(mfbg_config* config, int32_t stride);
/* One shared smoothing parameter, or one per agent. */
MFBG_API mfbg_status mfbg_config_set_beta(mfbg_config* config, double beta);
MFBG_API mfbg_status mfbg_config_set_betas(mfbg_config* config, const double* betas,
                                           size_t count);
/* Constant exploration weight, or the diminishing schedule eta0/(n+1)^kappa. */
MFBG_API mfbg_status mfbg_config_set_eta(mfbg_config* config, double eta);
MFBG_API mfbg_status mfbg_config_set_eta_schedule(mfbg_config* config, double eta0,
                                                  double kappa);
/* kind is "general" or "linear". */
MFBG_API mfbg_status mfbg_config_set_reward(mfbg_config* config, const char* kind,
                                            double theta);
/* Pin per-arm parameters instead of sampling them from the run seed. */
MFBG_API mfbg_status mfbg_config_set_arm_thetas(mfbg_config* config,
                                                const double* thetas, size_t count);
/* Restrict one agent to the given arms. */
MFBG_API mfbg_status mfbg_config_set_arm_subset(mfbg_config* config, int32_t agent,
                                                const int32_t* arms, size_t count);

/* reward_fn(fractions, num_arms, arm, user) must return a value in [0, 1].
 * lipschitz is the declared Lipschitz constant of the function in the
 * population profile; reads_full_profile is 0 when the reward of arm j reads
 * only fractions[j]. Custom configs cannot be saved to files. */
typedef double (*mfbg_reward_fn)(const double* fractions, int32_t num_arms,
                                 int32_t arm, void* user);
MFBG_API mfbg_status mfbg_config_set_custom_reward(mfbg_config* config,
                                                   mfbg_reward_fn reward_fn, void* user,
                                                   double lipschitz,
                                                   int reads_full_profile);

MFBG_API mfbg_status mfbg_config_validate(const mfbg_config* config);

MFBG_API mfbg_status mfbg_config_get_num_agents(const mfbg_config* config, int32_t* out);
MFBG_API mfbg_status mfbg_config_get_num_arms(const mfbg_config* config, int32_t* out);
MFBG_API mfbg_status mfbg_config_get_horizon(const mfbg_config* config, int64_t* out);
MFBG_API mfbg_status mfbg_config_get_seed(const mfbg_config* config, uint64_t* out);

/* ---- simulation ----------------------------------------------------- */

/* Runs the game for the configured horizon. Deterministic per config. */
MFBG_API mfbg_status mfbg_simulate(const mfbg_config* config, mfbg_trace** out);
MFBG_API void mfbg_trace_free(mfbg_trace* trace);

MFBG_API mfbg_status mfbg_trace_num_agents(const mfbg_trace* trace, int32_t* out);
MFBG_API mfbg_status mfbg_trace_num_arms(const mfbg_trace* trace, int32_t* out);
MFBG_API mfbg_status mfbg_trace_horizon(const mfbg_trace* trace, int64_t* out);

MFBG_API mfbg_status mfbg_trace_action(const mfbg_trace* trace, int64_t slot,
                                       int32_t agent, int32_t* out);
/* out must hold num_arms values. */
MFBG_API mfbg_status mfbg_trace_population(const mfbg_trace* trace, int64_t slot,
                                           double* out);
MFBG_API mfbg_status mfbg_trace_reward(const mfbg_trace* trace, int64_t slot,
                                       int32_t agent, double* out);
/* Policy row the agent sampled from at the slot; out holds num_arms values. */
MFBG_API mfbg_status mfbg_trace_sigma(const mfbg_trace* trace, int64_t slot,
                                      int32_t agent, double* out);
/* State at the start of a slot (slot == horizon gives the terminal state);
 * out holds num_agents*num_arms values, row-major. Fails for thinned slots. */
MFBG_API mfbg_status mfbg_trace_state(const mfbg_trace* trace, int64_t slot,
                                      double* out);
/* out must hold num_arms values. */
MFBG_API mfbg_status mfbg_trace_arm_thetas(const mfbg_trace* trace, double* out);

MFBG_API mfbg_status mfbg_trace_regret(const mfbg_trace* trace, int32_t agent,
                                       double* out);
MFBG_API mfbg_status mfbg_trace_mean_regret(const mfbg_trace* trace, double* out);
MFBG_API mfbg_status mfbg_trace_cumulative_reward(const mfbg_trace* trace, double* out);

/* states.csv, population.csv, rewards.csv under dir (created if needed). */
MFBG_API mfbg_status mfbg_trace_export_csv(const mfbg_trace* trace, const char* dir);

/* ---- equilibrium ----------------------------------------------------- */

/* Damped fixed-point solve; tol <= 0, max_iter <= 0 or damping <= 0 pick the
 * defaults (1e-10, 100000, 0.5). Non-convergence is reported through
 * mfbg_mfe_converged, not as an error. */
MFBG_API mfbg_status mfbg_solve_mfe(const mfbg_config* config, double tol,
                                    int64_t max_iter, double damping, mfbg_mfe** out);
/* Same, from an explicit initial profile (num_agents*num_arms, row-major). */
MFBG_API mfbg_status mfbg_solve_mfe_from(const mfbg_config* config,
                                         const double* initial, double tol,
                                         int64_t max_iter, double damping,
                                         mfbg_mfe** out);
MFBG_API void mfbg_mfe_free(mfbg_mfe* mfe);
MFBG_API mfbg_status mfbg_mfe_converged(const mfbg_mfe* mfe, int* out);
MFBG_API mfbg_status mfbg_mfe_residual(const mfbg_mfe* mfe, double* out);
MFBG_API mfbg_status mfbg_mfe_iterations(const mfbg_mfe* mfe, int64_t* out);
/* out holds num_agents*num_arms values, row-major. */
MFBG_API mfbg_status mfbg_mfe_state(const mfbg_mfe* mfe, double* out);

/* Terminal state of the deterministic dynamics started from `initial`
 * (NULL: the seeded random initial state). out as in mfbg_mfe_state. */
MFBG_API mfbg_status mfbg_ode_terminal(const mfbg_config* config, const double* initial,
                                       double t_end, double dt, double* out);

/* ---- analysis -------------------------------------------------------- */

MFBG_API mfbg_status mfbg_check_contraction_general(double theta, double beta,
                                                    double eta, int* satisfied,
                                                    double* margin);
MFBG_API mfbg_status mfbg_check_contraction_linear(double theta, double beta,
                                                   double eta, int* satisfied,
                                                   double* margin);
MFBG_API mfbg_status mfbg_check_contraction_heterogeneous(double theta,
                                                          const double* betas,
                                                          size_t count, int linear,
                                                          int* satisfied,
                                                          double* margin);

/* Both sides of the cumulative state-change inequality at cutoff K. */
MFBG_API mfbg_status mfbg_state_change_bound(const mfbg_trace* trace, int32_t agent,
                                             int32_t arm, int64_t cutoff, double* lhs,
                                             double* rhs);

/* Per-arm variance of the population profile sampled at the solved
 * equilibrium. empirical/analytic must hold num_arms values. */
MFBG_API mfbg_status mfbg_population_variance(const mfbg_config* config,
                                              int32_t num_samples, uint64_t sample_seed,
                                              double* empirical, double* analytic,
                                              double* bound);

/* Empirical Lipschitz estimate of the expected-reward map over random
 * profile pairs. mode 0: deterministic closure; mode 1: Monte-Carlo with
 * mc_samples action profiles per evaluation. */
MFBG_API mfbg_status mfbg_empirical_contraction(const mfbg_config* config,
                                                int32_t num_pairs, uint64_t seed,
                                                int mode, int32_t mc_samples,
                                                double* out);

/* ---- experiment drivers (CLI back ends) ------------------------------ */

/* One trace set per seed under out_dir/seed-<k>/. */
MFBG_API mfbg_status mfbg_cmd_run(const char* config_path, const uint64_t* seeds,
                                  size_t num_seeds, const char* out_dir, int workers,
                                  int smooth_window);

/* Regret/reward summary at T = 2000, M = 4 over the benchmark parameter
 * sets. reward_kind is "general" or "linear"; seeds may be NULL to use
 * 1..runs. */
MFBG_API mfbg_status mfbg_cmd_table(const char* reward_kind, int contraction,
                                    const int32_t* agent_counts, size_t num_counts,
                                    int32_t runs, const uint64_t* seeds,
                                    size_t num_seeds, const char* out_csv, int workers);

/* Fixed-point search from `starts` random initializations; per-start rows
 * and cluster assignments go to out_csv. start_seed 0 uses the config seed. */
MFBG_API mfbg_status mfbg_cmd_mfe(const char* config_path, int32_t starts,
                                  double damping, double tol, int64_t max_iter,
                                  uint64_t start_seed, const char* out_csv);

/* Simulation + deterministic trajectory diagnostics bundle under out_dir. */
MFBG_API mfbg_status mfbg_cmd_diagnose(const char* config_path, uint64_t seed,
                                       const char* out_dir);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* MFBG_H */
