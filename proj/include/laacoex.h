// laacoex — continuous-time Markov and discrete-event models of an
// unlicensed-band cell (LAA) sharing D channels with Wi-Fi, with optional
// listen-before-talk phase cycling and arrival buffering.
//
// C API: opaque handles, integer status codes, caller-owned plain structs.
// All functions are thread-compatible; the error message buffer is
// thread-local.
#ifndef LAACOEX_H
#define LAACOEX_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum laacoex_status {
    LAACOEX_OK = 0,
    LAACOEX_ERR_NULL_ARGUMENT = 1,   // required pointer was NULL
    LAACOEX_ERR_INVALID_ARGUMENT = 2, // parameter/config validation failed
    LAACOEX_ERR_STRUCTURAL = 3,      // chain reducible or closed classes != 1
    LAACOEX_ERR_NO_CONVERGENCE = 4,  // iterative solver hit max_iter
    LAACOEX_ERR_OUT_OF_RANGE = 5     // index or buffer size out of range
} laacoex_status;

// Human-readable name for a status code ("OK", "INVALID_ARGUMENT", ...).
const char* laacoex_status_name(laacoex_status status);

// Message describing the most recent failure on this thread; empty string if
// the last call on this thread succeeded.
const char* laacoex_last_error(void);

// ---------------------------------------------------------------------------
// Model parameters
// ---------------------------------------------------------------------------

typedef enum laacoex_threshold_mode {
    LAACOEX_THRESHOLD_NON_STRICT = 0, // cell wakes when queue length >= threshold
    LAACOEX_THRESHOLD_STRICT = 1     // cell wakes when queue length >  threshold
} laacoex_threshold_mode;

typedef struct laacoex_params {
    double lambda_laa;            // LAA packet arrival rate (>= 0)
    double lambda_wifi;           // Wi-Fi packet arrival rate (>= 0)
    double mu_laa;                // LAA service rate per busy server (> 0)
    double mu_wifi;               // Wi-Fi service rate per busy server (> 0)
    double mu_sense;              // sensing-phase completion rate (> 0)
    double mu_on;                 // transmission-phase expiry rate (> 0)
    double mu_off;                // idle-phase expiry rate (> 0)
    double fast_start_multiplier; // queued-pickup rate = multiplier * mu_on (> 0)
    int servers;                  // D, shared channel count (>= 1)
    int queue_capacity;           // Q, LAA buffer slots when buffering on (>= 0)
    int queue_threshold;          // Q_theta, wake-up threshold (0..Q)
    int lbt_enabled;              // 0: transmit always allowed; 1: phase cycle
    int buffering_enabled;        // 0: no queue (capacity treated as 0)
    int threshold_mode;           // laacoex_threshold_mode
} laacoex_params;

// Fill with the reference operating point: lambda_laa 25, lambda_wifi 5,
// mu_laa 25, mu_wifi 40, mu_sense 1, mu_on 0.1, mu_off 0.1, multiplier 10,
// D 1, Q 2, Q_theta 2, lbt on, buffering on, non-strict threshold.
void laacoex_params_init(laacoex_params* params);

// ---------------------------------------------------------------------------
// Markov model: state space and generator matrix
// ---------------------------------------------------------------------------

typedef struct laacoex_model laacoex_model; // opaque

laacoex_status laacoex_model_create(const laacoex_params* params,
                                    laacoex_model** out_model);
void laacoex_model_free(laacoex_model* model);

size_t laacoex_model_num_states(const laacoex_model* model);
size_t laacoex_model_num_transitions(const laacoex_model* model);

// State i as (phase, laa_in_service, wifi_in_service, queued); phase is
// 0 idle, 1 sensing, 2 transmitting. States are ordered lexicographically.
laacoex_status laacoex_model_state(const laacoex_model* model, size_t i,
                                   int out_wxyz[4]);

// Merged off-diagonal generator entry i (arbitrary but stable order).
laacoex_status laacoex_model_transition(const laacoex_model* model, size_t i,
                                        size_t* out_from, size_t* out_to,
                                        double* out_rate);

// Total outgoing rate of state i.
laacoex_status laacoex_model_exit_rate(const laacoex_model* model, size_t i,
                                       double* out_rate);

typedef struct laacoex_structure {
    int reachable_strongly_connected; // 1 if states reachable from the empty
                                      // initial state form one communicating class
    size_t num_closed_classes;        // communicating classes with no exit
    size_t num_recurrent_states;      // states inside closed classes
    size_t num_transient_states;      // everything else
    size_t num_reachable_states;      // reachable from the empty initial state
} laacoex_structure;

laacoex_status laacoex_model_structure(const laacoex_model* model,
                                       laacoex_structure* out);

// ---------------------------------------------------------------------------
// Stationary solvers
// ---------------------------------------------------------------------------

typedef enum laacoex_method {
    LAACOEX_SOLVE_DIRECT = 0,   // LU factorization of the balance equations
    LAACOEX_SOLVE_ITERATIVE = 1 // Gauss-Seidel power sweeps
} laacoex_method;

typedef struct laacoex_solve_options {
    double tolerance;   // iterative stop: max relative change per sweep
    uint64_t max_iterations;
} laacoex_solve_options;

// Defaults: tolerance 1e-12, max_iterations 1000000.
void laacoex_solve_options_init(laacoex_solve_options* options);

typedef struct laacoex_solution laacoex_solution; // opaque

// Both methods refuse reducible chains (LAACOEX_ERR_STRUCTURAL) and zero any
// transient states' probabilities. options may be NULL for defaults.
laacoex_status laacoex_solve(const laacoex_model* model, laacoex_method method,
                             const laacoex_solve_options* options,
                             laacoex_solution** out_solution);
void laacoex_solution_free(laacoex_solution* solution);

typedef struct laacoex_blocking {
    double p_block_laa;      // stationary probability an LAA arrival is lost
    double p_block_laa_held; // lost while LAA also holds every server
    double p_block_wifi;     // probability LAA holds every server
    double residual;         // max absolute balance-equation violation
    uint64_t iterations;     // sweeps used (0 for the direct method)
} laacoex_blocking;

laacoex_status laacoex_solution_blocking(const laacoex_solution* solution,
                                         laacoex_blocking* out);

// Copy the stationary distribution (model state order) into out[0..n-1];
// capacity must be >= laacoex_model_num_states.
laacoex_status laacoex_solution_pi(const laacoex_solution* solution,
                                   double* out, size_t capacity);

// ---------------------------------------------------------------------------
// Discrete-event simulation
// ---------------------------------------------------------------------------

typedef enum laacoex_dist_family {
    LAACOEX_DIST_EXPONENTIAL = 0,
    LAACOEX_DIST_DETERMINISTIC = 1,
    LAACOEX_DIST_LOGNORMAL = 2
} laacoex_dist_family;

typedef struct laacoex_dist {
    int family;  // laacoex_dist_family
    double mean; // 0 = derive from the matching rate in params
    double cv;   // coefficient of variation; lognormal only (> 0)
} laacoex_dist;

typedef enum laacoex_fast_start_mode {
    LAACOEX_FAST_START_EXPONENTIAL = 0, // delay ~ Exp(mean = on_mean / multiplier)
    LAACOEX_FAST_START_IMMEDIATE = 1    // queued packets start instantly
} laacoex_fast_start_mode;

typedef struct laacoex_sim_config {
    laacoex_params params;
    uint64_t sessions;      // combined arrivals per replication (default 1000000)
    uint64_t seed;          // default 1
    uint32_t replications;  // default 10
    double warmup_fraction; // leading arrivals excluded from stats (default 0.05)
    int fast_start_mode;    // laacoex_fast_start_mode
    laacoex_dist laa_interarrival;
    laacoex_dist wifi_interarrival;
    laacoex_dist laa_service;
    laacoex_dist wifi_service;
    laacoex_dist sense_duration;
    laacoex_dist on_duration;
    laacoex_dist off_duration;
} laacoex_sim_config;

void laacoex_sim_config_init(laacoex_sim_config* config);

typedef struct laacoex_sim_stats {
    uint64_t laa_arrivals;   // post-warmup, summed over replications
    uint64_t laa_drops;
    uint64_t laa_ignored;    // arrivals finding an idle channel with a
                             // non-empty, non-full queue: neither served nor
                             // counted as drops (no eligible transition)
    uint64_t wifi_arrivals;
    uint64_t wifi_drops;     // arrivals finding every server held by LAA
    uint64_t wifi_ignored;   // arrivals finding the channel held by Wi-Fi:
                             // outside the counted blocking set
    uint64_t wifi_preempt_handovers; // Wi-Fi completions that handed the
                                     // server straight to a queued LAA packet
    double p_drop_laa;       // mean over replications (0 when flagged below)
    double p_drop_wifi;
    double ci_halfwidth_laa; // 95% Student-t over replications (0 if <2 reps)
    double ci_halfwidth_wifi;
    double time_in_phase[3]; // post-warmup time fraction: idle/sensing/transmit
    int laa_no_arrivals;     // 1 if the LAA arrival process is switched off
    int wifi_no_arrivals;
} laacoex_sim_stats;

// Runs config->replications independent replications (streams derived from
// seed and the replication index) and aggregates.
laacoex_status laacoex_simulate(const laacoex_sim_config* config,
                                laacoex_sim_stats* out);

// Single replication, for reproducibility checks.
laacoex_status laacoex_simulate_replication(const laacoex_sim_config* config,
                                            uint32_t replication_index,
                                            laacoex_sim_stats* out);

// ---------------------------------------------------------------------------
// Experiments: reference comparisons and queue sweeps
// ---------------------------------------------------------------------------

typedef struct laacoex_comparison_row {
    char scenario[24];       // "lbt_buffering" or "buffering_only"
    double lambda_laa;
    double analytic_p_block_laa;
    double analytic_p_block_wifi;
    double sim_p_drop_laa;
    double sim_p_drop_wifi;
    double ci_halfwidth_laa;
    double ci_halfwidth_wifi;
    double error_pct_laa;    // 100*|analytic-sim|/analytic; see defined flags
    double error_pct_wifi;
    int error_defined_laa;   // 0 when the analytic value is 0
    int error_defined_wifi;
    int analytic_outside_ci_laa; // 1 when analytic misses the sim 95% CI
    int analytic_outside_ci_wifi;
} laacoex_comparison_row;

// Reference load grid used by both comparison tables (5 points).
size_t laacoex_reference_num_points(void);
laacoex_status laacoex_reference_point(int table, size_t i,
                                       double* out_lambda_laa,
                                       double* out_p_block_laa,
                                       double* out_p_block_wifi);

// table 1: listen-before-talk with buffering; table 2: always-on, buffered.
// On entry *inout_rows is the capacity of rows; on success it holds the
// number of rows written (one per reference point).
laacoex_status laacoex_run_comparison(int table, uint64_t sessions,
                                      uint32_t replications, uint64_t seed,
                                      laacoex_comparison_row* rows,
                                      size_t* inout_rows);

typedef struct laacoex_sweep_point {
    int queue_capacity;
    double p_block_laa;
    double p_block_wifi;
} laacoex_sweep_point;

// Analytic blocking versus queue capacity for one lbt/buffering variant at
// the symmetric-load operating point. On entry *inout_points is the capacity
// of points; on success it holds the number written (q_to - q_from + 1).
laacoex_status laacoex_queue_sweep(int lbt_enabled, int buffering_enabled,
                                   int q_from, int q_to,
                                   laacoex_sweep_point* points,
                                   size_t* inout_points);

// ---------------------------------------------------------------------------
// Wake-up gate interpretation report
// ---------------------------------------------------------------------------

typedef struct laacoex_interpretation {
    char name[40];
    int structurally_valid;  // 0 when the variant yields a reducible chain
    double max_rel_err_laa;  // worst relative error vs the reference table
    double max_rel_err_wifi;
    double max_rel_err;      // max of the two (HUGE_VAL when invalid)
} laacoex_interpretation;

// Evaluates candidate readings of the sleep/wake gates against the
// listen-before-talk reference table and ranks them. On entry *inout_results
// is the capacity of results; on success it holds the number written.
// *out_best indexes the lowest-error structurally valid variant.
laacoex_status laacoex_interpretation_scan(laacoex_interpretation* results,
                                           size_t* inout_results,
                                           size_t* out_best);

#ifdef __cplusplus
} // extern "C"
#endif

#endif // LAACOEX_H
