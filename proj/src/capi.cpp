// extern-C bridge over the internal C++ core.
#include "laacoex.h"

#include "experiments.hpp"
#include "model.hpp"
#include "sim.hpp"
#include "solver.hpp"

#include <cstring>
#include <stdexcept>
#include <string>

namespace {

thread_local std::string g_last_error;

laacoex_status fail(laacoex_status status, const std::string& message) {
    g_last_error = message;
    return status;
}

laacoex_status ok() {
    g_last_error.clear();
    return LAACOEX_OK;
}

// Index/capacity violations, distinct from parameter validation.
struct RangeError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

template <typename Fn>
laacoex_status guarded(Fn&& fn) {
    try {
        fn();
        return ok();
    } catch (const RangeError& e) {
        return fail(LAACOEX_ERR_OUT_OF_RANGE, e.what());
    } catch (const laacoex::ValidationError& e) {
        return fail(LAACOEX_ERR_INVALID_ARGUMENT, e.what());
    } catch (const laacoex::StructuralError& e) {
        return fail(LAACOEX_ERR_STRUCTURAL, e.what());
    } catch (const laacoex::ConvergenceError& e) {
        return fail(LAACOEX_ERR_NO_CONVERGENCE, e.what());
    } catch (const std::exception& e) {
        return fail(LAACOEX_ERR_INVALID_ARGUMENT, e.what());
    }
}

laacoex::Params to_internal(const laacoex_params& p) {
    if (p.threshold_mode != LAACOEX_THRESHOLD_NON_STRICT &&
        p.threshold_mode != LAACOEX_THRESHOLD_STRICT)
        throw laacoex::ValidationError("threshold_mode must be non_strict (0) or strict (1)");
    laacoex::Params out;
    out.lambda_laa = p.lambda_laa;
    out.lambda_wifi = p.lambda_wifi;
    out.mu_laa = p.mu_laa;
    out.mu_wifi = p.mu_wifi;
    out.mu_sense = p.mu_sense;
    out.mu_on = p.mu_on;
    out.mu_off = p.mu_off;
    out.fast_start_multiplier = p.fast_start_multiplier;
    out.servers = p.servers;
    out.queue_capacity = p.queue_capacity;
    out.queue_threshold = p.queue_threshold;
    out.lbt = p.lbt_enabled != 0;
    out.buffering = p.buffering_enabled != 0;
    out.threshold_mode = p.threshold_mode == LAACOEX_THRESHOLD_STRICT
                             ? laacoex::ThresholdMode::kStrict
                             : laacoex::ThresholdMode::kNonStrict;
    out.validate();
    return out;
}

laacoex::Dist to_internal(const laacoex_dist& d, const char* name) {
    if (d.family != LAACOEX_DIST_EXPONENTIAL && d.family != LAACOEX_DIST_DETERMINISTIC &&
        d.family != LAACOEX_DIST_LOGNORMAL)
        throw laacoex::ValidationError(std::string(name) + ".family is unknown");
    laacoex::Dist out;
    out.family = static_cast<laacoex::Family>(d.family);
    out.mean = d.mean;
    out.cv = d.cv;
    return out;
}

laacoex::SimConfig to_internal(const laacoex_sim_config& c) {
    if (c.fast_start_mode != LAACOEX_FAST_START_EXPONENTIAL &&
        c.fast_start_mode != LAACOEX_FAST_START_IMMEDIATE)
        throw laacoex::ValidationError("fast_start_mode must be exponential (0) or immediate (1)");
    laacoex::SimConfig out;
    out.params = to_internal(c.params);
    out.sessions = c.sessions;
    out.seed = c.seed;
    out.replications = c.replications;
    out.warmup_fraction = c.warmup_fraction;
    out.fast_start_mode = static_cast<laacoex::FastStartMode>(c.fast_start_mode);
    out.laa_interarrival = to_internal(c.laa_interarrival, "laa_interarrival");
    out.wifi_interarrival = to_internal(c.wifi_interarrival, "wifi_interarrival");
    out.laa_service = to_internal(c.laa_service, "laa_service");
    out.wifi_service = to_internal(c.wifi_service, "wifi_service");
    out.sense_duration = to_internal(c.sense_duration, "sense_duration");
    out.on_duration = to_internal(c.on_duration, "on_duration");
    out.off_duration = to_internal(c.off_duration, "off_duration");
    out.validate();
    return out;
}

void fill_stats(const laacoex::AggregateStats& agg, laacoex_sim_stats* out) {
    std::memset(out, 0, sizeof(*out));
    out->laa_arrivals = agg.laa_arrivals;
    out->laa_drops = agg.laa_drops;
    out->laa_ignored = agg.laa_ignored;
    out->wifi_arrivals = agg.wifi_arrivals;
    out->wifi_drops = agg.wifi_drops;
    out->wifi_ignored = agg.wifi_ignored;
    out->wifi_preempt_handovers = agg.wifi_handovers;
    out->p_drop_laa = agg.p_drop_laa;
    out->p_drop_wifi = agg.p_drop_wifi;
    out->ci_halfwidth_laa = agg.ci_halfwidth_laa;
    out->ci_halfwidth_wifi = agg.ci_halfwidth_wifi;
    for (int i = 0; i < 3; ++i) out->time_in_phase[i] = agg.time_in_phase[i];
    out->laa_no_arrivals = agg.laa_no_arrivals ? 1 : 0;
    out->wifi_no_arrivals = agg.wifi_no_arrivals ? 1 : 0;
}

void copy_name(char* dst, size_t cap, const std::string& src) {
    const size_t n = src.size() < cap - 1 ? src.size() : cap - 1;
    std::memcpy(dst, src.data(), n);
    dst[n] = '\0';
}

} // namespace

struct laacoex_model {
    laacoex::Params params;
    laacoex::RateMatrix matrix;
};

struct laacoex_solution {
    laacoex::Solution solution;
};

extern "C" {

const char* laacoex_status_name(laacoex_status status) {
    switch (status) {
        case LAACOEX_OK: return "OK";
        case LAACOEX_ERR_NULL_ARGUMENT: return "NULL_ARGUMENT";
        case LAACOEX_ERR_INVALID_ARGUMENT: return "INVALID_ARGUMENT";
        case LAACOEX_ERR_STRUCTURAL: return "STRUCTURAL";
        case LAACOEX_ERR_NO_CONVERGENCE: return "NO_CONVERGENCE";
        case LAACOEX_ERR_OUT_OF_RANGE: return "OUT_OF_RANGE";
    }
    return "UNKNOWN";
}

const char* laacoex_last_error(void) { return g_last_error.c_str(); }

void laacoex_params_init(laacoex_params* params) {
    if (!params) return;
    const laacoex::Params defaults;
    params->lambda_laa = defaults.lambda_laa;
    params->lambda_wifi = defaults.lambda_wifi;
    params->mu_laa = defaults.mu_laa;
    params->mu_wifi = defaults.mu_wifi;
    params->mu_sense = defaults.mu_sense;
    params->mu_on = defaults.mu_on;
    params->mu_off = defaults.mu_off;
    params->fast_start_multiplier = defaults.fast_start_multiplier;
    params->servers = defaults.servers;
    params->queue_capacity = defaults.queue_capacity;
    params->queue_threshold = defaults.queue_threshold;
    params->lbt_enabled = defaults.lbt ? 1 : 0;
    params->buffering_enabled = defaults.buffering ? 1 : 0;
    params->threshold_mode = LAACOEX_THRESHOLD_NON_STRICT;
}

laacoex_status laacoex_model_create(const laacoex_params* params, laacoex_model** out_model) {
    if (!params || !out_model) return fail(LAACOEX_ERR_NULL_ARGUMENT, "params and out_model are required");
    *out_model = nullptr;
    return guarded([&] {
        auto internal = to_internal(*params);
        auto model = new laacoex_model{internal, laacoex::build_rate_matrix(internal)};
        *out_model = model;
    });
}

void laacoex_model_free(laacoex_model* model) { delete model; }

size_t laacoex_model_num_states(const laacoex_model* model) {
    return model ? model->matrix.states.size() : 0;
}

size_t laacoex_model_num_transitions(const laacoex_model* model) {
    return model ? model->matrix.entries.size() : 0;
}

laacoex_status laacoex_model_state(const laacoex_model* model, size_t i, int out_wxyz[4]) {
    if (!model || !out_wxyz) return fail(LAACOEX_ERR_NULL_ARGUMENT, "model and out_wxyz are required");
    if (i >= model->matrix.states.size()) return fail(LAACOEX_ERR_OUT_OF_RANGE, "state index out of range");
    const laacoex::State& s = model->matrix.states[i];
    out_wxyz[0] = s.w;
    out_wxyz[1] = s.x;
    out_wxyz[2] = s.y;
    out_wxyz[3] = s.z;
    return ok();
}

laacoex_status laacoex_model_transition(const laacoex_model* model, size_t i, size_t* out_from,
                                        size_t* out_to, double* out_rate) {
    if (!model || !out_from || !out_to || !out_rate)
        return fail(LAACOEX_ERR_NULL_ARGUMENT, "model and all out pointers are required");
    if (i >= model->matrix.entries.size())
        return fail(LAACOEX_ERR_OUT_OF_RANGE, "transition index out of range");
    const auto& e = model->matrix.entries[i];
    *out_from = static_cast<size_t>(e.from);
    *out_to = static_cast<size_t>(e.to);
    *out_rate = e.rate;
    return ok();
}

laacoex_status laacoex_model_exit_rate(const laacoex_model* model, size_t i, double* out_rate) {
    if (!model || !out_rate) return fail(LAACOEX_ERR_NULL_ARGUMENT, "model and out_rate are required");
    if (i >= model->matrix.exit_rates.size())
        return fail(LAACOEX_ERR_OUT_OF_RANGE, "state index out of range");
    *out_rate = model->matrix.exit_rates[i];
    return ok();
}

laacoex_status laacoex_model_structure(const laacoex_model* model, laacoex_structure* out) {
    if (!model || !out) return fail(LAACOEX_ERR_NULL_ARGUMENT, "model and out are required");
    return guarded([&] {
        const laacoex::Structure s = laacoex::analyze_structure(model->matrix);
        out->reachable_strongly_connected = s.reachable_strongly_connected ? 1 : 0;
        out->num_closed_classes = s.closed_classes.size();
        out->num_recurrent_states = s.num_recurrent;
        out->num_transient_states = s.num_transient;
        out->num_reachable_states = s.num_reachable;
    });
}

void laacoex_solve_options_init(laacoex_solve_options* options) {
    if (!options) return;
    const laacoex::SolveOptions defaults;
    options->tolerance = defaults.tolerance;
    options->max_iterations = defaults.max_iterations;
}

laacoex_status laacoex_solve(const laacoex_model* model, laacoex_method method,
                             const laacoex_solve_options* options,
                             laacoex_solution** out_solution) {
    if (!model || !out_solution)
        return fail(LAACOEX_ERR_NULL_ARGUMENT, "model and out_solution are required");
    *out_solution = nullptr;
    return guarded([&] {
        laacoex::Solution solved;
        if (method == LAACOEX_SOLVE_DIRECT) {
            solved = laacoex::solve_direct(model->matrix, model->params);
        } else if (method == LAACOEX_SOLVE_ITERATIVE) {
            laacoex::SolveOptions opts;
            if (options) {
                opts.tolerance = options->tolerance;
                opts.max_iterations = options->max_iterations;
            }
            if (!(opts.tolerance > 0.0))
                throw laacoex::ValidationError("tolerance must be > 0");
            if (opts.max_iterations == 0)
                throw laacoex::ValidationError("max_iterations must be >= 1");
            solved = laacoex::solve_iterative(model->matrix, model->params, opts);
        } else {
            throw laacoex::ValidationError("method must be direct (0) or iterative (1)");
        }
        *out_solution = new laacoex_solution{std::move(solved)};
    });
}

void laacoex_solution_free(laacoex_solution* solution) { delete solution; }

laacoex_status laacoex_solution_blocking(const laacoex_solution* solution, laacoex_blocking* out) {
    if (!solution || !out) return fail(LAACOEX_ERR_NULL_ARGUMENT, "solution and out are required");
    out->p_block_laa = solution->solution.p_block_laa;
    out->p_block_laa_held = solution->solution.p_block_laa_held;
    out->p_block_wifi = solution->solution.p_block_wifi;
    out->residual = solution->solution.residual;
    out->iterations = solution->solution.iterations;
    return ok();
}

laacoex_status laacoex_solution_pi(const laacoex_solution* solution, double* out, size_t capacity) {
    if (!solution || !out) return fail(LAACOEX_ERR_NULL_ARGUMENT, "solution and out are required");
    const auto& pi = solution->solution.pi;
    if (capacity < pi.size()) return fail(LAACOEX_ERR_OUT_OF_RANGE, "capacity is too small");
    std::memcpy(out, pi.data(), pi.size() * sizeof(double));
    return ok();
}

void laacoex_sim_config_init(laacoex_sim_config* config) {
    if (!config) return;
    std::memset(config, 0, sizeof(*config));
    laacoex_params_init(&config->params);
    const laacoex::SimConfig defaults;
    config->sessions = defaults.sessions;
    config->seed = defaults.seed;
    config->replications = defaults.replications;
    config->warmup_fraction = defaults.warmup_fraction;
    config->fast_start_mode = LAACOEX_FAST_START_EXPONENTIAL;
    // Distributions default to exponential with means derived from params.
}

laacoex_status laacoex_simulate(const laacoex_sim_config* config, laacoex_sim_stats* out) {
    if (!config || !out) return fail(LAACOEX_ERR_NULL_ARGUMENT, "config and out are required");
    return guarded([&] { fill_stats(laacoex::run_simulation(to_internal(*config)), out); });
}

laacoex_status laacoex_simulate_replication(const laacoex_sim_config* config,
                                            uint32_t replication_index, laacoex_sim_stats* out) {
    if (!config || !out) return fail(LAACOEX_ERR_NULL_ARGUMENT, "config and out are required");
    return guarded([&] {
        const laacoex::RepStats rs = laacoex::run_replication(to_internal(*config), replication_index);
        std::memset(out, 0, sizeof(*out));
        out->laa_arrivals = rs.laa_arrivals;
        out->laa_drops = rs.laa_drops;
        out->laa_ignored = rs.laa_ignored;
        out->wifi_arrivals = rs.wifi_arrivals;
        out->wifi_drops = rs.wifi_drops;
        out->wifi_ignored = rs.wifi_ignored;
        out->wifi_preempt_handovers = rs.wifi_handovers;
        out->p_drop_laa = rs.p_drop_laa;
        out->p_drop_wifi = rs.p_drop_wifi;
        for (int i = 0; i < 3; ++i) out->time_in_phase[i] = rs.time_in_phase[i];
        out->laa_no_arrivals = rs.laa_no_arrivals ? 1 : 0;
        out->wifi_no_arrivals = rs.wifi_no_arrivals ? 1 : 0;
    });
}

size_t laacoex_reference_num_points(void) { return laacoex::reference_table(1).size(); }

laacoex_status laacoex_reference_point(int table, size_t i, double* out_lambda_laa,
                                       double* out_p_block_laa, double* out_p_block_wifi) {
    if (!out_lambda_laa || !out_p_block_laa || !out_p_block_wifi)
        return fail(LAACOEX_ERR_NULL_ARGUMENT, "all out pointers are required");
    return guarded([&] {
        const auto& ref = laacoex::reference_table(table);
        if (i >= ref.size()) throw RangeError("reference point index out of range");
        *out_lambda_laa = ref[i].lambda_laa;
        *out_p_block_laa = ref[i].p_block_laa;
        *out_p_block_wifi = ref[i].p_block_wifi;
    });
}

laacoex_status laacoex_run_comparison(int table, uint64_t sessions, uint32_t replications,
                                      uint64_t seed, laacoex_comparison_row* rows,
                                      size_t* inout_rows) {
    if (!rows || !inout_rows) return fail(LAACOEX_ERR_NULL_ARGUMENT, "rows and inout_rows are required");
    return guarded([&] {
        const auto result = laacoex::run_comparison(table, sessions, replications, seed);
        if (*inout_rows < result.size())
            throw RangeError("rows capacity is too small");
        for (size_t i = 0; i < result.size(); ++i) {
            const auto& r = result[i];
            laacoex_comparison_row& out = rows[i];
            std::memset(&out, 0, sizeof(out));
            copy_name(out.scenario, sizeof(out.scenario), r.scenario);
            out.lambda_laa = r.lambda_laa;
            out.analytic_p_block_laa = r.analytic_p_block_laa;
            out.analytic_p_block_wifi = r.analytic_p_block_wifi;
            out.sim_p_drop_laa = r.sim_p_drop_laa;
            out.sim_p_drop_wifi = r.sim_p_drop_wifi;
            out.ci_halfwidth_laa = r.ci_halfwidth_laa;
            out.ci_halfwidth_wifi = r.ci_halfwidth_wifi;
            out.error_pct_laa = r.error_laa.pct;
            out.error_pct_wifi = r.error_wifi.pct;
            out.error_defined_laa = r.error_laa.defined ? 1 : 0;
            out.error_defined_wifi = r.error_wifi.defined ? 1 : 0;
            out.analytic_outside_ci_laa = r.analytic_outside_ci_laa ? 1 : 0;
            out.analytic_outside_ci_wifi = r.analytic_outside_ci_wifi ? 1 : 0;
        }
        *inout_rows = result.size();
    });
}

laacoex_status laacoex_queue_sweep(int lbt_enabled, int buffering_enabled, int q_from, int q_to,
                                   laacoex_sweep_point* points, size_t* inout_points) {
    if (!points || !inout_points)
        return fail(LAACOEX_ERR_NULL_ARGUMENT, "points and inout_points are required");
    return guarded([&] {
        const auto result =
            laacoex::queue_sweep(lbt_enabled != 0, buffering_enabled != 0, q_from, q_to);
        if (*inout_points < result.size())
            throw RangeError("points capacity is too small");
        for (size_t i = 0; i < result.size(); ++i)
            points[i] = {result[i].queue_capacity, result[i].p_block_laa, result[i].p_block_wifi};
        *inout_points = result.size();
    });
}

laacoex_status laacoex_interpretation_scan(laacoex_interpretation* results, size_t* inout_results,
                                           size_t* out_best) {
    if (!results || !inout_results || !out_best)
        return fail(LAACOEX_ERR_NULL_ARGUMENT, "results, inout_results and out_best are required");
    return guarded([&] {
        size_t best = 0;
        const auto scan = laacoex::interpretation_scan(best);
        if (*inout_results < scan.size())
            throw RangeError("results capacity is too small");
        for (size_t i = 0; i < scan.size(); ++i) {
            laacoex_interpretation& out = results[i];
            std::memset(&out, 0, sizeof(out));
            copy_name(out.name, sizeof(out.name), scan[i].name);
            out.structurally_valid = scan[i].structurally_valid ? 1 : 0;
            out.max_rel_err_laa = scan[i].max_rel_err_laa;
            out.max_rel_err_wifi = scan[i].max_rel_err_wifi;
            out.max_rel_err = scan[i].max_rel_err;
        }
        *inout_results = scan.size();
        *out_best = best;
    });
}

} // extern "C"
