// Reference comparisons, queue-capacity sweeps, and the wake-gate
// interpretation scan.
#pragma once

#include "sim.hpp"
#include "solver.hpp"

#include <string>
#include <vector>

namespace laacoex {

// "lbt_buffering", "lbt_only", "buffering_only", or "baseline".
const char* variant_label(bool lbt, bool buffering);

struct ReferencePoint {
    double lambda_laa;
    double p_block_laa;
    double p_block_wifi;
};

// Published blocking probabilities at the reference operating points.
// Table 1: listen-before-talk with buffering; table 2: always-on, buffered.
const std::vector<ReferencePoint>& reference_table(int table);

// Reference parameters for one table at a given LAA load.
Params table_params(int table, double lambda_laa);

struct ErrorPct {
    double pct = 0.0;   // 100*|analytic - simulated| / analytic
    bool defined = false; // false when the analytic value is 0
};
ErrorPct compare_values(double analytic, double simulated);

struct ComparisonRow {
    std::string scenario;
    double lambda_laa = 0.0;
    double analytic_p_block_laa = 0.0;
    double analytic_p_block_wifi = 0.0;
    double sim_p_drop_laa = 0.0;
    double sim_p_drop_wifi = 0.0;
    double ci_halfwidth_laa = 0.0;
    double ci_halfwidth_wifi = 0.0;
    ErrorPct error_laa;
    ErrorPct error_wifi;
    bool analytic_outside_ci_laa = false;
    bool analytic_outside_ci_wifi = false;
};

// Direct analytic solve + simulation at every reference point of one table.
std::vector<ComparisonRow> run_comparison(int table, uint64_t sessions,
                                          uint32_t replications, uint64_t seed);

struct SweepPoint {
    int queue_capacity = 0;
    double p_block_laa = 0.0;
    double p_block_wifi = 0.0;
};

// Parameters for the symmetric-load queue sweep (both arrival rates at half
// the Wi-Fi service rate, unit service rates, slow phase cycling).
Params sweep_params(bool lbt, bool buffering, int queue_capacity);

// Analytic blocking versus queue capacity for one lbt/buffering variant.
std::vector<SweepPoint> queue_sweep(bool lbt, bool buffering, int q_from, int q_to);

struct Interpretation {
    std::string name;
    bool structurally_valid = false;
    double max_rel_err_laa = 0.0;
    double max_rel_err_wifi = 0.0;
    double max_rel_err = 0.0;
};

// Solves every candidate gate reading against the listen-before-talk
// reference table; best_index points at the lowest-error valid reading.
std::vector<Interpretation> interpretation_scan(size_t& best_index);

// Multi-line human-readable rendering of the scan.
std::string interpretation_report();

} // namespace laacoex
