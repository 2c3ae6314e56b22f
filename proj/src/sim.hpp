// Discrete-event simulation of the same cell, with general phase/service
// distributions and deterministic replication streams.
#pragma once

#include "model.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace laacoex {

enum class Family { kExponential = 0, kDeterministic = 1, kLognormal = 2 };

struct Dist {
    Family family = Family::kExponential;
    double mean = 0.0; // 0 = derive from the matching rate in Params
    double cv = 0.0;   // lognormal only
};

// splitmix64 chain: stream index k yields the (k+1)-th output from `seed`.
uint64_t mix_seed(uint64_t seed, uint64_t stream);

struct Rng {
    std::mt19937_64 engine;
    explicit Rng(uint64_t seed) : engine(seed) {}
    // 53-bit uniform draw on (0, 1].
    double uniform();
};

// Pure sampling kernel; u2 is consumed by the lognormal family only.
double sample_kernel(const Dist& dist, double u1, double u2);
double sample(const Dist& dist, Rng& rng);

enum class FastStartMode { kExponential = 0, kImmediate = 1 };

struct SimConfig {
    Params params;
    uint64_t sessions = 1000000; // combined arrivals per replication
    uint64_t seed = 1;
    uint32_t replications = 10;
    double warmup_fraction = 0.05;
    FastStartMode fast_start_mode = FastStartMode::kExponential;
    Dist laa_interarrival;
    Dist wifi_interarrival;
    Dist laa_service;
    Dist wifi_service;
    Dist sense_duration;
    Dist on_duration;
    Dist off_duration;

    void validate() const; // throws ValidationError
};

struct RepStats {
    // Post-warmup tallies. "Ignored" arrivals found the system busy but fall
    // outside the counted blocking sets (Wi-Fi: channel held by Wi-Fi rather
    // than LAA; LAA: idle channel with a non-empty, non-full queue); they are
    // neither served nor counted as drops, matching the analytic sums.
    uint64_t laa_arrivals = 0;
    uint64_t laa_drops = 0;
    uint64_t laa_ignored = 0;
    uint64_t wifi_arrivals = 0;
    uint64_t wifi_drops = 0;
    uint64_t wifi_ignored = 0;
    uint64_t wifi_handovers = 0; // Wi-Fi completions handing over to queued LAA
    double p_drop_laa = 0.0;
    double p_drop_wifi = 0.0;
    double time_in_phase[3] = {0.0, 0.0, 0.0}; // fractions, post-warmup
    std::vector<double> time_in_state;         // fractions, enumerate_states order
    bool laa_no_arrivals = false;
    bool wifi_no_arrivals = false;
    // Whole-run accounting, for conservation checks.
    uint64_t laa_total_arrivals = 0;
    uint64_t laa_total_drops = 0;
    uint64_t laa_total_ignored = 0;
    uint64_t laa_total_served = 0;
    uint64_t laa_in_system_end = 0; // in service + queued
    uint64_t wifi_total_arrivals = 0;
    uint64_t wifi_total_drops = 0;
    uint64_t wifi_total_ignored = 0;
    uint64_t wifi_total_served = 0;
    uint64_t wifi_in_system_end = 0;
};

struct AggregateStats {
    uint64_t laa_arrivals = 0;
    uint64_t laa_drops = 0;
    uint64_t laa_ignored = 0;
    uint64_t wifi_arrivals = 0;
    uint64_t wifi_drops = 0;
    uint64_t wifi_ignored = 0;
    uint64_t wifi_handovers = 0;
    double p_drop_laa = 0.0; // mean across replications
    double p_drop_wifi = 0.0;
    double ci_halfwidth_laa = 0.0; // 95% Student-t
    double ci_halfwidth_wifi = 0.0;
    double time_in_phase[3] = {0.0, 0.0, 0.0};
    bool laa_no_arrivals = false;
    bool wifi_no_arrivals = false;
};

// 97.5% Student-t quantile (two-sided 95%), tabulated.
double student_t_975(uint32_t degrees_of_freedom);

RepStats run_replication(const SimConfig& config, uint32_t replication_index);
AggregateStats run_simulation(const SimConfig& config);

} // namespace laacoex
