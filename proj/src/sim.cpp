#include "sim.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace laacoex {

namespace {

constexpr double kPi = 3.14159265358979323846;

uint64_t splitmix_next(uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace

uint64_t mix_seed(uint64_t seed, uint64_t stream) {
    uint64_t state = seed;
    uint64_t value = 0;
    for (uint64_t i = 0; i <= stream; ++i) value = splitmix_next(state);
    return value;
}

double Rng::uniform() {
    const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    return u > 0.0 ? u : 0x1.0p-53;
}

double sample_kernel(const Dist& dist, double u1, double u2) {
    switch (dist.family) {
        case Family::kExponential:
            return -dist.mean * std::log(u1);
        case Family::kDeterministic:
            return dist.mean;
        case Family::kLognormal: {
            const double sigma2 = std::log(1.0 + dist.cv * dist.cv);
            const double mu = std::log(dist.mean) - 0.5 * sigma2;
            const double normal = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
            return std::exp(mu + std::sqrt(sigma2) * normal);
        }
    }
    return dist.mean;
}

double sample(const Dist& dist, Rng& rng) {
    const double u1 = rng.uniform();
    const double u2 = dist.family == Family::kLognormal ? rng.uniform() : 0.5;
    return sample_kernel(dist, u1, u2);
}

double student_t_975(uint32_t degrees_of_freedom) {
    static const double table[31] = {0,     12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365,
                                     2.306, 2.262,  2.228, 2.201, 2.179, 2.160, 2.145, 2.131,
                                     2.120, 2.110,  2.101, 2.093, 2.086, 2.080, 2.074, 2.069,
                                     2.064, 2.060,  2.056, 2.052, 2.048, 2.045, 2.042};
    if (degrees_of_freedom == 0) return 0.0;
    if (degrees_of_freedom <= 30) return table[degrees_of_freedom];
    if (degrees_of_freedom <= 40) return 2.021;
    if (degrees_of_freedom <= 60) return 2.000;
    if (degrees_of_freedom <= 120) return 1.980;
    return 1.960;
}

namespace {

void validate_dist(const Dist& d, const char* name) {
    if (!(std::isfinite(d.mean)) || d.mean < 0.0)
        throw ValidationError(std::string(name) + ".mean must be finite and >= 0");
    if (d.family == Family::kLognormal && !(d.cv > 0.0 && std::isfinite(d.cv)))
        throw ValidationError(std::string(name) + ".cv must be finite and > 0 for lognormal");
    if (d.family != Family::kExponential && d.family != Family::kDeterministic &&
        d.family != Family::kLognormal)
        throw ValidationError(std::string(name) + ".family is unknown");
}

// mean 0 means "derive from the rate"; a zero rate disables the process
// (only meaningful for inter-arrival times).
Dist resolve(Dist d, double rate) {
    if (d.mean <= 0.0) d.mean = rate > 0.0 ? 1.0 / rate : 0.0;
    return d;
}

enum class Ev { kLaaDeparture, kWifiDeparture, kPhase, kFastStart, kLaaArrival, kWifiArrival };

int priority(Ev type) {
    switch (type) {
        case Ev::kLaaDeparture:
        case Ev::kWifiDeparture: return 0;
        case Ev::kPhase: return 1;
        case Ev::kFastStart: return 2;
        case Ev::kLaaArrival:
        case Ev::kWifiArrival: return 3;
    }
    return 3;
}

struct Event {
    double t;
    int prio;
    uint64_t seq;
    Ev type;
    uint64_t gen;
};

struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
        if (a.t != b.t) return a.t > b.t;
        if (a.prio != b.prio) return a.prio > b.prio;
        return a.seq > b.seq;
    }
};

} // namespace

void SimConfig::validate() const {
    params.validate();
    if (sessions == 0) throw ValidationError("sessions must be >= 1");
    if (replications == 0) throw ValidationError("replications must be >= 1");
    if (!(warmup_fraction >= 0.0 && warmup_fraction < 1.0))
        throw ValidationError("warmup_fraction must lie in [0, 1)");
    if (fast_start_mode != FastStartMode::kExponential &&
        fast_start_mode != FastStartMode::kImmediate)
        throw ValidationError("fast_start_mode is unknown");
    validate_dist(laa_interarrival, "laa_interarrival");
    validate_dist(wifi_interarrival, "wifi_interarrival");
    validate_dist(laa_service, "laa_service");
    validate_dist(wifi_service, "wifi_service");
    validate_dist(sense_duration, "sense_duration");
    validate_dist(on_duration, "on_duration");
    validate_dist(off_duration, "off_duration");
    if (resolve(laa_interarrival, params.lambda_laa).mean <= 0.0 &&
        resolve(wifi_interarrival, params.lambda_wifi).mean <= 0.0)
        throw ValidationError("at least one arrival process must be enabled");
}

RepStats run_replication(const SimConfig& config, uint32_t replication_index) {
    config.validate();
    const Params& p = config.params;
    const int d = p.servers;
    const int q_eff = p.effective_queue();
    const GateVariant gates = gate_variant(p);

    const Dist laa_inter = resolve(config.laa_interarrival, p.lambda_laa);
    const Dist wifi_inter = resolve(config.wifi_interarrival, p.lambda_wifi);
    const Dist laa_serv = resolve(config.laa_service, p.mu_laa);
    const Dist wifi_serv = resolve(config.wifi_service, p.mu_wifi);
    const Dist sense_dur = resolve(config.sense_duration, p.mu_sense);
    const Dist on_dur = resolve(config.on_duration, p.mu_on);
    const Dist off_dur = resolve(config.off_duration, p.mu_off);
    // Queued-pickup delay scales the transmit-phase mean down by the multiplier.
    const Dist fast_dist{Family::kExponential, on_dur.mean / p.fast_start_multiplier, 0.0};
    const bool laa_enabled = laa_inter.mean > 0.0;
    const bool wifi_enabled = wifi_inter.mean > 0.0;

    RepStats rs;
    rs.laa_no_arrivals = !laa_enabled;
    rs.wifi_no_arrivals = !wifi_enabled;

    const std::vector<State> states = enumerate_states(p);
    rs.time_in_state.assign(states.size(), 0.0);
    // Dense (w,x,y,z) -> state index lookup.
    const int w_lo = p.lbt ? kOff : kOn;
    const size_t wspan = static_cast<size_t>(kOn - w_lo + 1);
    const size_t xspan = static_cast<size_t>(d + 1);
    const size_t zspan = static_cast<size_t>(q_eff + 1);
    std::vector<int> lookup(wspan * xspan * xspan * zspan, -1);
    auto cell = [&](int w, int x, int y, int z) -> size_t {
        return ((static_cast<size_t>(w - w_lo) * xspan + static_cast<size_t>(x)) * xspan +
                static_cast<size_t>(y)) *
                   zspan +
               static_cast<size_t>(z);
    };
    for (size_t i = 0; i < states.size(); ++i)
        lookup[cell(states[i].w, states[i].x, states[i].y, states[i].z)] = static_cast<int>(i);

    Rng rng(mix_seed(config.seed, replication_index));

    int w = p.lbt ? kOff : kOn;
    int x = 0, y = 0, z = 0;

    std::priority_queue<Event, std::vector<Event>, EventAfter> heap;
    uint64_t seq = 0;
    auto push = [&](double t, Ev type, uint64_t gen = 0) {
        heap.push({t, priority(type), seq++, type, gen});
    };

    double now = 0.0;
    if (laa_enabled) push(sample(laa_inter, rng), Ev::kLaaArrival);
    if (wifi_enabled) push(sample(wifi_inter, rng), Ev::kWifiArrival);
    if (p.lbt) push(sample(off_dur, rng), Ev::kPhase);

    uint64_t fs_gen = 0;
    bool fs_pending = false;
    auto fs_gate = [&] { return p.lbt && w == kOn && y == 0 && z > 0 && x < d; };
    auto start_laa_service = [&] { push(now + sample(laa_serv, rng), Ev::kLaaDeparture); };
    auto sync_fast_start = [&] {
        if (!p.lbt) return;
        if (config.fast_start_mode == FastStartMode::kImmediate) {
            while (fs_gate()) {
                x += 1;
                z -= 1;
                start_laa_service();
            }
            return;
        }
        if (fs_pending && !fs_gate()) {
            fs_pending = false;
            ++fs_gen;
        } else if (!fs_pending && fs_gate()) {
            fs_pending = true;
            push(now + sample(fast_dist, rng), Ev::kFastStart, ++fs_gen);
        }
    };

    const uint64_t warm_target =
        static_cast<uint64_t>(config.warmup_fraction * static_cast<double>(config.sessions));
    bool stats_on = warm_target == 0;
    double stats_start = 0.0;
    double last_t = 0.0;
    double phase_acc[3] = {0.0, 0.0, 0.0};
    std::vector<double> state_acc(states.size(), 0.0);
    auto advance_clock = [&](double t) {
        if (stats_on) {
            const double dt = t - last_t;
            phase_acc[w] += dt;
            state_acc[static_cast<size_t>(lookup[cell(w, x, y, z)])] += dt;
        }
        last_t = t;
    };

    uint64_t arrivals_total = 0;
    bool done = false;
    while (!done && !heap.empty()) {
        const Event ev = heap.top();
        heap.pop();
        now = ev.t;
        advance_clock(now);
        switch (ev.type) {
            case Ev::kLaaArrival: {
                ++arrivals_total;
                ++rs.laa_total_arrivals;
                const bool counted = arrivals_total > warm_target;
                if (!stats_on && arrivals_total >= warm_target) {
                    stats_on = true;
                    stats_start = now;
                }
                if (counted) ++rs.laa_arrivals;
                if (w == kOn && x + y < d && z == 0) {
                    x += 1;
                    start_laa_service();
                } else if (z < q_eff && (x + y == d || w != kOn)) {
                    z += 1;
                } else if (q_eff > 0 ? z == q_eff : (x + y == d || w != kOn)) {
                    ++rs.laa_total_drops;
                    if (counted) ++rs.laa_drops;
                } else {
                    // Idle ON channel with 0 < z < Q: no eligible transition
                    // (the queue drains via fast-start, not new arrivals).
                    ++rs.laa_total_ignored;
                    if (counted) ++rs.laa_ignored;
                }
                if (arrivals_total >= config.sessions) {
                    done = true;
                    break;
                }
                push(now + sample(laa_inter, rng), Ev::kLaaArrival);
                sync_fast_start();
                break;
            }
            case Ev::kWifiArrival: {
                ++arrivals_total;
                ++rs.wifi_total_arrivals;
                const bool counted = arrivals_total > warm_target;
                if (!stats_on && arrivals_total >= warm_target) {
                    stats_on = true;
                    stats_start = now;
                }
                if (counted) ++rs.wifi_arrivals;
                if (x + y < d) {
                    y += 1;
                    push(now + sample(wifi_serv, rng), Ev::kWifiDeparture);
                } else if (x == d) {
                    ++rs.wifi_total_drops;
                    if (counted) ++rs.wifi_drops;
                } else {
                    // Channel held by Wi-Fi itself: outside the counted
                    // blocking set, recorded separately.
                    ++rs.wifi_total_ignored;
                    if (counted) ++rs.wifi_ignored;
                }
                if (arrivals_total >= config.sessions) {
                    done = true;
                    break;
                }
                push(now + sample(wifi_inter, rng), Ev::kWifiArrival);
                sync_fast_start();
                break;
            }
            case Ev::kLaaDeparture: {
                ++rs.laa_total_served;
                if (w == kOn && z > 0 && x + y == d) {
                    z -= 1; // queued packet takes over the freed server
                    start_laa_service();
                } else {
                    x -= 1;
                }
                sync_fast_start();
                break;
            }
            case Ev::kWifiDeparture: {
                ++rs.wifi_total_served;
                if (w == kOn && z > 0 && x + y == d) {
                    y -= 1;
                    x += 1;
                    z -= 1;
                    start_laa_service();
                    if (stats_on) ++rs.wifi_handovers;
                } else {
                    y -= 1;
                }
                sync_fast_start();
                break;
            }
            case Ev::kPhase: {
                // A single phase timer is outstanding; when no gate applies at
                // expiry the phase is re-armed in place (exact for exponential
                // durations, the defined behavior otherwise).
                if (w == kOff) {
                    if (activation({w, x, y, z}, p, gates)) {
                        w = kSensing;
                        push(now + sample(sense_dur, rng), Ev::kPhase);
                    } else {
                        push(now + sample(off_dur, rng), Ev::kPhase);
                    }
                } else if (w == kSensing) {
                    const bool act = activation({w, x, y, z}, p, gates);
                    const bool wifi_busy = x == 0 && y >= 1;
                    if (x == 0 && y == 0 && act) {
                        w = kOn;
                        push(now + sample(on_dur, rng), Ev::kPhase);
                    } else if (wifi_busy || !act) {
                        w = kOff;
                        push(now + sample(off_dur, rng), Ev::kPhase);
                    } else {
                        push(now + sample(sense_dur, rng), Ev::kPhase);
                    }
                } else {
                    w = kSensing;
                    push(now + sample(sense_dur, rng), Ev::kPhase);
                }
                sync_fast_start();
                break;
            }
            case Ev::kFastStart: {
                if (ev.gen != fs_gen) break; // invalidated
                fs_pending = false;
                if (fs_gate()) {
                    x += 1;
                    z -= 1;
                    start_laa_service();
                }
                sync_fast_start();
                break;
            }
        }
    }

    rs.laa_in_system_end = static_cast<uint64_t>(x + z);
    rs.wifi_in_system_end = static_cast<uint64_t>(y);
    rs.p_drop_laa = rs.laa_arrivals > 0
                        ? static_cast<double>(rs.laa_drops) / static_cast<double>(rs.laa_arrivals)
                        : 0.0;
    rs.p_drop_wifi =
        rs.wifi_arrivals > 0
            ? static_cast<double>(rs.wifi_drops) / static_cast<double>(rs.wifi_arrivals)
            : 0.0;
    const double window = now - stats_start;
    if (stats_on && window > 0.0) {
        for (int i = 0; i < 3; ++i) rs.time_in_phase[i] = phase_acc[i] / window;
        for (size_t i = 0; i < state_acc.size(); ++i) rs.time_in_state[i] = state_acc[i] / window;
    }
    return rs;
}

AggregateStats run_simulation(const SimConfig& config) {
    config.validate();
    const uint32_t n = config.replications;
    std::vector<double> drop_laa(n), drop_wifi(n);
    AggregateStats agg;
    double phase_sum[3] = {0.0, 0.0, 0.0};
    for (uint32_t r = 0; r < n; ++r) {
        RepStats rs = run_replication(config, r);
        drop_laa[r] = rs.p_drop_laa;
        drop_wifi[r] = rs.p_drop_wifi;
        agg.laa_arrivals += rs.laa_arrivals;
        agg.laa_drops += rs.laa_drops;
        agg.laa_ignored += rs.laa_ignored;
        agg.wifi_arrivals += rs.wifi_arrivals;
        agg.wifi_drops += rs.wifi_drops;
        agg.wifi_ignored += rs.wifi_ignored;
        agg.wifi_handovers += rs.wifi_handovers;
        for (int i = 0; i < 3; ++i) phase_sum[i] += rs.time_in_phase[i];
        agg.laa_no_arrivals = rs.laa_no_arrivals;
        agg.wifi_no_arrivals = rs.wifi_no_arrivals;
    }
    auto mean_of = [&](const std::vector<double>& v) {
        double s = 0.0;
        for (double e : v) s += e;
        return s / static_cast<double>(v.size());
    };
    auto halfwidth = [&](const std::vector<double>& v, double mean) {
        if (v.size() < 2) return 0.0;
        double ss = 0.0;
        for (double e : v) ss += (e - mean) * (e - mean);
        const double sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
        return student_t_975(static_cast<uint32_t>(v.size() - 1)) * sd /
               std::sqrt(static_cast<double>(v.size()));
    };
    agg.p_drop_laa = mean_of(drop_laa);
    agg.p_drop_wifi = mean_of(drop_wifi);
    agg.ci_halfwidth_laa = halfwidth(drop_laa, agg.p_drop_laa);
    agg.ci_halfwidth_wifi = halfwidth(drop_wifi, agg.p_drop_wifi);
    for (int i = 0; i < 3; ++i) agg.time_in_phase[i] = phase_sum[i] / static_cast<double>(n);
    return agg;
}

} // namespace laacoex
