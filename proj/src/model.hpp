// Internal C++ core: state space, transition gates, generator matrix.
#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace laacoex {

// Cell phase: Off (idle), Sensing (channel check), On (allowed to transmit).
enum Phase : int { kOff = 0, kSensing = 1, kOn = 2 };

// (w,x,y,z): phase, LAA packets in service, Wi-Fi packets in service,
// LAA packets queued. Invariants: x+y <= servers, z <= effective queue.
struct State {
    int w = 0;
    int x = 0;
    int y = 0;
    int z = 0;
    auto operator<=>(const State&) const = default;
};

enum class ThresholdMode { kNonStrict = 0, kStrict = 1 };

struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct StructuralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Params {
    double lambda_laa = 25.0;
    double lambda_wifi = 5.0;
    double mu_laa = 25.0;
    double mu_wifi = 40.0;
    double mu_sense = 1.0;
    double mu_on = 0.1;
    double mu_off = 0.1;
    double fast_start_multiplier = 10.0;
    int servers = 1;
    int queue_capacity = 2;
    int queue_threshold = 2;
    bool lbt = true;
    bool buffering = true;
    ThresholdMode threshold_mode = ThresholdMode::kNonStrict;

    int effective_queue() const { return buffering ? queue_capacity : 0; }
    double fast_start_rate() const { return fast_start_multiplier * mu_on; }
    void validate() const; // throws ValidationError
};

// Candidate readings of the sleep/wake gates. The shipped semantics come from
// Params::threshold_mode; the other knobs exist for the interpretation scan.
struct GateVariant {
    bool strict_activation = false;   // wake needs z >  threshold (else >=)
    bool printed_deactivation = false; // sleep when z < threshold instead of
                                       // "wake condition no longer holds"
    bool wifi_release = true;          // sensing aborts to Off when Wi-Fi
                                       // alone occupies the channel
};

GateVariant gate_variant(const Params& params);

enum class Kind {
    kLaaArrivalServe,     // arrival takes a free server (transmit phase, empty queue)
    kLaaComplete,         // service ends, server freed
    kLaaCompleteDequeue,  // service ends, queued packet takes the server
    kWifiArrivalServe,    // Wi-Fi arrival takes a free server
    kWifiComplete,        // Wi-Fi service ends, server freed
    kWifiCompleteHandover,// Wi-Fi service ends, queued LAA packet takes over
    kLaaArrivalQueue,     // arrival buffered
    kFastStart,           // queued packet grabs an idle server mid-phase
    kSenseToOn,
    kOffToSense,
    kSenseToOff,
    kOnToSense,
};
const char* kind_name(Kind kind);

struct Transition {
    Kind kind;
    State to;
    double rate;
};

// Lexicographic in (w,x,y,z); phase fixed to On when lbt is disabled.
std::vector<State> enumerate_states(const Params& params);

int free_servers(const State& s, const Params& params);
int free_queue_slots(const State& s, const Params& params);

// Wake condition on the queue length; always true with buffering disabled.
bool activation(const State& s, const Params& params, const GateVariant& v);

std::vector<Transition> packet_transitions(const State& s, const Params& params);
std::vector<Transition> phase_transitions(const State& s, const Params& params,
                                          const GateVariant& v);
std::vector<Transition> phase_transitions(const State& s, const Params& params);
std::vector<Transition> transitions(const State& s, const Params& params);

struct RateMatrix {
    struct Entry {
        int from;
        int to;
        double rate;
    };
    std::vector<State> states;
    std::map<State, int> index;
    std::vector<Entry> entries;     // merged off-diagonal rates, sorted (from,to)
    std::vector<double> exit_rates; // row sums
};

RateMatrix build_rate_matrix(const Params& params);
RateMatrix build_rate_matrix(const Params& params, const GateVariant& v);

struct Structure {
    std::vector<int> scc_id;                    // per state
    std::vector<std::vector<int>> closed_classes; // SCCs with no outgoing edge
    std::vector<char> reachable;                // from the initial (empty) state
    size_t num_reachable = 0;
    bool reachable_strongly_connected = false;
    size_t num_recurrent = 0;
    size_t num_transient = 0;
};

// initial_state: index the chain starts from (the empty state is always
// index 0 for matrices built from Params).
Structure analyze_structure(const RateMatrix& matrix, int initial_state = 0);

} // namespace laacoex
