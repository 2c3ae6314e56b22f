#include "model.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

namespace laacoex {

namespace {

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }
bool finite_pos(double v) { return std::isfinite(v) && v > 0.0; }

} // namespace

void Params::validate() const {
    if (!finite_nonneg(lambda_laa)) throw ValidationError("lambda_laa must be finite and >= 0");
    if (!finite_nonneg(lambda_wifi)) throw ValidationError("lambda_wifi must be finite and >= 0");
    if (!finite_pos(mu_laa)) throw ValidationError("mu_laa must be finite and > 0");
    if (!finite_pos(mu_wifi)) throw ValidationError("mu_wifi must be finite and > 0");
    if (!finite_pos(mu_sense)) throw ValidationError("mu_sense must be finite and > 0");
    if (!finite_pos(mu_on)) throw ValidationError("mu_on must be finite and > 0");
    if (!finite_pos(mu_off)) throw ValidationError("mu_off must be finite and > 0");
    if (!finite_pos(fast_start_multiplier))
        throw ValidationError("fast_start_multiplier must be finite and > 0");
    if (servers < 1) throw ValidationError("servers must be >= 1");
    if (queue_capacity < 0) throw ValidationError("queue_capacity must be >= 0");
    if (queue_threshold < 0 || queue_threshold > queue_capacity)
        throw ValidationError("queue_threshold must lie in [0, queue_capacity]");
    if (threshold_mode != ThresholdMode::kNonStrict && threshold_mode != ThresholdMode::kStrict)
        throw ValidationError("threshold_mode must be non_strict or strict");
}

GateVariant gate_variant(const Params& params) {
    GateVariant v;
    v.strict_activation = params.threshold_mode == ThresholdMode::kStrict;
    return v;
}

const char* kind_name(Kind kind) {
    switch (kind) {
        case Kind::kLaaArrivalServe: return "laa_arrival_serve";
        case Kind::kLaaComplete: return "laa_complete";
        case Kind::kLaaCompleteDequeue: return "laa_complete_dequeue";
        case Kind::kWifiArrivalServe: return "wifi_arrival_serve";
        case Kind::kWifiComplete: return "wifi_complete";
        case Kind::kWifiCompleteHandover: return "wifi_complete_handover";
        case Kind::kLaaArrivalQueue: return "laa_arrival_queue";
        case Kind::kFastStart: return "fast_start";
        case Kind::kSenseToOn: return "sense_to_on";
        case Kind::kOffToSense: return "off_to_sense";
        case Kind::kSenseToOff: return "sense_to_off";
        case Kind::kOnToSense: return "on_to_sense";
    }
    return "unknown";
}

std::vector<State> enumerate_states(const Params& params) {
    std::vector<State> states;
    const int q_eff = params.effective_queue();
    const int w_lo = params.lbt ? kOff : kOn;
    for (int w = w_lo; w <= kOn; ++w)
        for (int x = 0; x <= params.servers; ++x)
            for (int y = 0; x + y <= params.servers; ++y)
                for (int z = 0; z <= q_eff; ++z)
                    states.push_back({w, x, y, z});
    return states;
}

int free_servers(const State& s, const Params& params) {
    return params.servers - s.x - s.y;
}

int free_queue_slots(const State& s, const Params& params) {
    return params.effective_queue() - s.z;
}

bool activation(const State& s, const Params& params, const GateVariant& v) {
    if (!params.buffering) return true; // nothing to wait for without a buffer
    return v.strict_activation ? s.z > params.queue_threshold
                               : s.z >= params.queue_threshold;
}

std::vector<Transition> packet_transitions(const State& s, const Params& params) {
    std::vector<Transition> out;
    const int d = params.servers;
    const int q_eff = params.effective_queue();
    const bool on = s.w == kOn;
    // A completion hands its server straight to a queued packet only while the
    // cell transmits with every server busy.
    const bool handover = on && s.z > 0 && s.x + s.y == d;
    auto add = [&](Kind kind, State to, double rate) {
        if (rate > 0.0) out.push_back({kind, to, rate});
    };

    if (on && s.x + s.y < d && s.z == 0)
        add(Kind::kLaaArrivalServe, {s.w, s.x + 1, s.y, s.z}, params.lambda_laa);
    if (s.x > 0 && !handover)
        add(Kind::kLaaComplete, {s.w, s.x - 1, s.y, s.z}, s.x * params.mu_laa);
    if (s.x > 0 && handover)
        add(Kind::kLaaCompleteDequeue, {s.w, s.x, s.y, s.z - 1}, s.x * params.mu_laa);
    if (s.x + s.y < d)
        add(Kind::kWifiArrivalServe, {s.w, s.x, s.y + 1, s.z}, params.lambda_wifi);
    if (s.y > 0 && !handover)
        add(Kind::kWifiComplete, {s.w, s.x, s.y - 1, s.z}, s.y * params.mu_wifi);
    if (s.y > 0 && handover)
        add(Kind::kWifiCompleteHandover, {s.w, s.x + 1, s.y - 1, s.z - 1},
            s.y * params.mu_wifi);
    if (s.z < q_eff && (s.x + s.y == d || !on))
        add(Kind::kLaaArrivalQueue, {s.w, s.x, s.y, s.z + 1}, params.lambda_laa);
    if (params.lbt && on && s.y == 0 && s.z > 0 && s.x < d)
        add(Kind::kFastStart, {s.w, s.x + 1, s.y, s.z - 1}, params.fast_start_rate());
    return out;
}

std::vector<Transition> phase_transitions(const State& s, const Params& params,
                                          const GateVariant& v) {
    std::vector<Transition> out;
    if (!params.lbt) return out;
    auto add = [&](Kind kind, State to, double rate) {
        if (rate > 0.0) out.push_back({kind, to, rate});
    };
    const bool act = activation(s, params, v);
    // Sensing aborts when the wake condition fails, or (optionally) when
    // Wi-Fi alone holds the channel. The two sensing outcomes are mutually
    // exclusive in every variant.
    const bool deact =
        v.printed_deactivation ? (params.buffering && s.z < params.queue_threshold)
                               : !act;
    const bool wifi_busy = v.wifi_release && s.x == 0 && s.y >= 1;

    if (s.w == kSensing && s.x == 0 && s.y == 0 && act)
        add(Kind::kSenseToOn, {kOn, s.x, s.y, s.z}, params.mu_sense);
    if (s.w == kSensing && (wifi_busy || deact))
        add(Kind::kSenseToOff, {kOff, s.x, s.y, s.z}, params.mu_sense);
    if (s.w == kOff && act)
        add(Kind::kOffToSense, {kSensing, s.x, s.y, s.z}, params.mu_off);
    if (s.w == kOn)
        add(Kind::kOnToSense, {kSensing, s.x, s.y, s.z}, params.mu_on);
    return out;
}

std::vector<Transition> phase_transitions(const State& s, const Params& params) {
    return phase_transitions(s, params, gate_variant(params));
}

std::vector<Transition> transitions(const State& s, const Params& params) {
    auto out = packet_transitions(s, params);
    auto phase = phase_transitions(s, params);
    out.insert(out.end(), phase.begin(), phase.end());
    return out;
}

RateMatrix build_rate_matrix(const Params& params, const GateVariant& v) {
    params.validate();
    RateMatrix m;
    m.states = enumerate_states(params);
    for (size_t i = 0; i < m.states.size(); ++i)
        m.index.emplace(m.states[i], static_cast<int>(i));

    std::map<std::pair<int, int>, double> merged;
    for (size_t i = 0; i < m.states.size(); ++i) {
        auto packet = packet_transitions(m.states[i], params);
        auto phase = phase_transitions(m.states[i], params, v);
        packet.insert(packet.end(), phase.begin(), phase.end());
        for (const auto& t : packet) {
            auto it = m.index.find(t.to);
            if (it == m.index.end()) {
                std::ostringstream msg;
                msg << "transition " << kind_name(t.kind) << " leaves the state space from ("
                    << m.states[i].w << "," << m.states[i].x << "," << m.states[i].y << ","
                    << m.states[i].z << ")";
                throw StructuralError(msg.str());
            }
            merged[{static_cast<int>(i), it->second}] += t.rate;
        }
    }

    m.exit_rates.assign(m.states.size(), 0.0);
    m.entries.reserve(merged.size());
    for (const auto& [key, rate] : merged) {
        m.entries.push_back({key.first, key.second, rate});
        m.exit_rates[key.first] += rate;
    }
    return m;
}

RateMatrix build_rate_matrix(const Params& params) {
    return build_rate_matrix(params, gate_variant(params));
}

namespace {

std::vector<std::vector<int>> adjacency(const RateMatrix& m) {
    std::vector<std::vector<int>> adj(m.states.size());
    for (const auto& e : m.entries)
        if (e.rate > 0.0 && e.from != e.to) adj[e.from].push_back(e.to);
    return adj;
}

// Iterative Tarjan; assigns scc ids in reverse topological order.
std::vector<int> strongly_connected_components(const std::vector<std::vector<int>>& adj,
                                               int& num_sccs) {
    const int n = static_cast<int>(adj.size());
    std::vector<int> id(n, -1), low(n, 0), order(n, -1);
    std::vector<char> on_stack(n, 0);
    std::vector<int> stack;
    int next_order = 0;
    num_sccs = 0;

    struct Frame {
        int v;
        size_t child;
    };
    for (int root = 0; root < n; ++root) {
        if (order[root] != -1) continue;
        std::vector<Frame> frames{{root, 0}};
        order[root] = low[root] = next_order++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.child < adj[f.v].size()) {
                int u = adj[f.v][f.child++];
                if (order[u] == -1) {
                    order[u] = low[u] = next_order++;
                    stack.push_back(u);
                    on_stack[u] = 1;
                    frames.push_back({u, 0});
                } else if (on_stack[u]) {
                    low[f.v] = std::min(low[f.v], order[u]);
                }
            } else {
                if (low[f.v] == order[f.v]) {
                    while (true) {
                        int u = stack.back();
                        stack.pop_back();
                        on_stack[u] = 0;
                        id[u] = num_sccs;
                        if (u == f.v) break;
                    }
                    ++num_sccs;
                }
                int v = f.v;
                frames.pop_back();
                if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
            }
        }
    }
    return id;
}

} // namespace

Structure analyze_structure(const RateMatrix& matrix, int initial_state) {
    const int n = static_cast<int>(matrix.states.size());
    Structure s;
    if (n == 0) return s;
    auto adj = adjacency(matrix);

    int num_sccs = 0;
    s.scc_id = strongly_connected_components(adj, num_sccs);

    std::vector<char> has_exit(num_sccs, 0);
    for (const auto& e : matrix.entries)
        if (e.rate > 0.0 && s.scc_id[e.from] != s.scc_id[e.to]) has_exit[s.scc_id[e.from]] = 1;

    std::vector<std::vector<int>> members(num_sccs);
    for (int v = 0; v < n; ++v) members[s.scc_id[v]].push_back(v);
    for (int c = 0; c < num_sccs; ++c)
        if (!has_exit[c]) s.closed_classes.push_back(members[c]);

    for (const auto& cls : s.closed_classes) s.num_recurrent += cls.size();
    s.num_transient = static_cast<size_t>(n) - s.num_recurrent;

    s.reachable.assign(n, 0);
    std::deque<int> queue{initial_state};
    s.reachable[initial_state] = 1;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        ++s.num_reachable;
        for (int u : adj[v])
            if (!s.reachable[u]) {
                s.reachable[u] = 1;
                queue.push_back(u);
            }
    }
    // The reachable set is closed under transitions, so it is strongly
    // connected exactly when all its members share one component.
    s.reachable_strongly_connected = true;
    for (int v = 0; v < n; ++v)
        if (s.reachable[v] && s.scc_id[v] != s.scc_id[initial_state])
            s.reachable_strongly_connected = false;
    return s;
}

} // namespace laacoex
