#include "solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace laacoex {

namespace {

// Loss set of the arrival gates: an LAA arrival is dropped when it can
// neither start service (transmit phase, free server, empty queue) nor join
// the buffer. With a buffer this reduces to "buffer full"; without one, to
// "no free server or not transmitting".
bool laa_arrival_lost(const State& s, const Params& p) {
    const int q_eff = p.effective_queue();
    if (q_eff > 0) return s.z == q_eff;
    return s.x + s.y == p.servers || s.w != kOn;
}

void fill_blocking(Solution& sol, const RateMatrix& m, const Params& p) {
    sol.p_block_laa = sol.p_block_laa_held = sol.p_block_wifi = 0.0;
    for (size_t i = 0; i < m.states.size(); ++i) {
        const State& s = m.states[i];
        const double v = sol.pi[i];
        if (laa_arrival_lost(s, p)) {
            sol.p_block_laa += v;
            if (s.x == p.servers) sol.p_block_laa_held += v;
        }
        if (s.x == p.servers) sol.p_block_wifi += v;
    }
}

// Clamp LU noise and renormalize; genuinely negative mass is a solver bug.
void clean_distribution(std::vector<double>& pi) {
    double total = 0.0;
    for (double& v : pi) {
        if (v < 0.0) {
            if (v < -1e-9) throw ConvergenceError("stationary solve produced negative mass");
            v = 0.0;
        }
        total += v;
    }
    if (!(total > 0.0)) throw ConvergenceError("stationary solve produced zero mass");
    for (double& v : pi) v /= total;
}

Solution finish(std::vector<double> pi, const RateMatrix& m, const Params& p,
                uint64_t iterations) {
    Solution sol;
    sol.pi = std::move(pi);
    sol.iterations = iterations;
    sol.residual = balance_residual(m, sol.pi);
    fill_blocking(sol, m, p);
    return sol;
}

} // namespace

Structure require_solvable(const RateMatrix& matrix, int initial_state) {
    Structure s = analyze_structure(matrix, initial_state);
    if (s.closed_classes.size() != 1) {
        std::ostringstream msg;
        msg << "generator has " << s.closed_classes.size()
            << " closed communicating classes (sizes:";
        for (const auto& cls : s.closed_classes) msg << " " << cls.size();
        msg << "); a unique stationary distribution needs exactly 1";
        throw StructuralError(msg.str());
    }
    if (!s.reachable_strongly_connected) {
        std::ostringstream msg;
        msg << "chain is reducible from the initial state: " << s.num_reachable
            << " reachable states span multiple communicating classes";
        throw StructuralError(msg.str());
    }
    return s;
}

double balance_residual(const RateMatrix& matrix, const std::vector<double>& pi) {
    std::vector<double> net(matrix.states.size(), 0.0);
    for (size_t i = 0; i < matrix.states.size(); ++i) net[i] = -pi[i] * matrix.exit_rates[i];
    for (const auto& e : matrix.entries) net[e.to] += pi[e.from] * e.rate;
    double worst = 0.0;
    for (double v : net) worst = std::max(worst, std::fabs(v));
    return worst;
}

Solution solve_direct(const RateMatrix& matrix, const Params& params) {
    const Structure structure = require_solvable(matrix);
    const auto& cls = structure.closed_classes[0];
    const size_t n = matrix.states.size();
    const size_t k = cls.size();
    std::vector<double> pi(n, 0.0);

    if (k == 1) {
        pi[cls[0]] = 1.0;
        return finish(std::move(pi), matrix, params, 0);
    }

    std::vector<int> local(n, -1);
    for (size_t i = 0; i < k; ++i) local[cls[i]] = static_cast<int>(i);

    // Row r: balance of state cls[r]; the last row enforces normalization.
    std::vector<double> a(k * k, 0.0);
    std::vector<double> b(k, 0.0);
    for (const auto& e : matrix.entries) {
        if (e.from == e.to) continue;
        const int lf = local[e.from];
        const int lt = local[e.to];
        if (lf >= 0 && lt >= 0) a[static_cast<size_t>(lt) * k + lf] += e.rate;
    }
    for (size_t r = 0; r < k; ++r) a[r * k + r] -= matrix.exit_rates[cls[r]];
    for (size_t c = 0; c < k; ++c) a[(k - 1) * k + c] = 1.0;
    b[k - 1] = 1.0;

    // In-place Gaussian elimination with partial pivoting.
    std::vector<size_t> row(k);
    for (size_t i = 0; i < k; ++i) row[i] = i;
    for (size_t col = 0; col < k; ++col) {
        size_t pivot = col;
        double best = std::fabs(a[row[col] * k + col]);
        for (size_t r = col + 1; r < k; ++r) {
            const double cand = std::fabs(a[row[r] * k + col]);
            if (cand > best) {
                best = cand;
                pivot = r;
            }
        }
        if (best == 0.0) throw ConvergenceError("balance system is singular");
        std::swap(row[col], row[pivot]);
        const double diag = a[row[col] * k + col];
        for (size_t r = col + 1; r < k; ++r) {
            const double factor = a[row[r] * k + col] / diag;
            if (factor == 0.0) continue;
            a[row[r] * k + col] = 0.0;
            for (size_t c = col + 1; c < k; ++c) a[row[r] * k + c] -= factor * a[row[col] * k + c];
            b[row[r]] -= factor * b[row[col]];
        }
    }
    std::vector<double> x(k, 0.0);
    for (size_t ri = k; ri-- > 0;) {
        double acc = b[row[ri]];
        for (size_t c = ri + 1; c < k; ++c) acc -= a[row[ri] * k + c] * x[c];
        x[ri] = acc / a[row[ri] * k + ri];
    }

    for (size_t i = 0; i < k; ++i) pi[cls[i]] = x[i];
    clean_distribution(pi);
    return finish(std::move(pi), matrix, params, 0);
}

Solution solve_iterative(const RateMatrix& matrix, const Params& params,
                         const SolveOptions& options) {
    const Structure structure = require_solvable(matrix);
    const size_t n = matrix.states.size();
    if (n == 1) return finish({1.0}, matrix, params, 0);

    struct In {
        int from;
        double rate;
    };
    std::vector<std::vector<In>> incoming(n);
    for (const auto& e : matrix.entries)
        if (e.from != e.to && e.rate > 0.0) incoming[e.to].push_back({e.from, e.rate});

    // Transient states are exactly 0, so only the closed class is swept; that
    // keeps every iterate positive and the relative-change stop meaningful.
    const auto& cls = structure.closed_classes[0];
    std::vector<double> pi(n, 0.0);
    for (int i : cls) pi[i] = 1.0 / static_cast<double>(cls.size());

    std::vector<double> prev(n);
    uint64_t sweep = 0;
    for (; sweep < options.max_iterations; ++sweep) {
        prev = pi;
        for (int i : cls) {
            if (matrix.exit_rates[i] <= 0.0) continue;
            double inflow = 0.0;
            for (const auto& in : incoming[i]) inflow += pi[in.from] * in.rate;
            pi[i] = inflow / matrix.exit_rates[i];
        }
        double total = 0.0;
        for (int i : cls) total += pi[i];
        if (!(total > 0.0)) throw ConvergenceError("iterative solve lost all mass");
        for (int i : cls) pi[i] /= total;

        double delta = 0.0;
        for (int i : cls)
            delta = std::max(delta, std::fabs(pi[i] - prev[i]) / std::max(pi[i], 1e-300));
        if (delta < options.tolerance) {
            ++sweep;
            break;
        }
    }
    if (sweep >= options.max_iterations) {
        std::ostringstream msg;
        msg << "iterative solver did not reach tolerance " << options.tolerance << " within "
            << options.max_iterations << " sweeps";
        throw ConvergenceError(msg.str());
    }
    clean_distribution(pi);
    return finish(std::move(pi), matrix, params, sweep);
}

} // namespace laacoex
