// Acceptance suite: one binary, one pass/fail line per criterion.
// Usage: acceptance <1..8|all> [cli_path]
#include "experiments.hpp"
#include "sim.hpp"
#include "solver.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <sys/wait.h>
#include <fstream>
#include <random>
#include <string>
#include <vector>

using namespace laacoex;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

// Runs a shell command, captures the chosen stream, returns the exit code.
int run_command(const std::string& cmd, std::string& output) {
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return -1;
    output.clear();
    std::array<char, 4096> buf;
    size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) output.append(buf.data(), n);
    return WEXITSTATUS(pclose(pipe));
}

// Criterion 1 — always-on reference table, direct solver, 1e-3 absolute.
Outcome criterion1(const std::string&) {
    const double tol = 1e-3;
    const auto t0 = std::chrono::steady_clock::now();
    const auto& ref = reference_table(2);
    // The reference tabulates the loss share where LAA also holds every
    // server, so the held variant is the like-for-like comparison.
    int miss_laa = 0, miss_wifi = 0;
    double worst_laa = 0.0, worst_wifi = 0.0, worst_full = 0.0;
    for (const auto& r : ref) {
        const Params p = table_params(2, r.lambda_laa);
        const auto sol = solve_direct(build_rate_matrix(p), p);
        const double err_laa = std::abs(sol.p_block_laa_held - r.p_block_laa);
        const double err_wifi = std::abs(sol.p_block_wifi - r.p_block_wifi);
        worst_laa = std::max(worst_laa, err_laa);
        worst_full = std::max(worst_full, std::abs(sol.p_block_laa - r.p_block_laa));
        worst_wifi = std::max(worst_wifi, err_wifi);
        if (err_laa > tol) ++miss_laa;
        if (err_wifi > tol) ++miss_wifi;
    }
    const double elapsed = seconds_since(t0);
    const bool pass = miss_laa == 0 && miss_wifi == 0 && elapsed < 1.0;
    return {pass, fmt("p_block_laa (held) max abs err %.3g (%d/5 over %g), p_block_wifi max abs "
                      "err %.3g (%d/5 over %g); full-sum p_block_laa differs by up to %.3g; %.3fs",
                      worst_laa, miss_laa, tol, worst_wifi, miss_wifi, tol, worst_full, elapsed)};
}

// Criterion 2 — listen-before-talk reference table within 2% relative, with
// the gate-interpretation report as the sanctioned fallback path.
Outcome criterion2(const std::string& cli) {
    const double tol = 0.02;
    const auto t0 = std::chrono::steady_clock::now();
    const auto& ref = reference_table(1);
    double worst = 0.0;
    for (const auto& r : ref) {
        const Params p = table_params(1, r.lambda_laa);
        const auto sol = solve_direct(build_rate_matrix(p), p);
        worst = std::max(worst, std::abs(sol.p_block_laa - r.p_block_laa) / r.p_block_laa);
        worst = std::max(worst, std::abs(sol.p_block_wifi - r.p_block_wifi) / r.p_block_wifi);
    }
    const double elapsed = seconds_since(t0);
    if (elapsed >= 1.0) return {false, fmt("analytic pass took %.3fs (limit 1s)", elapsed)};
    if (worst <= tol)
        return {true, fmt("max rel err %.3g within %g; %.3fs", worst, tol, elapsed)};

    // Fallback: the scan must rank a structurally valid closest reading and
    // the validate command must print it.
    size_t best = 0;
    const auto scan = interpretation_scan(best);
    if (scan.empty() || !scan[best].structurally_valid)
        return {false, fmt("%.3g over %g and no valid interpretation found", worst, tol)};
    if (cli.empty())
        return {false, fmt("%.3g over %g and no CLI path given to verify the report", worst, tol)};
    std::string err_text;
    const int rc = run_command(
        cli + " validate --table 1 --sessions 2000 --replications 2 2>&1 1>/dev/null", err_text);
    const bool reported = rc == 0 &&
                          err_text.find("interpretation scan") != std::string::npos &&
                          err_text.find(scan[best].name) != std::string::npos;
    if (!reported)
        return {false, fmt("%.3g over %g and validate did not emit the interpretation report",
                           worst, tol)};
    return {true, fmt("max rel err %.3g misses %g; fallback holds: closest reading '%s' "
                      "(max rel err %.3g) reported by validate; %.3fs",
                      worst, tol, scan[best].name.c_str(), scan[best].max_rel_err, elapsed)};
}

// Criterion 3 — randomized cross-solver oracle, L-inf 1e-8, under 30 s.
Outcome criterion3(const std::string&) {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20240817);
    std::uniform_real_distribution<double> log_rate(std::log(0.01), std::log(100.0));
    auto draw_rate = [&] { return std::exp(log_rate(rng)); };
    const int draws = 120;
    double worst_pi = 0.0, worst_block = 0.0;
    int done = 0;
    for (int i = 0; i < draws; ++i) {
        Params p;
        p.lambda_laa = draw_rate();
        p.lambda_wifi = draw_rate();
        p.mu_laa = draw_rate();
        p.mu_wifi = draw_rate();
        p.mu_sense = draw_rate();
        p.mu_on = draw_rate();
        p.mu_off = draw_rate();
        p.lbt = (rng() & 1) != 0;
        p.buffering = (rng() & 1) != 0;
        p.queue_capacity = static_cast<int>(rng() % 11);     // 0..10
        p.queue_threshold = static_cast<int>(rng() % (p.queue_capacity + 1));
        const auto m = build_rate_matrix(p);
        const auto direct = solve_direct(m, p);
        const auto iter = solve_iterative(m, p);
        for (size_t s = 0; s < direct.pi.size(); ++s)
            worst_pi = std::max(worst_pi, std::abs(direct.pi[s] - iter.pi[s]));
        worst_block = std::max({worst_block, std::abs(direct.p_block_laa - iter.p_block_laa),
                                std::abs(direct.p_block_laa_held - iter.p_block_laa_held),
                                std::abs(direct.p_block_wifi - iter.p_block_wifi)});
        ++done;
    }
    const double elapsed = seconds_since(t0);
    const bool pass = done >= 100 && worst_pi <= 1e-8 && worst_block <= 1e-8 && elapsed < 30.0;
    return {pass, fmt("%d draws, worst L-inf(pi) %.3g, worst blocking diff %.3g, %.3fs",
                      done, worst_pi, worst_block, elapsed)};
}

// Criteria 4/5 — simulation against the analytic solution at the reference
// points with one million sessions.
Outcome sim_vs_analytic(int table, double rel_tol, double time_limit) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto rows = run_comparison(table, 1000000, 10, 1);
    double worst = 0.0;
    for (const auto& r : rows) {
        worst = std::max(worst, std::abs(r.analytic_p_block_laa - r.sim_p_drop_laa) /
                                    r.analytic_p_block_laa);
        worst = std::max(worst, std::abs(r.analytic_p_block_wifi - r.sim_p_drop_wifi) /
                                    r.analytic_p_block_wifi);
    }
    const double elapsed = seconds_since(t0);
    const bool pass = worst <= rel_tol && elapsed < time_limit;
    return {pass, fmt("worst rel err %.3g (tolerance %g) over %zu points, %.1fs (limit %gs)",
                      worst, rel_tol, rows.size(), elapsed, time_limit)};
}

Outcome criterion4(const std::string&) { return sim_vs_analytic(2, 0.015, 120.0); }
Outcome criterion5(const std::string&) { return sim_vs_analytic(1, 0.10, 120.0); }

// Criterion 6 — structural invariant sweep plus reducibility detection.
Outcome criterion6(const std::string&) {
    int checked = 0;
    auto check_config = [&](const Params& p, bool solve, std::string& fail) {
        const auto m = build_rate_matrix(p);
        ++checked;
        for (size_t i = 0; i < m.states.size(); ++i) {
            const State& s = m.states[i];
            if (s.x + s.y > p.servers) {
                fail = fmt("state with x+y>D in config lambda=%g", p.lambda_laa);
                return;
            }
        }
        std::vector<double> sums(m.states.size(), 0.0);
        for (const auto& e : m.entries) sums[e.from] += e.rate;
        for (size_t i = 0; i < m.states.size(); ++i)
            if (std::abs(sums[i] - m.exit_rates[i]) > 1e-12) {
                fail = "generator row sum beyond 1e-12";
                return;
            }
        if (!solve) return;
        const auto sol = solve_direct(m, p);
        double total = 0.0;
        for (double v : sol.pi) {
            if (v < 0.0) {
                fail = "negative stationary probability";
                return;
            }
            total += v;
        }
        if (std::abs(total - 1.0) > 1e-12) fail = "stationary mass differs from 1 beyond 1e-12";
    };

    std::string fail;
    for (int table : {1, 2})
        for (const auto& r : reference_table(table)) {
            check_config(table_params(table, r.lambda_laa), true, fail);
            if (!fail.empty()) return {false, fail};
        }
    for (const bool lbt : {true, false})
        for (const bool buffering : {true, false})
            for (const int q : {2, 5, 10}) {
                check_config(sweep_params(lbt, buffering, q), true, fail);
                if (!fail.empty()) return {false, fail};
            }
    Params wide; // multi-server enumeration is structural only
    wide.servers = 2;
    check_config(wide, false, fail);
    if (!fail.empty()) return {false, fail};

    // Reducibility: strict threshold at capacity must be reported, not solved.
    Params strict;
    strict.threshold_mode = ThresholdMode::kStrict;
    const auto m = build_rate_matrix(strict);
    const auto st = analyze_structure(m);
    if (st.reachable_strongly_connected)
        return {false, "strict threshold at capacity was not flagged reducible"};
    bool threw = false;
    std::string message;
    try {
        solve_direct(m, strict);
    } catch (const StructuralError& e) {
        threw = true;
        message = e.what();
    }
    if (!threw || message.find("reducible") == std::string::npos)
        return {false, "reducible chain was solved silently"};
    return {true, fmt("%d configs: row sums <= 1e-12, pi >= 0, sum(pi) = 1 +- 1e-12, x+y <= D; "
                      "strict threshold at capacity reported reducible",
                      checked)};
}

// Criterion 7 — capacity-sweep ordinal relations between the four variants.
Outcome criterion7(const std::string&) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto both = queue_sweep(true, true, 2, 10);
    const auto lbt_only = queue_sweep(true, false, 2, 10);
    const auto buf_only = queue_sweep(false, true, 2, 10);
    const auto baseline = queue_sweep(false, false, 2, 10);

    int a_viol = 0, b_viol = 0, c_viol = 0, d_viol = 0;
    double prev_both = 2.0, prev_buf = 2.0;
    for (size_t i = 0; i < both.size(); ++i) {
        const double min_laa = std::min({both[i].p_block_laa, lbt_only[i].p_block_laa,
                                         buf_only[i].p_block_laa, baseline[i].p_block_laa});
        if (baseline[i].p_block_laa > min_laa + 1e-12) ++a_viol;
        const double min_wifi = std::min({both[i].p_block_wifi, lbt_only[i].p_block_wifi,
                                          buf_only[i].p_block_wifi, baseline[i].p_block_wifi});
        if (both[i].p_block_wifi > min_wifi + 1e-12) ++b_viol;
        if (both[i].p_block_wifi >= lbt_only[i].p_block_wifi) ++c_viol;
        if (buf_only[i].p_block_wifi >= baseline[i].p_block_wifi) ++c_viol;
        if (both[i].p_block_laa > prev_both + 1e-12) ++d_viol;
        if (buf_only[i].p_block_laa > prev_buf + 1e-12) ++d_viol;
        prev_both = both[i].p_block_laa;
        prev_buf = buf_only[i].p_block_laa;
    }
    const double elapsed = seconds_since(t0);
    const bool pass = a_viol == 0 && b_viol == 0 && c_viol == 0 && d_viol == 0 && elapsed < 5.0;
    return {pass,
            fmt("(a) baseline-is-min-loss violated at %d/9 capacities, (b) combined-is-min-Wi-Fi "
                "violated at %d/9, (c) buffering-lowers-Wi-Fi violated %d times, (d) buffered "
                "loss non-increasing violated %d times; %.3fs",
                a_viol, b_viol, c_viol, d_viol, elapsed)};
}

// Criterion 8 — byte-identical simulate output for identical config and seed.
Outcome criterion8(const std::string& cli) {
    if (cli.empty()) return {false, "no CLI path given"};
    const std::string cfg = "/tmp/laacoex_acceptance_c8.cfg";
    {
        std::ofstream out(cfg);
        out << "sessions = 50000\nreplications = 3\nseed = 77\n";
    }
    std::string first, second;
    const int rc1 = run_command(cli + " simulate --config " + cfg + " 2>/dev/null", first);
    const int rc2 = run_command(cli + " simulate --config " + cfg + " 2>/dev/null", second);
    std::remove(cfg.c_str());
    if (rc1 != 0 || rc2 != 0) return {false, fmt("simulate exited %d/%d", rc1, rc2)};
    if (first != second) return {false, "outputs differ between identical invocations"};
    if (first.find("p_drop_laa") == std::string::npos)
        return {false, "simulate output missing the expected CSV header"};
    return {true, fmt("two runs, %zu bytes each, byte-identical", first.size())};
}

using Criterion = Outcome (*)(const std::string&);
const Criterion kCriteria[] = {criterion1, criterion2, criterion3, criterion4,
                               criterion5, criterion6, criterion7, criterion8};

} // namespace

int main(int argc, char** argv) {
    const std::string which = argc > 1 ? argv[1] : "all";
    const std::string cli = argc > 2 ? argv[2] : "";
    int failures = 0;
    for (int i = 0; i < 8; ++i) {
        if (which != "all" && which != std::to_string(i + 1)) continue;
        const Outcome result = kCriteria[i](cli);
        std::printf("CRITERION %d: %s — %s\n", i + 1, result.pass ? "PASS" : "FAIL",
                    result.detail.c_str());
        if (!result.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
