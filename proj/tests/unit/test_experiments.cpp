#include "doctest.h"

#include "experiments.hpp"

#include <cstring>

using namespace laacoex;

TEST_CASE("scenario labels") {
    CHECK(std::strcmp(variant_label(true, true), "lbt_buffering") == 0);
    CHECK(std::strcmp(variant_label(true, false), "lbt_only") == 0);
    CHECK(std::strcmp(variant_label(false, true), "buffering_only") == 0);
    CHECK(std::strcmp(variant_label(false, false), "baseline") == 0);
}

TEST_CASE("reference tables carry the published operating points") {
    const auto& t1 = reference_table(1);
    const auto& t2 = reference_table(2);
    REQUIRE(t1.size() == 5);
    REQUIRE(t2.size() == 5);
    const double lambdas[] = {25.0, 37.0, 50.0, 62.5, 120.0};
    for (size_t i = 0; i < 5; ++i) {
        CHECK(t1[i].lambda_laa == lambdas[i]);
        CHECK(t2[i].lambda_laa == lambdas[i]);
    }
    CHECK(t1[2].p_block_laa == doctest::Approx(0.646604));
    CHECK(t1[2].p_block_wifi == doctest::Approx(0.710252));
    CHECK(t2[0].p_block_laa == doctest::Approx(0.250425));
    CHECK(t2[4].p_block_wifi == doctest::Approx(0.992457));
    CHECK_THROWS_AS(reference_table(3), ValidationError);
}

TEST_CASE("table parameters") {
    const Params p1 = table_params(1, 62.5);
    CHECK(p1.lbt == true);
    CHECK(p1.buffering == true);
    CHECK(p1.lambda_laa == 62.5);
    CHECK(p1.queue_capacity == 2);
    CHECK(p1.queue_threshold == 2);
    const Params p2 = table_params(2, 37.0);
    CHECK(p2.lbt == false);
    CHECK(p2.lambda_laa == 37.0);
    CHECK_THROWS_AS(table_params(0, 25.0), ValidationError);
}

TEST_CASE("percentage error helper") {
    SUBCASE("exact agreement") {
        const ErrorPct e = compare_values(0.5, 0.5);
        CHECK(e.defined);
        CHECK(e.pct == 0.0);
    }
    SUBCASE("worked example") {
        const ErrorPct e = compare_values(0.452044, 0.415108);
        CHECK(e.defined);
        CHECK(e.pct == doctest::Approx(8.170886).epsilon(1e-6));
    }
    SUBCASE("zero analytic value leaves the error undefined") {
        const ErrorPct e = compare_values(0.0, 0.01);
        CHECK(!e.defined);
    }
}

TEST_CASE("analytic-versus-simulated comparison rows") {
    const auto rows = run_comparison(2, 20000, 3, 5);
    REQUIRE(rows.size() == 5);
    for (size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        CHECK(r.scenario == "buffering_only");
        CHECK(r.lambda_laa == reference_table(2)[i].lambda_laa);
        CHECK(r.analytic_p_block_laa > 0.0);
        CHECK(r.sim_p_drop_laa > 0.0);
        CHECK(r.ci_halfwidth_laa > 0.0);
        CHECK(r.error_laa.defined);
        CHECK(r.error_wifi.defined);
        // Outside-interval flag is consistent with its inputs.
        const bool outside =
            std::abs(r.analytic_p_block_laa - r.sim_p_drop_laa) > r.ci_halfwidth_laa;
        CHECK(r.analytic_outside_ci_laa == outside);
    }
    const auto rows1 = run_comparison(1, 5000, 2, 5);
    REQUIRE(rows1.size() == 5);
    CHECK(rows1[0].scenario == "lbt_buffering");
}

TEST_CASE("queue sweep reproduces the frozen capacity curves") {
    SUBCASE("combined variant") {
        const auto pts = queue_sweep(true, true, 2, 10);
        REQUIRE(pts.size() == 9);
        CHECK(pts[0].queue_capacity == 2);
        CHECK(pts[0].p_block_laa == doctest::Approx(0.580188006).epsilon(1e-8));
        CHECK(pts[0].p_block_wifi == doctest::Approx(0.209905997).epsilon(1e-8));
        CHECK(pts[8].queue_capacity == 10);
        CHECK(pts[8].p_block_laa == doctest::Approx(0.216797250).epsilon(1e-8));
        CHECK(pts[8].p_block_wifi == doctest::Approx(0.381199907).epsilon(1e-8));
        for (size_t i = 1; i < pts.size(); ++i) {
            CHECK(pts[i].p_block_laa < pts[i - 1].p_block_laa);  // bigger buffer helps
            CHECK(pts[i].p_block_wifi > pts[i - 1].p_block_wifi); // at Wi-Fi's expense
        }
    }
    SUBCASE("buffering-only variant") {
        const auto pts = queue_sweep(false, true, 2, 10);
        REQUIRE(pts.size() == 9);
        CHECK(pts[0].p_block_laa == doctest::Approx(0.090909091).epsilon(1e-8));
        CHECK(pts[0].p_block_wifi == doctest::Approx(0.454545455).epsilon(1e-8));
        CHECK(pts[8].p_block_laa == doctest::Approx(0.000325627).epsilon(1e-6));
    }
    SUBCASE("unbuffered variants ignore the capacity") {
        const auto lbt = queue_sweep(true, false, 2, 10);
        REQUIRE(lbt.size() == 9);
        for (const auto& pt : lbt) {
            CHECK(pt.p_block_laa == doctest::Approx(0.677346570).epsilon(1e-8));
            CHECK(pt.p_block_wifi == doctest::Approx(0.161326715).epsilon(1e-8));
        }
        const auto none = queue_sweep(false, false, 2, 10);
        for (const auto& pt : none) {
            CHECK(pt.p_block_laa == doctest::Approx(0.5).epsilon(1e-12));
            CHECK(pt.p_block_wifi == doctest::Approx(0.25).epsilon(1e-12));
        }
    }
    SUBCASE("served-load identity holds along every curve") {
        // Accepted unlicensed load equals served load: arrivals neither lost
        // nor falling outside every gate (idle channel, 0 < z < Q) are served,
        // so lambda*(1 - lost - gateless) = mu * P(server unlicensed-held).
        for (const bool lbt : {true, false}) {
            for (const bool buffering : {true, false}) {
                for (const auto& pt : queue_sweep(lbt, buffering, 2, 6)) {
                    const Params p = sweep_params(lbt, buffering, pt.queue_capacity);
                    const auto m = build_rate_matrix(p);
                    const auto sol = solve_direct(m, p);
                    double gateless = 0.0;
                    for (size_t i = 0; i < m.states.size(); ++i) {
                        const State& s = m.states[i];
                        if (s.w == kOn && s.x + s.y < p.servers && s.z > 0 &&
                            s.z < p.effective_queue())
                            gateless += sol.pi[i];
                    }
                    const double accepted = 1.0 - pt.p_block_laa - gateless;
                    CHECK(pt.p_block_wifi ==
                          doctest::Approx(p.lambda_laa * accepted / p.mu_laa).epsilon(1e-10));
                }
            }
        }
    }
    SUBCASE("range validation") {
        CHECK_THROWS_AS(queue_sweep(true, true, 1, 10), ValidationError);
        CHECK_THROWS_AS(queue_sweep(true, true, 5, 4), ValidationError);
        CHECK_THROWS_AS(queue_sweep(true, true, 2, 21), ValidationError);
    }
}

TEST_CASE("wake-gate interpretation scan") {
    size_t best = 99;
    const auto results = interpretation_scan(best);
    REQUIRE(results.size() == 5);
    CHECK(best == 0);
    CHECK(results[0].name == "wake_at_or_above");
    CHECK(results[0].structurally_valid);
    CHECK(results[0].max_rel_err_laa == doctest::Approx(0.0512756).epsilon(1e-4));
    CHECK(results[0].max_rel_err_wifi == doctest::Approx(0.0343198).epsilon(1e-4));
    CHECK(results[0].max_rel_err == doctest::Approx(0.0512756).epsilon(1e-4));
    CHECK(results[1].name == "wake_strictly_above");
    CHECK(!results[1].structurally_valid);
    CHECK(!results[2].structurally_valid);
    CHECK(results[3].name == "wake_at_or_above_no_wifi_abort");
    CHECK(results[3].structurally_valid);
    CHECK(results[3].max_rel_err_laa == doctest::Approx(0.185192).epsilon(1e-4));
    CHECK(!results[4].structurally_valid);
    // Every valid alternative is worse than the shipped reading.
    for (size_t i = 1; i < results.size(); ++i)
        if (results[i].structurally_valid) CHECK(results[i].max_rel_err > results[0].max_rel_err);
}

TEST_CASE("interpretation report is renderable text") {
    const std::string report = interpretation_report();
    CHECK(report.find("wake_at_or_above") != std::string::npos);
    CHECK(report.find("structurally invalid") != std::string::npos);
    CHECK(report.find("best") != std::string::npos);
}
