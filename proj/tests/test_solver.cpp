#include <doctest.h>

#include <cmath>

#include "hetplan/errors.hpp"
#include "hetplan/oracle.hpp"
#include "hetplan/solver.hpp"
#include "support.hpp"

using namespace hetplan;
using namespace hetplan::testing;

namespace {

SolverParams quick_params() {
    SolverParams p;
    p.n_max = 12;
    p.n1 = 2;
    p.n2 = 5;
    p.epsilon = 0.01;
    p.s0 = 2.0;
    p.tabu.tenure = 3;
    p.tabu.max_outer = 2;
    p.tabu.max_inner = 5;
    p.tabu.n_swap = 2;
    p.tabu.n_div = 1;
    p.tabu.n_ni = 4;
    return p;
}

} // namespace

TEST_SUITE_BEGIN("solver");

TEST_CASE("relative gap conventions") {
    CHECK(relative_gap(10.0, 5.0) == 0.5);
    CHECK(relative_gap(-10.0, -20.0) == 1.0);
    CHECK(relative_gap(-10.0, -10.0) == 0.0);
    CHECK(relative_gap(0.0, 0.0) == 0.0);
    CHECK(relative_gap(0.0, -3.0) == kInf);
}

TEST_CASE("termination reason names") {
    CHECK(std::string(to_string(TerminationReason::gap)) == "gap");
    CHECK(std::string(to_string(TerminationReason::complementary_slackness)) ==
          "complementary_slackness");
    CHECK(std::string(to_string(TerminationReason::max_iterations)) ==
          "max_iterations");
}

TEST_CASE("free macro serving one user closes the gap immediately") {
    // Baseline covers everything at zero cost, and the dual value at zero
    // multipliers coincides, so the solve ends at t = 1 with a zero gap.
    auto inst = build_instance(
        {{0.0, 0.0, true, kInf, {conv_fac(0.0, 46.0, 10.0)}}},
        {{5.0, 0.0, 4.0, 2.0}},
        {1e-6}, 0.2);
    auto res = solve(inst, quick_params());
    CHECK(res.reason == TerminationReason::gap);
    CHECK(res.iterations == 1);
    CHECK(res.upper == doctest::Approx(-0.8));
    CHECK(res.lower == doctest::Approx(-0.8));
    CHECK(res.gap == 0.0);
    REQUIRE(res.bounds.size() == 1);
    CHECK(res.bounds[0].t == 1);
    CHECK_FALSE(res.bounds[0].halved);
    CHECK_FALSE(res.bounds[0].reinit);
    CHECK(res.best_x.serving[0] == 0);
    CHECK(res.small_cells_opened == 0);
    CHECK(res.macro_upgrades == 0);
}

TEST_CASE("bounds sandwich the exhaustive optimum") {
    Rng rng(808);
    for (int trial = 0; trial < 12; ++trial) {
        auto inst = random_tiny_instance(rng);
        auto oracle = exhaustive_best(inst);
        auto res = solve(inst, quick_params());
        CHECK(res.lower <= oracle.best_objective + 1e-6);
        CHECK(res.upper >= oracle.best_objective - 1e-9);
        // The incumbent never loses to the trivial baseline.
        EvalWorkspace ws;
        CHECK(res.upper <= evaluate(inst, baseline_deployment(inst), ws) + 1e-15);
        // And the reported pieces agree with each other.
        CHECK(res.upper == evaluate(inst, res.best_y, ws));
        auto x = assign_users(inst, res.best_y, ws);
        CHECK(x.serving == res.best_x.serving);
        CHECK(res.gap == relative_gap(res.upper, res.lower));
        CHECK(check_feasibility(inst, res.best_y, res.best_x).feasible());
    }
}

TEST_CASE("trace is monotone and step bookkeeping replays exactly") {
    Rng rng(1313);
    int replayed = 0;
    for (int trial = 0; trial < 10; ++trial) {
        auto inst = random_tiny_instance(rng);
        SolverParams p = quick_params();
        p.epsilon = 1e-6; // make early gap exits rare
        auto res = solve(inst, p);
        REQUIRE_FALSE(res.bounds.empty());

        double lower = -kInf, upper = kInf, s = p.s0;
        int q = 0;
        for (std::size_t i = 0; i < res.bounds.size(); ++i) {
            const BoundTraceRow& row = res.bounds[i];
            CHECK(row.t == static_cast<int>(i) + 1);
            // Monotone envelopes.
            CHECK(row.lower >= lower - 1e-15);
            CHECK(row.upper <= upper + 1e-15);
            CHECK(row.lower >= row.lower_t - 1e-15);
            CHECK(row.gap == relative_gap(row.upper, row.lower));

            // Replay the stall counter: halves exactly when q reaches n1.
            bool expect_halved = false;
            if (row.lower_t > lower) {
                q = 0;
            } else if (++q == p.n1) {
                s *= 0.5;
                q = 0;
                expect_halved = true;
            }
            CHECK(row.halved == expect_halved);
            CHECK(row.step_scale == s);
            // Reset lands exactly on multiples of n2, never on the last row
            // of a gap/slackness exit.
            const bool terminal =
                i + 1 == res.bounds.size() &&
                res.reason != TerminationReason::max_iterations;
            if (terminal)
                CHECK_FALSE(row.reinit);
            else
                CHECK(row.reinit == ((row.t + 1) % p.n2 == 0));
            if (row.reinit) s = p.s0;

            lower = row.lower;
            upper = row.upper;
            ++replayed;
        }
        if (res.reason == TerminationReason::max_iterations)
            CHECK(static_cast<int>(res.bounds.size()) == p.n_max);
        CHECK(res.iterations == static_cast<int>(res.bounds.size()));
    }
    CHECK(replayed > 20); // the replay actually exercised several iterations
}

TEST_CASE("single-level mode keeps macros conventional") {
    Rng rng(606);
    auto inst = random_tiny_instance(rng);
    SolverParams p = quick_params();
    p.single_level = true;
    auto res = solve(inst, p);
    for (int i = 0; i < inst.n_sites(); ++i) {
        if (!inst.sites[i].is_macro) continue;
        REQUIRE(res.best_y.open[i] >= 0);
        CHECK(inst.sites[i].catalog[res.best_y.open[i]].kind ==
              FacilityKind::macro_conventional);
    }
    CHECK(res.macro_upgrades == 0);
    for (const auto& tr : res.tabu_trace) CHECK(tr.row.level == 2);
}

TEST_CASE("runs are deterministic") {
    Rng rng(99);
    auto inst = random_tiny_instance(rng);
    SolverParams p = quick_params();
    auto a = solve(inst, p, 42);
    auto b = solve(inst, p, 42);
    CHECK(a.best_y.open == b.best_y.open);
    CHECK(a.upper == b.upper);
    CHECK(a.lower == b.lower);
    CHECK(a.iterations == b.iterations);
    REQUIRE(a.bounds.size() == b.bounds.size());
    for (std::size_t i = 0; i < a.bounds.size(); ++i) {
        CHECK(a.bounds[i].lower_t == b.bounds[i].lower_t);
        CHECK(a.bounds[i].upper == b.bounds[i].upper);
        CHECK(a.bounds[i].norm_g == b.bounds[i].norm_g);
    }
    REQUIRE(a.tabu_trace.size() == b.tabu_trace.size());
    for (std::size_t i = 0; i < a.tabu_trace.size(); ++i) {
        CHECK(a.tabu_trace[i].solver_t == b.tabu_trace[i].solver_t);
        CHECK(a.tabu_trace[i].row.candidate_value ==
              b.tabu_trace[i].row.candidate_value);
    }
}

TEST_CASE("warm start still produces valid bounds") {
    Rng rng(31);
    auto inst = random_tiny_instance(rng);
    auto oracle = exhaustive_best(inst);
    SolverParams p = quick_params();
    p.warm_start_from_best = true;
    auto res = solve(inst, p);
    CHECK(res.lower <= oracle.best_objective + 1e-6);
    CHECK(res.upper >= oracle.best_objective - 1e-9);
}

TEST_CASE("iteration cap reports its own termination reason") {
    Rng rng(11);
    auto inst = random_tiny_instance(rng);
    SolverParams p = quick_params();
    p.n_max = 1;
    p.epsilon = 1e-9;
    auto res = solve(inst, p);
    if (res.reason == TerminationReason::max_iterations) {
        CHECK(res.iterations == 1);
        CHECK(res.bounds.size() == 1);
    }
}

TEST_CASE("bad parameters and instances are rejected") {
    Rng rng(3);
    auto inst = random_tiny_instance(rng);
    SolverParams p = quick_params();
    p.n_max = 0;
    CHECK_THROWS_AS(solve(inst, p), ConfigError);
    p = quick_params();
    p.epsilon = 0.0;
    CHECK_THROWS_AS(solve(inst, p), ConfigError);
    p = quick_params();
    p.epsilon = 1.0;
    CHECK_THROWS_AS(solve(inst, p), ConfigError);
    p = quick_params();
    p.s0 = 0.0;
    CHECK_THROWS_AS(solve(inst, p), ConfigError);
    p = quick_params();
    p.n1 = 0;
    CHECK_THROWS_AS(solve(inst, p), ConfigError);

    auto broken = inst;
    broken.users[0].demand = -1.0;
    CHECK_THROWS_AS(solve(broken, quick_params()), ValidationError);
}

TEST_SUITE_END();
