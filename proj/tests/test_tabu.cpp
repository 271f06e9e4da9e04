#include <doctest.h>

#include <cmath>

#include "hetplan/errors.hpp"
#include "hetplan/tabu.hpp"
#include "support.hpp"

using namespace hetplan;
using namespace hetplan::testing;

namespace {

// Two free-standing small sites and no users: every deployment scores 0.
// On this flat landscape the search trajectory is decided purely by the
// tabu rules, which makes their semantics fully scriptable.
ProblemInstance flat_instance() {
    return build_instance(
        {{0.0, 0.0, false, kInf, {small_fac(0.0, 0.0, 10.0)}},
         {10.0, 0.0, false, kInf, {small_fac(0.0, 0.0, 10.0)}}},
        {}, {}, 0.2, 1.0);
}

Deployment closed_deployment(const ProblemInstance& inst) {
    Deployment y;
    y.open.assign(inst.sites.size(), -1);
    return y;
}

} // namespace

TEST_SUITE_BEGIN("tabu");

TEST_CASE("cache round-trip and capacity clearing") {
    EvalCache cache(2);
    Deployment a;
    a.open = {-1, 0};
    Deployment b;
    b.open = {0, -1};
    Deployment c;
    c.open = {0, 0};
    double v = 0.0;
    CHECK_FALSE(cache.lookup(a, v));
    cache.store(a, 1.5);
    cache.store(b, -2.5);
    REQUIRE(cache.lookup(a, v));
    CHECK(v == 1.5);
    REQUIRE(cache.lookup(b, v));
    CHECK(v == -2.5);
    cache.store(c, 9.0); // hits the cap: wholesale clear, then insert
    CHECK(cache.size() == 1);
    CHECK_FALSE(cache.lookup(a, v));
    REQUIRE(cache.lookup(c, v));
    CHECK(v == 9.0);
}

TEST_CASE("small neighborhood enumerates close, open and nearest swaps") {
    // Macro site plus small sites at x = 0, 30, 10, 20: site 1 open.
    auto inst = build_instance(
        {{500.0, 500.0, true, kInf, {conv_fac(0.0, 46.0, 10.0)}},
         {0.0, 0.0, false, kInf, {small_fac(1.0, 30.0, 10.0)}},
         {30.0, 0.0, false, kInf, {small_fac(1.0, 30.0, 10.0)}},
         {10.0, 0.0, false, kInf, {small_fac(1.0, 30.0, 10.0)}},
         {20.0, 0.0, false, kInf, {small_fac(1.0, 30.0, 10.0)}}},
        {{5.0, 0.0, 1.0, 0.5}},
        {1e-6, 1e-6, 1e-6, 1e-6, 1e-6});
    Deployment y = closed_deployment(inst);
    y.open[0] = 0;
    y.open[1] = 0;

    auto moves = neighborhood_small(inst, y, 2);
    // 1 close + 3 opens + 2 nearest-swap targets (sites 3 then 4).
    REQUIRE(moves.size() == 6);
    CHECK(moves[0].kind == MoveKind::small_close);
    CHECK(moves[0].site1 == 1);
    CHECK(moves[1].kind == MoveKind::small_open);
    CHECK(moves[1].site1 == 2);
    CHECK(moves[4].kind == MoveKind::small_swap);
    CHECK(moves[4].site2 == 3); // distance 10 beats 20 and 30
    CHECK(moves[5].site2 == 4);

    CHECK(neighborhood_small(inst, y, 0).size() == 4); // swaps disabled
    // All empty: no closes, no swap sources.
    auto all_closed = closed_deployment(inst);
    all_closed.open[0] = 0;
    auto opens = neighborhood_small(inst, all_closed, 5);
    CHECK(opens.size() == 4);
    for (const auto& m : opens) CHECK(m.kind == MoveKind::small_open);
}

TEST_CASE("swap distance ties break toward the lower site index") {
    auto inst = build_instance(
        {{0.0, 0.0, false, kInf, {small_fac(1.0, 30.0, 10.0)}},
         {10.0, 0.0, false, kInf, {small_fac(1.0, 30.0, 10.0)}},
         {-10.0, 0.0, false, kInf, {small_fac(1.0, 30.0, 10.0)}}},
        {{5.0, 0.0, 1.0, 0.5}},
        {1e-6, 1e-6, 1e-6});
    Deployment y;
    y.open = {0, -1, -1}; // sites 1 and 2 equidistant from site 0
    auto moves = neighborhood_small(inst, y, 1);
    REQUIRE(moves.size() == 4); // close + 2 opens + 1 swap
    CHECK(moves[3].kind == MoveKind::small_swap);
    CHECK(moves[3].site2 == 1);
}

TEST_CASE("macro neighborhood: type changes plus non-identity exchanges") {
    auto two_entry = std::vector<FacilitySpec>{
        conv_fac(0.0, 46.0, 10.0), massive_fac(3.0, 46.0, 50.0, 0.01)};
    auto inst = build_instance(
        {{0.0, 0.0, true, kInf, two_entry},
         {10.0, 0.0, true, kInf, two_entry},
         {20.0, 0.0, true, kInf, two_entry},
         {30.0, 0.0, true, kInf, two_entry}},
        {{5.0, 0.0, 1.0, 0.5}},
        std::vector<double>(8, 1e-6));

    Deployment same;
    same.open = {0, 0, 0, 0};
    auto m1 = neighborhood_macro(inst, same);
    CHECK(m1.size() == 4); // one alternative each, no exchanges

    Deployment mixed;
    mixed.open = {0, 1, 0, 1};
    auto m2 = neighborhood_macro(inst, mixed);
    // 4 type changes + exchanges across differing pairs (0,1),(0,3),(1,2),(2,3).
    REQUIRE(m2.size() == 8);
    int exchanges = 0;
    for (const auto& m : m2)
        if (m.kind == MoveKind::macro_cross_site_swap) ++exchanges;
    CHECK(exchanges == 4);
}

TEST_CASE("exchanges are skipped when catalogs cannot host the entry") {
    auto inst = build_instance(
        {{0.0, 0.0, true, kInf, {conv_fac(0.0, 46.0, 10.0)}},
         {10.0, 0.0, true, kInf,
          {conv_fac(0.0, 46.0, 10.0), massive_fac(3.0, 46.0, 50.0, 0.01)}}},
        {{5.0, 0.0, 1.0, 0.5}},
        std::vector<double>(3, 1e-6));
    Deployment y;
    y.open = {0, 1};
    auto moves = neighborhood_macro(inst, y);
    // Site 1 can change type; the exchange would put entry 1 into site 0's
    // one-entry catalog, so it is dropped.
    REQUIRE(moves.size() == 1);
    CHECK(moves[0].kind == MoveKind::macro_same_site_swap);
    CHECK(moves[0].site1 == 1);
}

TEST_CASE("moves apply as documented") {
    Deployment y;
    y.open = {0, -1, 1, 0};
    apply_move(y, {MoveKind::small_close, 0, 0, -1, -1});
    CHECK(y.open == std::vector<int>{-1, -1, 1, 0});
    apply_move(y, {MoveKind::small_open, 1, 2, -1, -1});
    CHECK(y.open == std::vector<int>{-1, 2, 1, 0});
    apply_move(y, {MoveKind::small_swap, 1, 2, 0, 1});
    CHECK(y.open == std::vector<int>{1, -1, 1, 0});
    apply_move(y, {MoveKind::macro_same_site_swap, 2, 1, 2, 0});
    CHECK(y.open == std::vector<int>{1, -1, 0, 0});
    apply_move(y, {MoveKind::macro_cross_site_swap, 2, 0, 3, 1});
    CHECK(y.open == std::vector<int>{1, -1, 1, 0});
}

TEST_CASE("flat landscape: tenure, eviction and hit counts run to script") {
    // With every value equal, acceptance is governed entirely by the tabu
    // list: open S0, open S1, then forced oscillation through evictions.
    auto inst = flat_instance();
    TabuParams p;
    p.tenure = 3;
    p.max_outer = 1;
    p.max_inner = 8;
    p.n_swap = 5;
    p.n_ni = 100;
    p.single_level = true;
    auto res = two_level_search(inst, closed_deployment(inst), p);

    REQUIRE(res.trace.size() == 8);
    const MoveKind O = MoveKind::small_open, C = MoveKind::small_close;
    const MoveKind kinds[] = {O, O, C, C, O, O, C, C};
    const int hits[] = {0, 2, 2, 3, 2, 3, 2, 3};
    for (int i = 0; i < 8; ++i) {
        CHECK(res.trace[i].kind == kinds[i]);
        CHECK(res.trace[i].tabu_hits == hits[i]);
        CHECK(res.trace[i].level == 2);
        CHECK(res.trace[i].iteration == i + 1);
        CHECK(res.trace[i].candidate_value == 0.0);
        CHECK(res.trace[i].best_value == 0.0);
    }
    CHECK(res.best_value == 0.0);
}

TEST_CASE("zero tenure reduces to steepest descent") {
    Rng rng(68);
    for (int trial = 0; trial < 20; ++trial) {
        auto inst = random_tiny_instance(rng);
        TabuParams p;
        p.tenure = 0;
        p.max_outer = 1;
        p.max_inner = 15;
        p.n_swap = 3;
        p.n_ni = 1000;
        p.single_level = true;
        auto y0 = baseline_deployment(inst);
        auto res = two_level_search(inst, y0, p);

        // Direct reimplementation: always move to the first-best neighbor.
        EvalWorkspace ws;
        Deployment cur = y0;
        double best = evaluate(inst, cur, ws);
        REQUIRE(res.trace.size() == 15);
        for (int t = 0; t < 15; ++t) {
            auto moves = neighborhood_small(inst, cur, p.n_swap);
            REQUIRE_FALSE(moves.empty());
            std::size_t pick = 0;
            double pick_v = kInf;
            for (std::size_t i = 0; i < moves.size(); ++i) {
                Deployment tmp = cur;
                apply_move(tmp, moves[i]);
                const double v = evaluate(inst, tmp, ws);
                if (v < pick_v) {
                    pick_v = v;
                    pick = i;
                }
            }
            apply_move(cur, moves[pick]);
            best = std::min(best, pick_v);
            CHECK(res.trace[t].kind == moves[pick].kind);
            CHECK(res.trace[t].candidate_value == pick_v);
            CHECK(res.trace[t].best_value == best);
        }
        CHECK(res.best_value == best);
    }
}

TEST_CASE("diversification opens the least-frequently-used empty sites") {
    // Stalling landscape: singles all worsen, but the pair {S1, S2} (the two
    // least-frequently-open sites after the scripted first two iterations)
    // covers demand 14 through a capacity split and strictly improves.  The
    // restart must find exactly that pair.
    auto inst = build_instance(
        {{0.0, 0.0, false, kInf, {small_fac(0.05, 0.0, 1.0)}},
         {100.0, 0.0, false, kInf, {small_fac(1.9, 0.0, 9.0)}},
         {200.0, 0.0, false, kInf, {small_fac(0.5, 0.0, 5.0)}},
         {300.0, 0.0, false, kInf, {small_fac(5.0, 0.0, 1.0)}}},
        {{0.0, 0.0, 2.0, 2.0}, {1.0, 0.0, 9.0, 2.0}, {2.0, 0.0, 5.0, 2.0}},
        {1e-9, 1e-9, 1e-9,      // S0: negligible, tiny capacity
         1e-5, 1e-3, 1e-5,      // S1: strongest for user 1
         1e-3, 1e-5, 1e-3,      // S2: strongest for users 0 and 2
         1e-9, 1e-9, 1e-9},     // S3: negligible
        0.2, 1.0);
    TabuParams p;
    p.tenure = 0;
    p.max_outer = 1;
    p.max_inner = 2;
    p.n_swap = 0;
    p.n_div = 2;
    p.n_ni = 2;
    p.single_level = true;
    auto res = two_level_search(inst, closed_deployment(inst), p);

    // Scripted prefix: open S0 (cheapest single at +0.05), close S0 (back
    // to 0); two stalls trigger the restart, which opens S1 and S2
    // (frequency 0, lowest indices) and immediately improves the incumbent.
    REQUIRE(res.trace.size() == 2);
    CHECK(res.trace[0].kind == MoveKind::small_open);
    CHECK(res.trace[1].kind == MoveKind::small_close);
    CHECK(res.trace[0].diversifications == 0);
    CHECK(res.trace[1].diversifications == 1);
    CHECK(res.best_y.open == std::vector<int>{-1, 0, 0, -1});
    CHECK(res.best_value == doctest::Approx(2.4 - 0.2 * 14.0));
}

TEST_CASE("search results are coherent on random instances") {
    Rng rng(7777);
    for (int trial = 0; trial < 30; ++trial) {
        auto inst = random_tiny_instance(rng);
        TabuParams p;
        p.tenure = 3;
        p.max_outer = 3;
        p.max_inner = 6;
        p.n_swap = 2;
        p.n_div = 1;
        p.n_ni = 4;
        auto res = two_level_search(inst, baseline_deployment(inst), p);

        // The incumbent value is exactly the evaluation of the incumbent.
        EvalWorkspace ws;
        CHECK(res.best_value == evaluate(inst, res.best_y, ws));
        // Feasible by construction (macros repaired, legal entries).
        auto x = assign_users(inst, res.best_y, ws);
        CHECK(check_feasibility(inst, res.best_y, x).feasible());

        double prev_best = evaluate(inst, baseline_deployment(inst), ws);
        long last_iter[3] = {0, 0, 0};
        for (const auto& row : res.trace) {
            // U never worsens and is updated exactly on strict improvements.
            CHECK(row.best_value <= prev_best + 1e-15);
            if (!std::isnan(row.candidate_value) &&
                row.candidate_value < prev_best)
                CHECK(row.best_value == row.candidate_value);
            prev_best = row.best_value;
            // Levels own disjoint move kinds and cumulative counters.
            REQUIRE((row.level == 1 || row.level == 2));
            if (row.level == 1)
                CHECK((row.kind == MoveKind::macro_same_site_swap ||
                       row.kind == MoveKind::macro_cross_site_swap ||
                       row.kind == MoveKind::none));
            else
                CHECK((row.kind == MoveKind::small_close ||
                       row.kind == MoveKind::small_open ||
                       row.kind == MoveKind::small_swap ||
                       row.kind == MoveKind::none));
            CHECK(row.iteration == last_iter[row.level] + 1);
            last_iter[row.level] = row.iteration;
        }
        CHECK(res.best_value <= evaluate(inst, baseline_deployment(inst), ws));
    }
}

TEST_CASE("memoization never changes the outcome") {
    Rng rng(15);
    for (int trial = 0; trial < 10; ++trial) {
        auto inst = random_tiny_instance(rng);
        TabuParams p;
        p.tenure = 2;
        p.max_outer = 2;
        p.max_inner = 5;
        p.n_swap = 2;
        p.n_ni = 3;
        p.n_div = 1;
        auto plain = two_level_search(inst, baseline_deployment(inst), p);
        EvalCache cache;
        auto cached = two_level_search(inst, baseline_deployment(inst), p, &cache);
        CHECK(plain.best_value == cached.best_value);
        CHECK(plain.best_y.open == cached.best_y.open);
        REQUIRE(plain.trace.size() == cached.trace.size());
        for (std::size_t i = 0; i < plain.trace.size(); ++i) {
            CHECK(plain.trace[i].kind == cached.trace[i].kind);
            CHECK(plain.trace[i].candidate_value == cached.trace[i].candidate_value);
        }
        CHECK(cache.size() > 0);
    }
}

TEST_CASE("parameter validation") {
    auto inst = flat_instance();
    auto y0 = closed_deployment(inst);
    TabuParams p;
    p.tenure = -1;
    CHECK_THROWS_AS(two_level_search(inst, y0, p), ConfigError);
    p = {};
    p.n_ni = 0;
    CHECK_THROWS_AS(two_level_search(inst, y0, p), ConfigError);
    p = {};
    p.n_swap = -2;
    CHECK_THROWS_AS(two_level_search(inst, y0, p), ConfigError);
    p = {};
    p.max_inner = -1;
    CHECK_THROWS_AS(two_level_search(inst, y0, p), ConfigError);
}

TEST_SUITE_END();
