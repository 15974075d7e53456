// Walk and generation-process simulators: exact identities, replay, couplings.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <numeric>
#include <vector>

#include "erw/simulators.hpp"
#include "erw/statistics.hpp"

using erw::BlpConfig;
using erw::CoupledConfig;
using erw::CoupledMode;
using erw::WalkConfig;

TEST_CASE("hitting time equals site plus twice the left-step count, exactly") {
    auto sys = erw::geometric_system(0.1, 0.9);
    for (uint64_t path = 0; path < 300; ++path) {
        WalkConfig wc;
        wc.targets = {25};
        wc.horizon = 1000000;
        wc.record_hit_profiles = true;
        wc.path_index = path;
        auto rec = erw::simulate_walk(sys, wc, 1729);
        REQUIRE(rec.hits.size() == 1);
        const auto& hit = rec.hits[0];
        uint64_t left_total = 0;
        for (uint64_t c : hit.left_counts) left_total += c;
        CHECK(hit.time == static_cast<uint64_t>(hit.site) + 2 * left_total);
    }
}

TEST_CASE("walk records are a pure function of seed and path index") {
    auto sys = erw::two_type_system(0.3, 0.7);
    WalkConfig wc;
    wc.horizon = 20000;
    wc.record_stride = 1;
    wc.path_index = 3;
    auto a = erw::simulate_walk(sys, wc, 42);
    auto b = erw::simulate_walk(sys, wc, 42);
    CHECK(a.positions == b.positions);
    CHECK(a.steps == b.steps);
    CHECK(a.final_position == b.final_position);

    wc.path_index = 4;
    auto c = erw::simulate_walk(sys, wc, 42);
    CHECK(a.positions != c.positions);
}

TEST_CASE("walk consumption does not depend on recording options") {
    auto sys = erw::geometric_system(0.2, 0.55);
    WalkConfig plain;
    plain.horizon = 5000;
    plain.targets = {3};
    WalkConfig heavy = plain;
    heavy.record_stride = 7;
    heavy.record_site_summary = true;
    heavy.record_hit_profiles = true;
    auto a = erw::simulate_walk(sys, plain, 9);
    auto b = erw::simulate_walk(sys, heavy, 9);
    CHECK(a.final_position == b.final_position);
    CHECK(a.steps == b.steps);
}

TEST_CASE("fast and slow generation samplers agree in distribution") {
    auto sys = erw::geometric_system(0.3, 0.8);
    const auto rt = erw::StackRuntime::make(sys);
    const int n = 4000;
    const uint64_t m = 30;

    std::vector<double> fast(n), slow(n);
    for (int i = 0; i < n; ++i) {
        erw::Rng gf(101, erw::stream_pair(0, static_cast<uint32_t>(i)));
        fast[i] = static_cast<double>(erw::successes_before_failures(rt, gf, m, true));
        erw::Rng gs(202, erw::stream_pair(0, static_cast<uint32_t>(i)));
        slow[i] = static_cast<double>(erw::successes_before_failures(rt, gs, m, false));
    }
    CHECK(erw::ks_two_sample(fast, slow) < erw::ks_two_sample_threshold(n, n, 0.001));

    for (int i = 0; i < n; ++i) {
        erw::Rng gf(303, erw::stream_pair(1, static_cast<uint32_t>(i)));
        fast[i] = static_cast<double>(erw::failures_before_successes(rt, gf, m, true));
        erw::Rng gs(404, erw::stream_pair(1, static_cast<uint32_t>(i)));
        slow[i] = static_cast<double>(erw::failures_before_successes(rt, gs, m, false));
    }
    CHECK(erw::ks_two_sample(fast, slow) < erw::ks_two_sample_threshold(n, n, 0.001));
}

TEST_CASE("forward process dies and its record is consistent") {
    auto sys = erw::geometric_system(0.2, 0.55);
    BlpConfig bc;
    bc.y0 = 3;
    bc.horizon = 1000000;
    bc.record_values = true;
    uint64_t died = 0;
    for (uint64_t path = 0; path < 200; ++path) {
        bc.path_index = path;
        auto rec = erw::simulate_forward_blp(sys, bc, 77);
        if (rec.censored) continue;
        ++died;
        REQUIRE(rec.lifetime >= 1);
        CHECK(rec.values.size() == rec.lifetime);
        CHECK(rec.values.back() == 0);
        CHECK(rec.final_value == 0);
        uint64_t sum = bc.y0;
        for (uint64_t v : rec.values) sum += v;
        CHECK(rec.total_progeny == sum);
    }
    CHECK(died > 150);  // critical: death is almost sure, tail is polynomial
}

TEST_CASE("forward value cap censors instead of dying") {
    auto sys = erw::geometric_system(0.2, 0.55);
    BlpConfig bc;
    bc.y0 = 50;
    bc.horizon = 1000000;
    bc.value_cap = 60;
    bool saw_capped = false;
    for (uint64_t path = 0; path < 100 && !saw_capped; ++path) {
        bc.path_index = path;
        auto rec = erw::simulate_forward_blp(sys, bc, 5);
        if (rec.censored) {
            CHECK(rec.final_value > 60);
            saw_capped = true;
        }
    }
    CHECK(saw_capped);
}

TEST_CASE("backward process regenerates at zeros") {
    auto sys = erw::geometric_system(0.5, 0.75);
    BlpConfig bc;
    bc.y0 = 0;
    bc.horizon = 1000000;
    bc.n_regenerations = 25;
    bc.path_index = 12;
    auto rec = erw::simulate_backward_blp(sys, bc, 2024);
    REQUIRE(rec.regens.size() == 25);
    uint64_t total = 0;
    for (const auto& cyc : rec.regens) {
        CHECK(cyc.duration >= 1);
        total += cyc.duration;
    }
    CHECK(total <= bc.horizon);
    CHECK(rec.final_value == 0);
    // First cycle progeny matches the first-excursion progeny field.
    CHECK(rec.regens[0].progeny + bc.y0 == rec.total_progeny);
    CHECK(rec.lifetime == rec.regens[0].duration);
}

TEST_CASE("backward values never stall: zeros recur") {
    // Large-delta instance: excursions away from zero have a fast-decaying
    // length tail, so a 2000-generation window sees zeros in bulk.
    auto sys = erw::geometric_system(0.1, 0.9);
    BlpConfig bc;
    bc.y0 = 0;
    bc.horizon = 2000;
    bc.record_values = true;
    bc.path_index = 1;
    auto rec = erw::simulate_backward_blp(sys, bc, 6);
    CHECK(rec.values.size() == bc.horizon);
    CHECK(std::count(rec.values.begin(), rec.values.end(), uint64_t{0}) > 1000);
}

TEST_CASE("shared-coin coupling never violates the ordering") {
    auto base = erw::geometric_system(0.5, 0.6);
    erw::Vector p1(2);
    p1 << 0.8, 0.75;

    CoupledConfig cc;
    cc.mode = CoupledMode::forward;
    cc.y0 = 2;
    cc.horizon = 400;
    cc.value_cap = 100000;
    CHECK_NOTHROW(erw::verify_coupling(base, p1, 0.3, 300, cc, 555));

    cc.mode = CoupledMode::backward;
    cc.value_cap = 0;
    cc.horizon = 400;
    CHECK_NOTHROW(erw::verify_coupling(base, p1, 0.3, 300, cc, 556));

    // Identical strengths couple exactly: the two processes coincide.
    erw::Vector same = base.p;
    cc.mode = CoupledMode::forward;
    for (uint64_t path = 0; path < 20; ++path) {
        cc.path_index = path;
        auto rec = erw::simulate_coupled_blp(base, same, 0.5, cc, 777);
        CHECK(rec.violations == 0);
        CHECK(rec.strong == rec.weak);
    }
}

TEST_CASE("coupling preconditions throw the named kinds") {
    auto base = erw::geometric_system(0.5, 0.6);
    erw::Vector low(2);
    low << 0.55, 0.5;  // below base.p in the second entry
    CoupledConfig cc;
    try {
        erw::simulate_coupled_blp(base, low, 0.5, cc, 1);
        FAIL("expected NotDominating");
    } catch (const erw::Error& e) {
        CHECK(e.kind() == erw::errc::not_dominating);
    }
    erw::Vector p1(2);
    p1 << 0.8, 0.75;
    CHECK_THROWS_AS(erw::simulate_coupled_blp(base, p1, 0.0, cc, 1), erw::Error);
    CHECK_THROWS_AS(erw::simulate_coupled_blp(base, p1, 1.5, cc, 1), erw::Error);
}

TEST_CASE("walk up-crossings replay as the forward process") {
    auto sys = erw::geometric_system(0.2, 0.55);  // recurrent: excursions finish
    auto rep = erw::verify_walk_forward_coupling(sys, 4, 150, 2000000, 31);
    CHECK(rep.paths == 150);
    CHECK(rep.gamma_completed > 100);
    CHECK(rep.domination_violations == 0);
    CHECK(rep.equality_violations == 0);
}

TEST_CASE("always-right origin keeps the walk nonnegative") {
    auto sys = erw::geometric_system(0.2, 0.55);
    WalkConfig wc;
    wc.horizon = 50000;
    wc.origin_always_right = true;
    wc.track_excursions = 3;
    wc.record_stride = 1;
    auto rec = erw::simulate_walk(sys, wc, 11);
    CHECK(rec.min_site == 0);
    for (int64_t p : rec.positions) CHECK(p >= 0);
    if (rec.returns.size() >= 3) {
        CHECK_FALSE(rec.horizon_hit);
        CHECK(rec.up_crossings[0] == 3);
    }
}

TEST_CASE("walk target validation") {
    auto sys = erw::geometric_system(0.5, 0.75);
    WalkConfig wc;
    wc.targets = {5, 5};
    CHECK_THROWS_AS(erw::simulate_walk(sys, wc, 1), erw::Error);
    wc.targets = {-2};
    CHECK_THROWS_AS(erw::simulate_walk(sys, wc, 1), erw::Error);
}
