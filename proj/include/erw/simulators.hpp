#pragma once

#include <cstdint>
#include <vector>

#include "erw/env_model.hpp"
#include "erw/rng.hpp"

namespace erw {

// Flattened system view for the trial loops.
struct StackRuntime {
    int n = 0;
    std::vector<double> p;
    std::vector<double> eta_cum;
    std::vector<double> k_cum;  // row-major cumulative rows of K
    std::vector<uint8_t> absorbing;

    static StackRuntime make(const CookieSystem& sys);

    int initial(Rng& g) const {
        double u = g.next_double();
        int i = 0;
        while (i + 1 < n && u >= eta_cum[i]) ++i;
        return i;
    }

    int advance(int s, Rng& g) const {
        double u = g.next_double();
        const double* row = &k_cum[static_cast<size_t>(s) * n];
        int j = 0;
        while (j + 1 < n && u >= row[j]) ++j;
        return j;
    }
};

// Per-stream draw contract shared by the walk and the replayed generation
// samplers: one uniform for the initial type, then per trial one uniform for
// the step coin followed by one uniform for the chain move unless the current
// type is absorbing. Everything that replays a site must follow it exactly.

// Successes drawn before the m-th failure (one generation of the forward
// process). fast=true replaces the absorbed phase by one negative-binomial
// jump; distributionally identical, different draw pattern.
uint64_t successes_before_failures(const StackRuntime& rt, Rng& g, uint64_t m, bool fast);

// Failures drawn before the m-th success (one generation of the backward process).
uint64_t failures_before_successes(const StackRuntime& rt, Rng& g, uint64_t m, bool fast);

struct WalkConfig {
    uint64_t horizon = 1000000;        // step cap
    std::vector<int64_t> targets;      // ascending positive sites to time
    uint64_t record_stride = 0;        // record position every stride steps
    bool record_hit_profiles = false;  // snapshot left-edge counts at each target hit
    bool record_site_summary = false;  // first-hit times per level and final left counts
    bool origin_always_right = false;  // modified environment at the origin
    int track_excursions = 0;          // stop at this many returns to 0 from the right
    uint64_t path_index = 0;           // replica id, selects environment substreams
};

struct WalkHit {
    int64_t site = 0;
    uint64_t time = 0;
    int64_t min_site = 0;
    std::vector<uint64_t> left_counts;  // left-edge crossings for x in [min_site, site)
};

struct WalkRecord {
    std::vector<int64_t> positions;
    std::vector<WalkHit> hits;
    std::vector<uint64_t> returns;        // times of returns to 0 from the right
    std::vector<uint64_t> up_crossings;   // per site 0..max_site at stop
    std::vector<uint64_t> first_hits;     // first arrival time of level k at index k-1
    std::vector<uint64_t> left_at_end;    // left-edge crossings per site 0..max_site at stop
    int64_t final_position = 0;
    uint64_t steps = 0;
    bool horizon_hit = false;
    int64_t min_site = 0, max_site = 0;
};

WalkRecord simulate_walk(const CookieSystem& sys, const WalkConfig& cfg, uint64_t seed);

struct BlpConfig {
    uint64_t y0 = 1;
    uint64_t horizon = 1000000;  // generations
    uint64_t value_cap = 0;      // forward only: stop once the value exceeds this
    int n_regenerations = 0;     // backward only: stop after this many returns to 0
    bool record_values = false;
    bool fast_path = true;
    uint64_t path_index = 0;
};

struct RegenPair {
    uint64_t duration = 0;
    uint64_t progeny = 0;
};

struct BlpRecord {
    uint64_t lifetime = 0;        // generations to the first zero
    bool censored = false;        // horizon or value cap reached first
    uint64_t total_progeny = 0;   // values summed over the first excursion
    uint64_t final_value = 0;
    std::vector<uint64_t> values;  // per generation when record_values
    std::vector<RegenPair> regens;
};

// Forward process: generation value = successes before (previous value)-many
// failures on a fresh stack. Dies at 0.
BlpRecord simulate_forward_blp(const CookieSystem& sys, const BlpConfig& cfg, uint64_t seed);

// Backward process: generation value = failures before (previous value + 1)
// successes on a fresh stack. Never dies; zeros are regeneration points.
BlpRecord simulate_backward_blp(const CookieSystem& sys, const BlpConfig& cfg, uint64_t seed);

enum class CoupledMode { forward, backward };

struct CoupledConfig {
    CoupledMode mode = CoupledMode::forward;
    uint64_t y0 = 1;
    uint64_t horizon = 1000;
    uint64_t value_cap = 0;  // forward: cap on the dominating value
    uint64_t path_index = 0;
};

struct CoupledRecord {
    std::vector<uint64_t> strong;  // p1-side values per generation
    std::vector<uint64_t> weak;    // two-strength side values
    uint64_t violations = 0;       // domination failures (expected 0)
};

// Runs the p1 process and the eps-mixed process on shared trial coins; the
// p1 side must dominate in forward mode and be dominated in backward mode.
CoupledRecord simulate_coupled_blp(const CookieSystem& base, const Vector& p1, double eps,
                                   const CoupledConfig& cfg, uint64_t seed);

struct PathwiseReport {
    uint64_t paths = 0;
    uint64_t gamma_completed = 0;       // paths finishing all requested excursions
    uint64_t domination_violations = 0; // up-crossing counts exceeding replayed values
    uint64_t equality_violations = 0;   // mismatches on completed-excursion paths
};

// Walk-vs-forward-process check: walk with an always-right origin, up-crossing
// counts per site, against the generation replay off the same site streams.
PathwiseReport verify_walk_forward_coupling(const CookieSystem& sys, int n_excursions,
                                            uint64_t paths, uint64_t horizon_steps,
                                            uint64_t seed);

// Throws CouplingViolation if any shared-coin domination fails.
void verify_coupling(const CookieSystem& base, const Vector& p1, double eps, uint64_t paths,
                     const CoupledConfig& cfg_template, uint64_t seed);

}  // namespace erw
