// Exact-stream simulation of the walk, the two generation processes, and the
// shared-coin coupled pair. Every random object is addressed by
// (seed ^ domain, path, site-or-generation), so replays are exact.

#include "erw/simulators.hpp"

#include <algorithm>

#include "erw/errors.hpp"

namespace erw {

StackRuntime StackRuntime::make(const CookieSystem& sys) {
    StackRuntime rt;
    rt.n = sys.n();
    rt.p.resize(rt.n);
    rt.eta_cum.resize(rt.n);
    rt.k_cum.resize(static_cast<size_t>(rt.n) * rt.n);
    rt.absorbing.resize(rt.n);
    double acc = 0.0;
    for (int i = 0; i < rt.n; ++i) {
        rt.p[i] = sys.p(i);
        acc += sys.eta(i);
        rt.eta_cum[i] = acc;
        rt.absorbing[i] = sys.K(i, i) >= 1.0 ? 1 : 0;
        double row = 0.0;
        for (int j = 0; j < rt.n; ++j) {
            row += sys.K(i, j);
            rt.k_cum[static_cast<size_t>(i) * rt.n + j] = row;
        }
    }
    return rt;
}

uint64_t successes_before_failures(const StackRuntime& rt, Rng& g, uint64_t m, bool fast) {
    if (m == 0) return 0;
    int s = rt.initial(g);
    uint64_t succ = 0, fails = 0;
    while (fails < m) {
        if (fast && rt.absorbing[s]) return succ + g.neg_binomial_count(m - fails, rt.p[s]);
        if (g.next_double() < rt.p[s]) {
            ++succ;
        } else {
            ++fails;
        }
        if (!rt.absorbing[s]) s = rt.advance(s, g);
    }
    return succ;
}

uint64_t failures_before_successes(const StackRuntime& rt, Rng& g, uint64_t m, bool fast) {
    if (m == 0) return 0;
    int s = rt.initial(g);
    uint64_t succ = 0, fails = 0;
    while (succ < m) {
        if (fast && rt.absorbing[s]) return fails + g.neg_binomial_count(m - succ, 1.0 - rt.p[s]);
        if (g.next_double() < rt.p[s]) {
            ++succ;
        } else {
            ++fails;
        }
        if (!rt.absorbing[s]) s = rt.advance(s, g);
    }
    return fails;
}

namespace {

// Lazy two-sided array of per-site stacks. Slots are created in ranges; an
// untouched slot has type -1 and zero crossing counts.
struct SiteSlot {
    Rng rng{0, 0};
    int32_t type = -1;
    uint64_t left = 0;
    uint64_t up = 0;
};

class SiteTable {
  public:
    SiteSlot& at(int64_t x) {
        if (x >= 0) {
            auto i = static_cast<size_t>(x);
            if (i >= pos_.size()) pos_.resize(std::max(pos_.size() * 2, i + 64));
            return pos_[i];
        }
        auto i = static_cast<size_t>(-1 - x);
        if (i >= neg_.size()) neg_.resize(std::max(neg_.size() * 2, i + 64));
        return neg_[i];
    }

  private:
    std::vector<SiteSlot> pos_, neg_;
};

}  // namespace

WalkRecord simulate_walk(const CookieSystem& sys, const WalkConfig& cfg, uint64_t seed) {
    for (size_t i = 1; i < cfg.targets.size(); ++i)
        if (cfg.targets[i] <= cfg.targets[i - 1]) fail(errc::bad_input, "targets must be ascending");
    for (int64_t t : cfg.targets)
        if (t <= 0) fail(errc::bad_input, "targets must be positive sites");

    const StackRuntime rt = StackRuntime::make(sys);
    const uint64_t env_seed = seed ^ domain::walk_env;
    const auto path32 = static_cast<uint32_t>(cfg.path_index);

    SiteTable sites;
    WalkRecord rec;
    int64_t pos = 0;
    size_t ti = 0;
    const bool has_goal = !cfg.targets.empty() || cfg.track_excursions > 0;

    while (rec.steps < cfg.horizon) {
        SiteSlot& s = sites.at(pos);
        bool right;
        if (cfg.origin_always_right && pos == 0) {
            right = true;
        } else {
            if (s.type < 0) {
                s.rng = Rng(env_seed, stream_pair(path32, zigzag32(pos)));
                s.type = rt.initial(s.rng);
            }
            right = s.rng.next_double() < rt.p[s.type];
            if (!rt.absorbing[s.type]) s.type = rt.advance(s.type, s.rng);
        }
        if (right) {
            ++s.up;
            ++pos;
            if (pos > rec.max_site) {
                rec.max_site = pos;
                if (cfg.record_site_summary) rec.first_hits.push_back(rec.steps + 1);
            }
        } else {
            ++s.left;
            --pos;
            if (pos < rec.min_site) rec.min_site = pos;
        }
        ++rec.steps;

        if (!right && pos == 0) {
            rec.returns.push_back(rec.steps);
        }
        if (ti < cfg.targets.size() && pos == cfg.targets[ti]) {
            WalkHit hit;
            hit.site = pos;
            hit.time = rec.steps;
            hit.min_site = rec.min_site;
            if (cfg.record_hit_profiles) {
                hit.left_counts.reserve(static_cast<size_t>(pos - rec.min_site));
                for (int64_t x = rec.min_site; x < pos; ++x)
                    hit.left_counts.push_back(sites.at(x).left);
            }
            rec.hits.push_back(std::move(hit));
            ++ti;
        }
        if (cfg.record_stride && rec.steps % cfg.record_stride == 0) rec.positions.push_back(pos);

        if (has_goal && ti >= cfg.targets.size() &&
            (cfg.track_excursions == 0 ||
             rec.returns.size() >= static_cast<size_t>(cfg.track_excursions)))
            break;
    }

    rec.horizon_hit = rec.steps >= cfg.horizon;
    rec.final_position = pos;
    if (cfg.track_excursions > 0) {
        rec.up_crossings.reserve(static_cast<size_t>(rec.max_site) + 1);
        for (int64_t x = 0; x <= rec.max_site; ++x) rec.up_crossings.push_back(sites.at(x).up);
    }
    if (cfg.record_site_summary) {
        rec.left_at_end.reserve(static_cast<size_t>(rec.max_site) + 1);
        for (int64_t x = 0; x <= rec.max_site; ++x) rec.left_at_end.push_back(sites.at(x).left);
    }
    return rec;
}

BlpRecord simulate_forward_blp(const CookieSystem& sys, const BlpConfig& cfg, uint64_t seed) {
    const StackRuntime rt = StackRuntime::make(sys);
    const uint64_t gen_seed = seed ^ domain::blp_forward;
    const auto path32 = static_cast<uint32_t>(cfg.path_index);

    BlpRecord rec;
    uint64_t u = cfg.y0;
    rec.total_progeny = u;
    rec.lifetime = cfg.horizon;
    rec.censored = true;
    for (uint64_t i = 1; i <= cfg.horizon; ++i) {
        Rng g(gen_seed, stream_pair(path32, static_cast<uint32_t>(i)));
        u = successes_before_failures(rt, g, u, cfg.fast_path);
        rec.total_progeny += u;
        if (cfg.record_values) rec.values.push_back(u);
        if (u == 0) {
            rec.lifetime = i;
            rec.censored = false;
            break;
        }
        if (cfg.value_cap && u > cfg.value_cap) {
            rec.lifetime = i;
            break;
        }
    }
    rec.final_value = u;
    return rec;
}

BlpRecord simulate_backward_blp(const CookieSystem& sys, const BlpConfig& cfg, uint64_t seed) {
    const StackRuntime rt = StackRuntime::make(sys);
    const uint64_t gen_seed = seed ^ domain::blp_backward;
    const auto path32 = static_cast<uint32_t>(cfg.path_index);

    BlpRecord rec;
    uint64_t v = cfg.y0;
    rec.total_progeny = v;
    rec.lifetime = cfg.horizon;
    rec.censored = true;
    bool zero_seen = false;
    uint64_t last_zero = 0, cycle_progeny = 0;
    for (uint64_t i = 1; i <= cfg.horizon; ++i) {
        Rng g(gen_seed, stream_pair(path32, static_cast<uint32_t>(i)));
        v = failures_before_successes(rt, g, v + 1, cfg.fast_path);
        if (cfg.record_values) rec.values.push_back(v);
        if (!zero_seen) rec.total_progeny += v;
        cycle_progeny += v;
        if (v == 0) {
            if (!zero_seen) {
                rec.lifetime = i;
                rec.censored = false;
                zero_seen = true;
            }
            if (cfg.n_regenerations > 0) {
                rec.regens.push_back({i - last_zero, cycle_progeny});
                if (rec.regens.size() >= static_cast<size_t>(cfg.n_regenerations)) break;
            }
            last_zero = i;
            cycle_progeny = 0;
            if (cfg.n_regenerations == 0 && !cfg.record_values) break;
        }
    }
    rec.final_value = v;
    return rec;
}

CoupledRecord simulate_coupled_blp(const CookieSystem& base, const Vector& p1, double eps,
                                   const CoupledConfig& cfg, uint64_t seed) {
    if (p1.size() != base.p.size()) fail(errc::dimension_mismatch, "p1 size");
    for (int i = 0; i < p1.size(); ++i) {
        if (p1(i) < base.p(i)) fail(errc::not_dominating, "p1 must dominate the base strengths");
        if (p1(i) <= 0.0 || p1(i) >= 1.0) fail(errc::ellipticity_violation, "p1 entries");
    }
    if (!(eps > 0.0) || eps > 1.0) fail(errc::bad_input, "eps must lie in (0,1]");

    const StackRuntime rt = StackRuntime::make(base);
    const uint64_t gen_seed = seed ^ domain::coupled;
    const auto path32 = static_cast<uint32_t>(cfg.path_index);
    const bool forward = cfg.mode == CoupledMode::forward;

    CoupledRecord rec;
    // "strong" is the pure-p1 process; in forward mode it dominates, in
    // backward mode it is dominated.
    uint64_t strong = cfg.y0, weak = cfg.y0;
    rec.strong.push_back(strong);
    rec.weak.push_back(weak);

    for (uint64_t i = 1; i <= cfg.horizon; ++i) {
        Rng g(gen_seed, stream_pair(path32, static_cast<uint32_t>(i)));
        const uint64_t gamma = g.geometric_count(eps);
        int s = rt.initial(g);

        // Forward: count successes until m failures. Backward: count failures
        // until m successes, with m = previous value + 1.
        const uint64_t m_strong = forward ? strong : strong + 1;
        const uint64_t m_weak = forward ? weak : weak + 1;
        uint64_t succ_s = 0, fail_s = 0, succ_w = 0, fail_w = 0;
        bool done_s = forward && m_strong == 0;
        bool done_w = forward && m_weak == 0;
        for (uint64_t j = 1; !(done_s && done_w); ++j) {
            const double u = g.next_double();
            if (!done_s) {
                if (u < p1(s)) {
                    ++succ_s;
                    if (!forward && succ_s == m_strong) done_s = true;
                } else {
                    ++fail_s;
                    if (forward && fail_s == m_strong) done_s = true;
                }
            }
            if (!done_w) {
                const double w = j <= gamma ? p1(s) : base.p(s);
                if (u < w) {
                    ++succ_w;
                    if (!forward && succ_w == m_weak) done_w = true;
                } else {
                    ++fail_w;
                    if (forward && fail_w == m_weak) done_w = true;
                }
            }
            if (!rt.absorbing[s]) s = rt.advance(s, g);
        }
        strong = forward ? succ_s : fail_s;
        weak = forward ? succ_w : fail_w;
        rec.strong.push_back(strong);
        rec.weak.push_back(weak);

        const bool ordered = forward ? strong >= weak : strong <= weak;
        if (!ordered) ++rec.violations;
        if (forward && strong == 0 && weak == 0) break;
        if (forward && cfg.value_cap && strong > cfg.value_cap) break;
    }
    return rec;
}

PathwiseReport verify_walk_forward_coupling(const CookieSystem& sys, int n_excursions,
                                            uint64_t paths, uint64_t horizon_steps,
                                            uint64_t seed) {
    if (n_excursions <= 0) fail(errc::bad_input, "need at least one excursion");
    const StackRuntime rt = StackRuntime::make(sys);
    const uint64_t env_seed = seed ^ domain::walk_env;

    PathwiseReport rep;
    rep.paths = paths;
    for (uint64_t path = 0; path < paths; ++path) {
        WalkConfig wc;
        wc.horizon = horizon_steps;
        wc.origin_always_right = true;
        wc.track_excursions = n_excursions;
        wc.path_index = path;
        const WalkRecord rec = simulate_walk(sys, wc, seed);

        const bool complete = rec.returns.size() >= static_cast<size_t>(n_excursions);
        if (complete) ++rep.gamma_completed;

        const auto n = static_cast<uint64_t>(n_excursions);
        const uint64_t e0 = rec.up_crossings.empty() ? 0 : rec.up_crossings[0];
        if (n < e0) ++rep.domination_violations;
        if (complete && e0 != n) ++rep.equality_violations;

        // Replay the forward process off the same site streams; generation i
        // re-reads site i's draw sequence from the start.
        uint64_t u = n;
        const auto path32 = static_cast<uint32_t>(path);
        for (int64_t i = 1; u > 0; ++i) {
            if (i > rec.max_site) {
                // Beyond the walk's range every up-crossing count is zero, so
                // domination is trivial; equality requires the process dead.
                if (complete && u > 0) ++rep.equality_violations;
                break;
            }
            Rng g(env_seed, stream_pair(path32, zigzag32(i)));
            u = successes_before_failures(rt, g, u, false);
            const uint64_t e_i = static_cast<size_t>(i) < rec.up_crossings.size()
                                     ? rec.up_crossings[static_cast<size_t>(i)]
                                     : 0;
            if (u < e_i) ++rep.domination_violations;
            if (complete && u != e_i) ++rep.equality_violations;
        }
    }
    return rep;
}

void verify_coupling(const CookieSystem& base, const Vector& p1, double eps, uint64_t paths,
                     const CoupledConfig& cfg_template, uint64_t seed) {
    for (uint64_t path = 0; path < paths; ++path) {
        CoupledConfig cfg = cfg_template;
        cfg.path_index = path;
        const CoupledRecord rec = simulate_coupled_blp(base, p1, eps, cfg, seed);
        if (rec.violations > 0)
            fail(errc::coupling_violation,
                 "domination failed on path " + std::to_string(path) + " (" +
                     std::to_string(rec.violations) + " generations)");
    }
}

}  // namespace erw
