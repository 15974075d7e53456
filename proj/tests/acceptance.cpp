// Acceptance gate: every release criterion as one pass/fail line.
//
// Usage: acceptance <1..12|all>.  Each criterion prints
//   [PASS|FAIL] NN <label>: <key numbers> (<elapsed> s)
// and the process exits nonzero if any selected criterion fails.  Seeds are
// fixed so every run reproduces the same numbers.

#include <erw/env_model.hpp>
#include <erw/errors.hpp>
#include <erw/parameters.hpp>
#include <erw/regimes.hpp>
#include <erw/rng.hpp>
#include <erw/simulators.hpp>
#include <erw/statistics.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

namespace {

constexpr uint64_t kSeed = 1729;

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

double lin(double lo, double hi, int count, int i) {
    return lo + (hi - lo) * i / (count - 1);
}

// 1. Geometric stacks: delta and delta_tilde against the closed form
//    (2 p1 - 1) / alpha across a 20x20 parameter grid.
Verdict geometric_closed_form() {
    double worst = 0.0;
    for (int ia = 0; ia < 20; ++ia) {
        const double alpha = lin(0.05, 1.0, 20, ia);
        for (int ip = 0; ip < 20; ++ip) {
            const double p1 = lin(0.505, 0.95, 20, ip);
            const auto dp = erw::derived_params(erw::geometric_system(alpha, p1));
            const double want = (2.0 * p1 - 1.0) / alpha;
            worst = std::max(worst, std::abs(dp.delta - want));
            worst = std::max(worst, std::abs(dp.delta_tilde + want));
        }
    }
    return {worst <= 1e-9, fmt("max |delta -/+ (2p-1)/a| = %.2e over 400 points, tol 1e-9", worst)};
}

// 2. Two-type stacks: delta against an independently derived rational form on
//    a 50x50 grid, the alpha=1 specialization, and the low-alpha section that
//    rises above 4 and then falls again.
Verdict two_type_closed_form() {
    const auto oracle = [](double a, double p) {
        const double num = (2.0 * p - 1.0) * ((2.0 * a - 1.0) * p - a);
        const double den = 4.0 * (2.0 * a - 1.0) * (p - 1.0) * p + a - 1.0;
        return num / den;
    };
    double worst = 0.0;
    std::vector<double> low_alpha_section;
    for (int ia = 0; ia < 50; ++ia) {
        // geometric ladder 0.002 .. 1.0 with exact endpoints
        const double alpha = ia == 49 ? 1.0 : 0.002 * std::pow(500.0, ia / 49.0);
        for (int ip = 0; ip < 50; ++ip) {
            const double p = lin(0.505, 0.945, 50, ip);
            const auto dp = erw::derived_params(erw::two_type_system(alpha, p));
            worst = std::max(worst, std::abs(dp.delta - oracle(alpha, p)));
            if (ia == 0) low_alpha_section.push_back(dp.delta);
            if (ia == 49)
                worst = std::max(worst, std::abs(dp.delta - (2.0 * p - 1.0) / (4.0 * p)));
        }
    }
    const auto peak =
        std::max_element(low_alpha_section.begin(), low_alpha_section.end());
    const bool bump = peak != low_alpha_section.begin() &&
                      peak != low_alpha_section.end() - 1 && *peak > 4.0 &&
                      low_alpha_section.back() < *peak;
    return {worst <= 1e-9 && bump,
            fmt("max oracle gap %.2e (tol 1e-9), alpha=0.002 peak %.2f at interior p (bump %s)",
                worst, *peak, bump ? "yes" : "no")};
}

// 3. Identity suite on randomized critical systems of mixed size.
Verdict identity_residuals() {
    erw::Rng rng(kSeed, 0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const auto sys = erw::random_critical_system(2 + i % 5, rng);
        const auto rep = erw::identity_suite(sys, 1e-9);
        for (const auto& item : rep.items)
            if (item.applicable) worst = std::max(worst, item.residual);
        if (!rep.pass)
            return {false, fmt("system %d failed, worst residual %.2e", i, worst)};
    }
    return {worst <= 1e-9, fmt("worst residual %.2e over 100 systems, tol 1e-9", worst)};
}

// 4. Two-strength coupling: the 2N-state pipeline and the resolvent series
//    give the same delta_hat; eps=1 collapses to the base system; delta_hat
//    decreases strictly as eps does not, i.e. grows as coupling weakens.
Verdict coupled_delta_routes() {
    erw::Rng rng(kSeed, 1);
    const double eps_grid[] = {0.1, 0.25, 0.5, 0.75, 0.9, 1.0};
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const int n = 2 + i % 5;
        const auto base = erw::random_critical_system(n, rng);
        erw::Vector p1 = base.p;
        for (int j = 0; j < n; ++j)
            p1(j) += (0.05 + 0.45 * rng.next_double()) * (1.0 - p1(j));
        double prev = 0.0;
        bool first = true;
        for (const double eps : eps_grid) {
            const auto cs = erw::coupled_delta(base, p1, eps);
            worst = std::max(worst, std::abs(cs.delta_hat - cs.delta_hat_series));
            if (!first && cs.delta_hat_series >= prev)
                return {false, fmt("delta_hat not strictly decreasing at eps=%.2f", eps)};
            prev = cs.delta_hat_series;
            first = false;
        }
        const auto at_one = erw::coupled_delta(base, p1, 1.0);
        const double base_delta = erw::derived_params(base).delta;
        if (at_one.delta_hat_series != base_delta)
            return {false, "eps=1 series route is not exactly the base delta"};
        if (std::abs(at_one.delta_hat - base_delta) > 1e-12)
            return {false, fmt("eps=1 pipeline gap %.2e", std::abs(at_one.delta_hat - base_delta))};
    }
    return {worst <= 1e-8, fmt("max route gap %.2e over 20 systems x 6 eps, tol 1e-8", worst)};
}

// 5. Pathwise checks: the hitting-time identity T = site + 2 * (left-edge
//    crossings) holds exactly; shared-coin coupling dominations hold in both
//    process directions; walk up-crossing counts dominate the replayed
//    forward process with equality along completed excursions.
Verdict pathwise_identities() {
    const auto fast = erw::geometric_system(0.1, 0.9);
    uint64_t hit_count = 0, violations = 0;
    for (uint64_t path = 0; path < 2100; ++path) {
        erw::WalkConfig wc;
        wc.horizon = 100000;
        wc.targets = {20, 40, 60, 80, 100};
        wc.record_hit_profiles = true;
        wc.path_index = path;
        const auto rec = erw::simulate_walk(fast, wc, kSeed);
        for (const auto& h : rec.hits) {
            ++hit_count;
            uint64_t left = 0;
            for (const uint64_t c : h.left_counts) left += c;
            if (h.time != static_cast<uint64_t>(h.site) + 2 * left) ++violations;
        }
    }
    if (hit_count < 10000 || violations > 0)
        return {false, fmt("hitting identity: %llu hits, %llu violations",
                           (unsigned long long)hit_count, (unsigned long long)violations)};

    const auto base = erw::geometric_system(0.2, 0.55);
    erw::Vector p1(2);
    p1 << 0.65, 0.55;
    erw::CoupledConfig cc;
    cc.y0 = 2;
    cc.horizon = 200;
    cc.mode = erw::CoupledMode::forward;
    cc.value_cap = 10000;
    erw::verify_coupling(base, p1, 0.5, 5000, cc, kSeed);  // throws on violation
    cc.mode = erw::CoupledMode::backward;
    cc.value_cap = 0;
    erw::verify_coupling(base, p1, 0.5, 5000, cc, kSeed);

    const auto rep = erw::verify_walk_forward_coupling(base, 3, 10000, 2000, kSeed);
    const bool ok = rep.domination_violations == 0 && rep.equality_violations == 0;
    return {ok, fmt("%llu exact hits; coupled 2x5000 paths clean; walk replay %llu paths, "
                    "%llu gamma done, %llu dom + %llu eq violations",
                    (unsigned long long)hit_count, (unsigned long long)rep.paths,
                    (unsigned long long)rep.gamma_completed,
                    (unsigned long long)rep.domination_violations,
                    (unsigned long long)rep.equality_violations)};
}

// 6. Distributional match between walk crossing profiles at a high level and
//    the backward process, compared through sum and max summaries.
Verdict profile_vs_backward() {
    const auto rep = erw::check_hitting_vs_backward(erw::geometric_system(0.1, 0.9), 200,
                                                    10000, 100000, kSeed);
    const bool ok = rep.ks_sum < 0.02 && rep.ks_max < 0.02 && rep.missed_fraction <= 0.001;
    return {ok, fmt("KS sum %.4f, KS max %.4f (gates 0.02), missed %.4f", rep.ks_sum,
                    rep.ks_max, rep.missed_fraction)};
}

// 7. Generation-n moment asymptotics for both process directions: means match
//    the drift prediction within 3 se, variance slopes match nu.
Verdict moment_asymptotics() {
    const auto sys = erw::two_type_system(0.3, 0.7);
    const auto dp = erw::derived_params(sys);
    double worst_z = 0.0;
    for (const uint64_t n : {uint64_t{50}, uint64_t{100}, uint64_t{200}}) {
        for (const bool forward : {true, false}) {
            const auto mc = erw::blp_increment_moments(sys, dp, forward, n, 100000, kSeed);
            const double nd = static_cast<double>(n);
            const double scale = static_cast<double>(mc.m_eff) / nd;
            const bool mean_ok = std::abs(mc.mean - mc.mean_pred) <= 3.0 * mc.mean_se;
            const bool var_ok = std::abs(mc.var_per - mc.var_pred) * scale <=
                                std::max(3.0 * mc.var_se * scale, 5.0 / nd);
            worst_z = std::max(worst_z, std::abs(mc.mean - mc.mean_pred) / mc.mean_se);
            if (!mean_ok || !var_ok)
                return {false, fmt("n=%llu %s: mean %.4f vs %.4f (se %.4f), var/n %.4f vs %.4f",
                                   (unsigned long long)n, forward ? "fwd" : "bwd", mc.mean,
                                   mc.mean_pred, mc.mean_se, mc.var_per, mc.var_pred)};
        }
    }
    return {true, fmt("6 direction/size combinations within gates, worst mean z = %.2f", worst_z)};
}

// 8. Critical-ish tail exponents at delta = 1/2: backward lifetime ~ 1/2,
//    backward progeny ~ 1/4, forward lifetime ~ 1/2, each within 0.15.
Verdict tail_exponents() {
    const auto sys = erw::geometric_system(0.2, 0.55);
    erw::BlpConfig bc;
    bc.horizon = 100000;
    bc.y0 = 0;
    const auto vrec = erw::sample_backward(sys, bc, 100000, kSeed);
    bc.y0 = 1;
    const auto urec = erw::sample_forward(sys, bc, 100000, kSeed);
    const auto vlife = erw::tail_exponent_regression(erw::lifetimes_of(vrec), 10, 10000, 8, 200, kSeed);
    const auto vprog = erw::tail_exponent_regression(erw::progenies_of(vrec), 30, 100000, 8, 200, kSeed);
    const auto ulife = erw::tail_exponent_regression(erw::lifetimes_of(urec), 10, 10000, 8, 200, kSeed);
    const bool ok = std::abs(vlife.exponent - 0.5) <= 0.15 &&
                    std::abs(vprog.exponent - 0.25) <= 0.15 &&
                    std::abs(ulife.exponent - 0.5) <= 0.15;
    return {ok, fmt("exponents %.3f / %.3f / %.3f vs 0.5 / 0.25 / 0.5, tol 0.15",
                    vlife.exponent, vprog.exponent, ulife.exponent)};
}

// 9. Survival dichotomy for the forward process across delta = 1: extinction
//    dominates below, survival is routine above.  Paths stopped early by the
//    value cap are counted as survivors, same as horizon survivors.
Verdict survival_dichotomy() {
    const auto censored_fraction = [](const std::vector<erw::BlpRecord>& recs) {
        uint64_t alive = 0;
        for (const auto& r : recs) alive += r.censored ? 1 : 0;
        return static_cast<double>(alive) / recs.size();
    };
    erw::BlpConfig bc;
    bc.y0 = 10;
    bc.horizon = 1000000;
    const auto low = erw::sample_forward(erw::geometric_system(0.2, 0.55), bc, 10000, kSeed);
    bc.value_cap = 30000;  // supercritical survivors grow linearly; stop them early
    const auto high = erw::sample_forward(erw::geometric_system(0.4, 0.8), bc, 10000, kSeed);
    const double s_low = censored_fraction(low), s_high = censored_fraction(high);
    return {s_low < 0.01 && s_high > 0.05,
            fmt("survival at 1e6: %.4f (delta 0.5, gate <0.01), %.4f (delta 1.5, gate >0.05)",
                s_low, s_high)};
}

// 10. Speed: direct long-run estimate agrees with the regeneration-ratio
//     estimate in the ballistic regime, and vanishes in the zero-speed regime.
Verdict speed_estimates() {
    const auto fast = erw::speed_estimates(erw::geometric_system(0.1, 0.9), 1000000, 32, kSeed);
    const double rel = std::abs(fast.v_direct - fast.v_regen) / std::abs(fast.v_direct);
    if (!(fast.v_direct > 0.0) || rel > 0.05)
        return {false, fmt("ballistic: v_direct %.5f vs v_regen %.5f, rel gap %.3f > 0.05",
                           fast.v_direct, fast.v_regen, rel)};
    const auto slow =
        erw::speed_estimates(erw::geometric_system(0.4, 0.8), 2500000000ULL, 8, kSeed);
    return {std::abs(slow.v_direct) < 0.01,
            fmt("ballistic rel gap %.3f (gate 0.05); zero-speed |v| = %.5f (gate 0.01)", rel,
                std::abs(slow.v_direct))};
}

// 11. Hitting-time limit laws: Gaussian in the fast regime and off
//     criticality, one-sided stable for delta in (1,2).
Verdict limit_laws() {
    erw::LimitLawConfig cfg;
    cfg.n = 10000;
    cfg.replicas = 2000;
    const auto fast = erw::limit_law_check(erw::geometric_system(0.1, 0.9), cfg, kSeed);
    if (fast.regime != erw::LimitCase::gaussian_above_four || fast.ks >= 0.05)
        return {false, fmt("fast regime %s, KS %.4f (gate 0.05)",
                           erw::limit_case_name(fast.regime), fast.ks)};
    const auto off = erw::limit_law_check(erw::periodic_system({0.6}), cfg, kSeed);
    if (off.regime != erw::LimitCase::non_critical_gaussian || off.ks >= 0.05)
        return {false, fmt("off-critical regime %s, KS %.4f (gate 0.05)",
                           erw::limit_case_name(off.regime), off.ks)};
    cfg.n = 4000;
    cfg.replicas = 1600;
    const auto stable = erw::limit_law_check(erw::geometric_system(0.4, 0.8), cfg, kSeed);
    const bool ok = stable.regime == erw::LimitCase::stable_one_two && stable.ks < 0.07;
    return {ok, fmt("KS %.4f / %.4f (Gaussian, gates 0.05), %.4f (stable 3/2, gate 0.07)",
                    fast.ks, off.ks, stable.ks)};
}

// 12. Excursion-based delta estimate 2 rho / nu recovers the closed form
//     within 3 se on instances spanning all stack families.
Verdict excursion_estimates() {
    struct Instance {
        const char* label;
        erw::CookieSystem sys;
        uint64_t paths;
    };
    const Instance instances[] = {
        {"geo(0.5,0.75)", erw::geometric_system(0.5, 0.75), 300000},
        {"geo(0.1,0.9)", erw::geometric_system(0.1, 0.9), 300000},
        {"bstack", erw::bounded_stack_system(0.6, 0.8, 0.7, 0.3, 0.45), 300000},
        {"twotype(1,0.75)", erw::two_type_system(1.0, 0.75), 100000},
        {"twotype(0.3,0.6)", erw::two_type_system(0.3, 0.6), 100000},
    };
    std::string detail;
    double worst_z = 0.0;
    for (const auto& inst : instances) {
        const auto dp = erw::derived_params(inst.sys);
        const auto rep = erw::excursion_delta(inst.sys, 2000, inst.paths, kSeed);
        const double z = std::abs(rep.delta_hat - dp.delta) / rep.se;
        worst_z = std::max(worst_z, z);
        if (z > 3.0)
            return {false, fmt("%s: delta_hat %.4f vs %.4f, z = %.2f", inst.label,
                               rep.delta_hat, dp.delta, z)};
    }
    return {true, fmt("5 instances within 3 se of the closed form, worst z = %.2f", worst_z)};
}

struct Criterion {
    int id;
    const char* label;
    Verdict (*run)();
};

const Criterion kCriteria[] = {
    {1, "geometric stack closed form", geometric_closed_form},
    {2, "two-type stack closed form", two_type_closed_form},
    {3, "identity suite residuals", identity_residuals},
    {4, "two-strength delta routes", coupled_delta_routes},
    {5, "pathwise identities and couplings", pathwise_identities},
    {6, "crossing profile vs backward process", profile_vs_backward},
    {7, "moment asymptotics", moment_asymptotics},
    {8, "critical tail exponents", tail_exponents},
    {9, "survival dichotomy", survival_dichotomy},
    {10, "speed cross-validation", speed_estimates},
    {11, "hitting-time limit laws", limit_laws},
    {12, "excursion delta estimates", excursion_estimates},
};

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::fprintf(stderr, "usage: %s <1..12|all>\n", argv[0]);
        return 2;
    }
    const bool all = std::strcmp(argv[1], "all") == 0;
    const int want = all ? 0 : std::atoi(argv[1]);
    if (!all && (want < 1 || want > 12)) {
        std::fprintf(stderr, "usage: %s <1..12|all>\n", argv[0]);
        return 2;
    }
    bool ok = true;
    for (const auto& c : kCriteria) {
        if (!all && c.id != want) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, fmt("exception: %s", e.what())};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] %02d %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", c.id, c.label,
                    v.detail.c_str(), secs);
        std::fflush(stdout);
        ok = ok && v.pass;
    }
    return ok ? 0 : 1;
}
