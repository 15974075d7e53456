// Estimators and distribution checks layered over the exact simulators:
// tail exponents, increment moments, speeds, excursion ratios, stable
// reference sampling, and the hitting-time limit laws.

#include "erw/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "erw/errors.hpp"
#include "erw/parallel.hpp"

namespace erw {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_against_normal(std::vector<double> sample) {
    if (sample.empty()) fail(errc::bad_input, "empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (size_t i = 0; i < sample.size(); ++i) {
        const double f = normal_cdf(sample[i]);
        d = std::max(d, std::max(f - static_cast<double>(i) / n,
                                 static_cast<double>(i + 1) / n - f));
    }
    return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) fail(errc::bad_input, "empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= v) ++i;
        while (j < b.size() && b[j] <= v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double ks_two_sample_threshold(size_t n, size_t m, double alpha) {
    if (n == 0 || m == 0 || alpha <= 0.0 || alpha >= 1.0) fail(errc::bad_input, "ks threshold");
    const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
    const double nn = static_cast<double>(n), mm = static_cast<double>(m);
    return c * std::sqrt((nn + mm) / (nn * mm));
}

std::vector<BlpRecord> sample_forward(const CookieSystem& sys, const BlpConfig& base,
                                      uint64_t paths, uint64_t seed, int threads) {
    std::vector<BlpRecord> out(paths);
    parallel_paths(paths, threads, [&](uint64_t i) {
        BlpConfig cfg = base;
        cfg.path_index = i;
        out[i] = simulate_forward_blp(sys, cfg, seed);
    });
    return out;
}

std::vector<BlpRecord> sample_backward(const CookieSystem& sys, const BlpConfig& base,
                                       uint64_t paths, uint64_t seed, int threads) {
    std::vector<BlpRecord> out(paths);
    parallel_paths(paths, threads, [&](uint64_t i) {
        BlpConfig cfg = base;
        cfg.path_index = i;
        out[i] = simulate_backward_blp(sys, cfg, seed);
    });
    return out;
}

double survival_fraction(const std::vector<BlpRecord>& recs, uint64_t n) {
    if (recs.empty()) fail(errc::bad_input, "empty sample");
    uint64_t beyond = 0;
    for (const auto& r : recs) beyond += r.lifetime > n ? 1 : 0;
    return static_cast<double>(beyond) / static_cast<double>(recs.size());
}

TailSample lifetimes_of(const std::vector<BlpRecord>& recs) {
    TailSample s;
    s.values.reserve(recs.size());
    s.censored.reserve(recs.size());
    for (const auto& r : recs) {
        s.values.push_back(static_cast<double>(r.lifetime));
        s.censored.push_back(r.censored ? 1 : 0);
    }
    return s;
}

TailSample progenies_of(const std::vector<BlpRecord>& recs) {
    TailSample s;
    s.values.reserve(recs.size());
    s.censored.reserve(recs.size());
    for (const auto& r : recs) {
        s.values.push_back(static_cast<double>(r.total_progeny));
        s.censored.push_back(r.censored ? 1 : 0);
    }
    return s;
}

namespace {

double quantile_sorted(const std::vector<double>& s, double q) {
    const double pos = q * static_cast<double>(s.size() - 1);
    const auto lo = static_cast<size_t>(pos);
    const size_t hi = std::min(lo + 1, s.size() - 1);
    const double w = pos - static_cast<double>(lo);
    return s[lo] * (1.0 - w) + s[hi] * w;
}

double iqr_of(std::vector<double> s) {
    std::sort(s.begin(), s.end());
    return quantile_sorted(s, 0.75) - quantile_sorted(s, 0.25);
}

double median_of(std::vector<double> s) {
    std::sort(s.begin(), s.end());
    return quantile_sorted(s, 0.5);
}

// Slope of y on x by least squares; requires at least two points.
bool ols_slope(const std::vector<double>& x, const std::vector<double>& y, double* slope) {
    const size_t k = x.size();
    if (k < 2) return false;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < k; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double n = static_cast<double>(k);
    const double den = sxx - sx * sx / n;
    if (den <= 0.0) return false;
    *slope = (sxy - sx * sy / n) / den;
    return true;
}

}  // namespace

TailEstimate tail_exponent_regression(const TailSample& sample, double window_lo,
                                      double window_hi, int n_points, int n_bootstrap,
                                      uint64_t seed) {
    const size_t n = sample.values.size();
    if (n == 0) fail(errc::bad_input, "empty sample");
    if (!(window_lo > 0.0) || !(window_hi > window_lo)) fail(errc::bad_input, "tail window");
    if (n_points < 4) fail(errc::bad_input, "need at least four grid points");

    std::vector<double> grid(n_points);
    const double ratio = window_hi / window_lo;
    for (int j = 0; j < n_points; ++j)
        grid[j] = window_lo * std::pow(ratio, static_cast<double>(j) / (n_points - 1));

    // A censored value is a lower bound: it certifies "beyond t" only for t
    // strictly below it; keep the window under any censoring horizon. Values
    // are binned by the grid so bootstrap replicates resample bin counts only.
    std::vector<uint64_t> bins(static_cast<size_t>(n_points) + 1, 0);
    for (size_t i = 0; i < n; ++i) {
        const double v = sample.values[i];
        size_t b = 0;
        while (b < static_cast<size_t>(n_points) && v > grid[b]) ++b;
        ++bins[b];
    }

    auto slope_from_bins = [&](const std::vector<uint64_t>& bb, double* out) {
        std::vector<double> xs, ys;
        // beyond grid[j] = all values with bin index > j
        std::vector<uint64_t> beyond_j(n_points, 0);
        uint64_t suffix = 0;
        for (int j = n_points; j >= 1; --j) {
            suffix += bb[static_cast<size_t>(j)];
            beyond_j[static_cast<size_t>(j - 1)] = suffix;
        }
        for (int j = 0; j < n_points; ++j) {
            if (beyond_j[static_cast<size_t>(j)] == 0) continue;
            xs.push_back(std::log(grid[static_cast<size_t>(j)]));
            ys.push_back(std::log(static_cast<double>(beyond_j[static_cast<size_t>(j)]) /
                                  static_cast<double>(n)));
        }
        if (xs.size() < 4) return false;
        return ols_slope(xs, ys, out);
    };

    double slope = 0.0;
    if (!slope_from_bins(bins, &slope))
        fail(errc::window_too_narrow, "fewer than four grid points carry mass");

    // Bootstrap over bin counts (categorical resampling).
    std::vector<double> cum(bins.size());
    double acc = 0.0;
    for (size_t b = 0; b < bins.size(); ++b) {
        acc += static_cast<double>(bins[b]) / static_cast<double>(n);
        cum[b] = acc;
    }
    Rng g(seed ^ domain::bootstrap, 0);
    std::vector<double> slopes;
    slopes.reserve(static_cast<size_t>(n_bootstrap));
    std::vector<uint64_t> rb(bins.size());
    for (int it = 0; it < n_bootstrap; ++it) {
        std::fill(rb.begin(), rb.end(), 0);
        for (size_t i = 0; i < n; ++i) {
            const double u = g.next_double();
            size_t b = 0;
            while (b + 1 < cum.size() && u >= cum[b]) ++b;
            ++rb[b];
        }
        double s2 = 0.0;
        if (slope_from_bins(rb, &s2)) slopes.push_back(s2);
    }
    double se = 0.0;
    if (slopes.size() >= 2) {
        const double m = std::accumulate(slopes.begin(), slopes.end(), 0.0) /
                         static_cast<double>(slopes.size());
        double v = 0.0;
        for (double s2 : slopes) v += (s2 - m) * (s2 - m);
        se = std::sqrt(v / static_cast<double>(slopes.size() - 1));
    }

    TailEstimate est;
    est.exponent = -slope;
    est.stderr_ = se;
    est.method = "survival-regression";
    est.window_lo = window_lo;
    est.window_hi = window_hi;
    est.n_samples = n;
    est.n_censored = static_cast<size_t>(
        std::count(sample.censored.begin(), sample.censored.end(), uint8_t{1}));
    return est;
}

TailEstimate tail_exponent_hill(const TailSample& sample, double threshold, int n_bootstrap,
                                uint64_t seed) {
    const size_t n = sample.values.size();
    if (n == 0) fail(errc::bad_input, "empty sample");
    if (!(threshold > 0.0)) fail(errc::bad_input, "threshold must be positive");

    auto hill = [&](const std::vector<double>& vals, const std::vector<uint8_t>& cens,
                    double* out) {
        double sum = 0.0;
        size_t k = 0, censored_exceed = 0;
        for (size_t i = 0; i < vals.size(); ++i) {
            if (vals[i] <= threshold) continue;
            if (cens[i]) {
                ++censored_exceed;
                continue;
            }
            sum += std::log(vals[i] / threshold);
            ++k;
        }
        if (k == 0 || sum <= 0.0) return censored_exceed;
        *out = static_cast<double>(k) / sum;
        return size_t{0};
    };

    double alpha = 0.0;
    {
        const size_t censored_exceed = hill(sample.values, sample.censored, &alpha);
        if (alpha == 0.0) {
            if (censored_exceed > 0)
                fail(errc::all_censored, "every exceedance is horizon-censored");
            fail(errc::window_too_narrow, "no exceedances over the threshold");
        }
    }

    Rng g(seed ^ domain::bootstrap, 1);
    std::vector<double> reps;
    reps.reserve(static_cast<size_t>(n_bootstrap));
    std::vector<double> rv(n);
    std::vector<uint8_t> rc(n);
    for (int it = 0; it < n_bootstrap; ++it) {
        for (size_t i = 0; i < n; ++i) {
            const auto j = static_cast<size_t>(g.below(n));
            rv[i] = sample.values[j];
            rc[i] = sample.censored[j];
        }
        double a = 0.0;
        hill(rv, rc, &a);
        if (a > 0.0) reps.push_back(a);
    }
    double se = 0.0;
    if (reps.size() >= 2) {
        const double m =
            std::accumulate(reps.begin(), reps.end(), 0.0) / static_cast<double>(reps.size());
        double v = 0.0;
        for (double a : reps) v += (a - m) * (a - m);
        se = std::sqrt(v / static_cast<double>(reps.size() - 1));
    }

    TailEstimate est;
    est.exponent = alpha;
    est.stderr_ = se;
    est.method = "hill";
    est.window_lo = threshold;
    est.window_hi = 0.0;
    est.n_samples = n;
    est.n_censored = static_cast<size_t>(
        std::count(sample.censored.begin(), sample.censored.end(), uint8_t{1}));
    return est;
}

MomentCheck blp_increment_moments(const CookieSystem& sys, const DerivedParams& dp, bool forward,
                                  uint64_t n, uint64_t paths, uint64_t seed, int threads) {
    if (n == 0 || paths < 2) fail(errc::bad_input, "need n >= 1 and at least two paths");
    const StackRuntime rt = StackRuntime::make(sys);
    const uint64_t m_eff = forward ? n : n + 1;
    const uint64_t dom = forward ? domain::blp_forward : domain::blp_backward;

    std::vector<double> vals(paths);
    parallel_paths(paths, threads, [&](uint64_t i) {
        Rng g(seed ^ dom, stream_pair(static_cast<uint32_t>(i), 1));
        const uint64_t v = forward ? successes_before_failures(rt, g, m_eff, true)
                                   : failures_before_successes(rt, g, m_eff, true);
        vals[i] = static_cast<double>(v);
    });

    const double np = static_cast<double>(paths);
    const double mean = std::accumulate(vals.begin(), vals.end(), 0.0) / np;
    double m2 = 0.0, m4 = 0.0;
    for (double v : vals) {
        const double d = v - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    const double var = m2 / (np - 1.0);
    m4 /= np;
    const double var_of_var = std::max(0.0, (m4 - var * var) / np);

    MomentCheck mc;
    mc.n = n;
    mc.m_eff = m_eff;
    mc.paths = paths;
    mc.forward = forward;
    mc.mean = mean;
    mc.mean_se = std::sqrt(var / np);
    mc.var_per = var / static_cast<double>(m_eff);
    mc.var_se = std::sqrt(var_of_var) / static_cast<double>(m_eff);
    const double eta_r = forward ? sys.eta.dot(dp.r) : sys.eta.dot(dp.r_tilde);
    const double lam = forward ? dp.law.lambda : 1.0 / dp.law.lambda;
    mc.mean_pred = lam * static_cast<double>(m_eff) + eta_r;
    mc.var_pred = forward ? dp.nu : dp.nu_tilde;
    return mc;
}

SpeedReport speed_estimates(const CookieSystem& sys, uint64_t horizon, uint64_t paths,
                            uint64_t seed, int threads) {
    if (paths < 2) fail(errc::bad_input, "need at least two paths");
    struct PerPath {
        double v = 0.0;
        double pos_gap = 0.0, time_gap = 0.0;
        uint64_t regens = 0;
    };
    std::vector<PerPath> acc(paths);
    constexpr int64_t kEdgeMargin = 256;  // trims end-of-window false regen levels

    parallel_paths(paths, threads, [&](uint64_t i) {
        WalkConfig wc;
        wc.horizon = horizon;
        wc.record_site_summary = true;
        wc.path_index = i;
        const WalkRecord rec = simulate_walk(sys, wc, seed);
        PerPath pp;
        pp.v = rec.steps > 0
                   ? static_cast<double>(rec.final_position) / static_cast<double>(rec.steps)
                   : 0.0;
        int64_t first_level = -1, last_level = -1;
        uint64_t first_time = 0, last_time = 0;
        const int64_t hi = rec.max_site - kEdgeMargin;
        for (int64_t k = 1; k <= hi; ++k) {
            if (rec.left_at_end[static_cast<size_t>(k)] != 0) continue;
            ++pp.regens;
            const uint64_t t = rec.first_hits[static_cast<size_t>(k - 1)];
            if (first_level < 0) {
                first_level = k;
                first_time = t;
            }
            last_level = k;
            last_time = t;
        }
        if (first_level >= 0 && last_level > first_level) {
            pp.pos_gap = static_cast<double>(last_level - first_level);
            pp.time_gap = static_cast<double>(last_time - first_time);
        }
        acc[i] = pp;
    });

    SpeedReport rep;
    rep.paths = paths;
    rep.horizon = horizon;
    double sum = 0.0;
    for (const auto& pp : acc) sum += pp.v;
    rep.v_direct = sum / static_cast<double>(paths);
    double ss = 0.0;
    for (const auto& pp : acc) ss += (pp.v - rep.v_direct) * (pp.v - rep.v_direct);
    rep.v_direct_se = std::sqrt(ss / (static_cast<double>(paths) * (static_cast<double>(paths) - 1.0)));
    double pos = 0.0, time = 0.0;
    for (const auto& pp : acc) {
        pos += pp.pos_gap;
        time += pp.time_gap;
        rep.regen_count += pp.regens;
    }
    rep.v_regen = time > 0.0 ? pos / time : 0.0;
    return rep;
}

ExcursionDeltaReport excursion_delta(const CookieSystem& sys, uint64_t n, uint64_t paths,
                                     uint64_t seed, int threads) {
    if (n == 0 || paths < 16) fail(errc::bad_input, "need n >= 1 and enough paths");
    const StackRuntime rt = StackRuntime::make(sys);
    const StationaryLaw law = stationary_law(sys);

    std::vector<double> vals(paths);
    parallel_paths(paths, threads, [&](uint64_t i) {
        Rng g(seed ^ domain::blp_forward, stream_pair(static_cast<uint32_t>(i), 1));
        vals[i] = static_cast<double>(successes_before_failures(rt, g, n, true));
    });

    auto delta_of = [&](const std::vector<double>& v, double* out) {
        const double np = static_cast<double>(v.size());
        const double mean = std::accumulate(v.begin(), v.end(), 0.0) / np;
        double m2 = 0.0;
        for (double x : v) m2 += (x - mean) * (x - mean);
        const double var = m2 / (np - 1.0);
        if (var <= 0.0) return false;
        const double rho = mean - law.lambda * static_cast<double>(n);
        const double nu = var / static_cast<double>(n);
        *out = 2.0 * rho / nu;
        return true;
    };

    ExcursionDeltaReport rep;
    rep.n = n;
    rep.paths = paths;
    if (!delta_of(vals, &rep.delta_hat)) fail(errc::non_positive_variance, "flat sample");
    {
        const double np = static_cast<double>(paths);
        const double mean = std::accumulate(vals.begin(), vals.end(), 0.0) / np;
        double m2 = 0.0;
        for (double x : vals) m2 += (x - mean) * (x - mean);
        rep.rho_hat = mean - law.lambda * static_cast<double>(n);
        rep.nu_hat = m2 / (np - 1.0) / static_cast<double>(n);
    }

    Rng g(seed ^ domain::bootstrap, 2);
    std::vector<double> reps;
    reps.reserve(200);
    std::vector<double> rv(paths);
    for (int it = 0; it < 200; ++it) {
        for (uint64_t i = 0; i < paths; ++i) rv[i] = vals[g.below(paths)];
        double d = 0.0;
        if (delta_of(rv, &d)) reps.push_back(d);
    }
    if (reps.size() >= 2) {
        const double m =
            std::accumulate(reps.begin(), reps.end(), 0.0) / static_cast<double>(reps.size());
        double v = 0.0;
        for (double d : reps) v += (d - m) * (d - m);
        rep.se = std::sqrt(v / static_cast<double>(reps.size() - 1));
    }
    return rep;
}

std::vector<double> stable_standard_sample(double alpha, size_t count, uint64_t seed) {
    if (!(alpha > 0.0) || alpha >= 2.0) fail(errc::bad_alpha, "alpha must lie in (0,2)");
    const bool at_one = std::abs(alpha - 1.0) < 1e-9;
    const double half_pi = std::asin(1.0);

    std::vector<double> out(count);
    for (size_t i = 0; i < count; ++i) {
        Rng g(seed ^ domain::stable, i);
        const double v = (g.next_open() - 0.5) * 2.0 * half_pi;
        const double w = g.exponential();
        if (at_one) {
            const double a = half_pi + v;
            out[i] = (1.0 / half_pi) * (a * std::tan(v) - std::log((half_pi * w * std::cos(v)) / a));
        } else {
            const double t = std::tan(half_pi * alpha);
            const double b0 = std::atan(t) / alpha;
            const double s0 = std::pow(1.0 + t * t, 0.5 / alpha);
            out[i] = s0 * std::sin(alpha * (v + b0)) / std::pow(std::cos(v), 1.0 / alpha) *
                     std::pow(std::cos(v - alpha * (v + b0)) / w, (1.0 - alpha) / alpha);
        }
    }
    return out;
}

double stable_scale_apply(double alpha, double b, double x_standard) {
    if (std::abs(alpha - 1.0) < 1e-9) {
        const double half_pi = std::asin(1.0);
        return b * x_standard + (b / half_pi) * std::log(b);
    }
    return std::pow(b, 1.0 / alpha) * x_standard;
}

double stable_cf_gap(const std::vector<double>& sample, double alpha, double b) {
    if (sample.empty()) fail(errc::bad_input, "empty sample");
    if (!(alpha > 0.0) || alpha >= 2.0) fail(errc::bad_alpha, "alpha must lie in (0,2)");
    const bool at_one = std::abs(alpha - 1.0) < 1e-9;
    const double half_pi = std::asin(1.0);
    const double grid[] = {-2.0, -1.0, -0.5, -0.1, 0.1, 0.5, 1.0, 2.0};

    double worst = 0.0;
    for (double u : grid) {
        double cr = 0.0, ci = 0.0;
        for (double x : sample) {
            cr += std::cos(u * x);
            ci += std::sin(u * x);
        }
        cr /= static_cast<double>(sample.size());
        ci /= static_cast<double>(sample.size());
        const double au = std::abs(u);
        const double sg = u < 0.0 ? -1.0 : 1.0;
        double re_log, im_log;
        if (at_one) {
            re_log = -b * au;
            im_log = -b * au * sg * std::log(au) / half_pi;
        } else {
            re_log = -b * std::pow(au, alpha);
            im_log = b * std::pow(au, alpha) * std::tan(half_pi * alpha) * sg;
        }
        const double mr = std::exp(re_log) * std::cos(im_log);
        const double mi = std::exp(re_log) * std::sin(im_log);
        worst = std::max(worst, std::hypot(cr - mr, ci - mi));
    }
    return worst;
}

CenteringFns::CenteringFns(std::vector<double> w_samples, double r_bar, double xi)
    : sorted_w_(std::move(w_samples)), r_bar_(r_bar), xi_(xi) {
    if (sorted_w_.empty()) fail(errc::insufficient_pairs, "no duration samples");
    if (!(r_bar_ > 0.0)) fail(errc::bad_input, "r_bar must be positive");
    std::sort(sorted_w_.begin(), sorted_w_.end());
    prefix_mean_.resize(sorted_w_.size() + 1, 0.0);
    double acc = 0.0;
    for (size_t i = 0; i < sorted_w_.size(); ++i) {
        acc += sorted_w_[i];
        prefix_mean_[i + 1] = acc / static_cast<double>(sorted_w_.size());
    }
}

double CenteringFns::m_hat(double t) const {
    const auto it = std::upper_bound(sorted_w_.begin(), sorted_w_.end(), t);
    return prefix_mean_[static_cast<size_t>(it - sorted_w_.begin())];
}

double CenteringFns::d_hat(double t) const { return xi_ + (2.0 / r_bar_) * m_hat(t / r_bar_); }

double CenteringFns::gamma_hat(double t) const {
    if (!(t > 0.0)) fail(errc::bad_input, "need t > 0");
    auto val = [&](double s) { return s * d_hat(s); };
    double hi = 1.0;
    int guard = 0;
    while (val(hi) < t) {
        hi *= 2.0;
        if (++guard > 500) fail(errc::bad_input, "centering never reaches the target");
    }
    double lo = hi > 1.0 ? hi / 2.0 : 0.0;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (val(mid) >= t) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

namespace {

struct HitSample {
    std::vector<double> values;
    uint64_t censored = 0;
};

HitSample sample_hitting_times(const CookieSystem& sys, uint64_t level, uint64_t replicas,
                               uint64_t horizon_cap, uint64_t seed, int threads,
                               uint64_t path_offset = 0) {
    HitSample hs;
    hs.values.resize(replicas);
    std::vector<uint8_t> cens(replicas, 0);
    parallel_paths(replicas, threads, [&](uint64_t i) {
        WalkConfig wc;
        wc.horizon = horizon_cap;
        wc.targets = {static_cast<int64_t>(level)};
        wc.path_index = path_offset + i;
        const WalkRecord rec = simulate_walk(sys, wc, seed);
        if (rec.hits.empty()) {
            hs.values[i] = static_cast<double>(rec.steps);
            cens[i] = 1;
        } else {
            hs.values[i] = static_cast<double>(rec.hits[0].time);
        }
    });
    hs.censored = static_cast<uint64_t>(std::count(cens.begin(), cens.end(), uint8_t{1}));
    return hs;
}

}  // namespace

LimitLawReport limit_law_check(const CookieSystem& sys, const LimitLawConfig& cfg, uint64_t seed) {
    if (cfg.n == 0 || cfg.replicas < 16) fail(errc::bad_input, "need a level and enough replicas");
    const DerivedParams dp = derived_params(sys);
    const RegimeReport reg = classify(sys);
    if (reg.mirrored)
        fail(errc::regime_mismatch, "walk moves left; the level is never reached");
    if (reg.limit_case == LimitCase::none_recurrent)
        fail(errc::regime_mismatch, "recurrent regime has no hitting-time scaling");

    LimitLawReport rep;
    rep.regime = reg.limit_case;
    rep.replicas = cfg.replicas;
    rep.n = cfg.n;

    HitSample hs =
        sample_hitting_times(sys, cfg.n, cfg.replicas, cfg.horizon_cap, seed, cfg.threads);
    rep.censored_fraction =
        static_cast<double>(hs.censored) / static_cast<double>(cfg.replicas);
    std::vector<double>& t = hs.values;
    const double nd = static_cast<double>(cfg.n);

    switch (reg.limit_case) {
        case LimitCase::non_critical_gaussian:
        case LimitCase::gaussian_above_four:
        case LimitCase::gaussian_log_at_four: {
            const double mean =
                std::accumulate(t.begin(), t.end(), 0.0) / static_cast<double>(t.size());
            double m2 = 0.0;
            for (double v : t) m2 += (v - mean) * (v - mean);
            const double sd = std::sqrt(m2 / (static_cast<double>(t.size()) - 1.0));
            if (!(sd > 0.0)) fail(errc::non_positive_variance, "flat hitting times");
            std::vector<double> z(t.size());
            for (size_t i = 0; i < t.size(); ++i) z[i] = (t[i] - mean) / sd;
            rep.ks = ks_against_normal(std::move(z));
            rep.center = mean;
            const double denom = reg.limit_case == LimitCase::gaussian_log_at_four
                                     ? std::sqrt(nd * std::log(nd))
                                     : std::sqrt(nd);
            rep.scale = sd / denom;
            break;
        }
        case LimitCase::stable_one_two:
        case LimitCase::stable_two_four: {
            const double alpha = dp.delta / 2.0;
            const double norm = std::pow(nd, 2.0 / dp.delta);
            double center = 0.0;
            if (reg.limit_case == LimitCase::stable_two_four)
                center = std::accumulate(t.begin(), t.end(), 0.0) / static_cast<double>(t.size());
            std::vector<double> y(t.size());
            for (size_t i = 0; i < t.size(); ++i) y[i] = (t[i] - center) / norm;
            const std::vector<double> ref =
                stable_standard_sample(alpha, cfg.reference_size, seed);
            const double iqr_ref = iqr_of(ref);
            const double iqr_y = iqr_of(y);
            if (!(iqr_ref > 0.0) || !(iqr_y > 0.0))
                fail(errc::non_positive_variance, "degenerate spread");
            const double b = std::pow(iqr_y / iqr_ref, alpha);
            const double s = std::pow(b, 1.0 / alpha);
            for (double& v : y) v /= s;
            rep.ks = ks_two_sample(y, ref);
            rep.scale = b;
            rep.center = center;
            break;
        }
        case LimitCase::stable_at_two: {
            // Pre-pass: regeneration durations from long walks feed the
            // centering sequence; the level-n center is n * d_hat(n).
            std::vector<double> w;
            double pos_gap_sum = 0.0;
            uint64_t gap_count = 0;
            const int pre_paths = 4;
            for (int jpath = 0; jpath < pre_paths; ++jpath) {
                WalkConfig wc;
                wc.horizon = cfg.horizon_cap;
                wc.record_site_summary = true;
                wc.path_index = cfg.replicas + static_cast<uint64_t>(jpath);
                const WalkRecord rec = simulate_walk(sys, wc, seed);
                int64_t prev_level = -1;
                uint64_t prev_time = 0;
                const int64_t hi = rec.max_site - 256;
                for (int64_t k = 1; k <= hi; ++k) {
                    if (rec.left_at_end[static_cast<size_t>(k)] != 0) continue;
                    const uint64_t tk = rec.first_hits[static_cast<size_t>(k - 1)];
                    if (prev_level >= 0) {
                        w.push_back(static_cast<double>(tk - prev_time));
                        pos_gap_sum += static_cast<double>(k - prev_level);
                        ++gap_count;
                    }
                    prev_level = k;
                    prev_time = tk;
                }
            }
            if (gap_count < 1000)
                fail(errc::insufficient_pairs, "too few regeneration gaps for centering");
            const double r_bar = pos_gap_sum / static_cast<double>(gap_count);
            const CenteringFns cf(std::move(w), r_bar, 0.0);
            const double center = nd * cf.d_hat(nd);
            std::vector<double> y(t.size());
            for (size_t i = 0; i < t.size(); ++i) y[i] = (t[i] - center) / nd;
            const std::vector<double> ref =
                stable_standard_sample(1.0, cfg.reference_size, seed);
            const double iqr_ref = iqr_of(ref);
            const double iqr_y = iqr_of(y);
            if (!(iqr_ref > 0.0) || !(iqr_y > 0.0))
                fail(errc::non_positive_variance, "degenerate spread");
            const double b = iqr_y / iqr_ref;
            for (double& v : y) v /= b;
            const double shift = median_of(y) - median_of(ref);
            for (double& v : y) v -= shift;
            rep.ks = ks_two_sample(y, ref);
            rep.scale = b;
            rep.center = center;
            rep.shift = shift;
            break;
        }
        case LimitCase::none_recurrent:
            fail(errc::regime_mismatch, "unreachable");
    }
    return rep;
}

HittingBackwardReport check_hitting_vs_backward(const CookieSystem& sys, int64_t level,
                                                uint64_t paths, uint64_t walk_horizon,
                                                uint64_t seed, int threads) {
    if (level <= 0 || paths < 16) fail(errc::bad_input, "need a positive level and enough paths");

    std::vector<double> sum_d(paths), max_d(paths);
    std::vector<uint8_t> missed(paths, 0);
    parallel_paths(paths, threads, [&](uint64_t i) {
        WalkConfig wc;
        wc.horizon = walk_horizon;
        wc.targets = {level};
        wc.record_hit_profiles = true;
        wc.path_index = i;
        const WalkRecord rec = simulate_walk(sys, wc, seed);
        if (rec.hits.empty()) {
            missed[i] = 1;
            return;
        }
        const WalkHit& hit = rec.hits[0];
        double s = 0.0, m = 0.0;
        for (int64_t x = 0; x < hit.site; ++x) {
            const auto idx = static_cast<size_t>(x - hit.min_site);
            const double d = static_cast<double>(hit.left_counts[idx]);
            s += d;
            m = std::max(m, d);
        }
        sum_d[i] = s;
        max_d[i] = m;
    });
    // Censored walks are dropped from the comparison; a material censored
    // fraction fails the check rather than biasing it silently.
    uint64_t kept = 0;
    for (uint64_t i = 0; i < paths; ++i) {
        if (missed[i]) continue;
        sum_d[kept] = sum_d[i];
        max_d[kept] = max_d[i];
        ++kept;
    }
    if (kept < 16) fail(errc::regime_mismatch, "level almost never reached within the horizon");
    sum_d.resize(kept);
    max_d.resize(kept);

    std::vector<double> sum_v(paths), max_v(paths);
    parallel_paths(paths, threads, [&](uint64_t i) {
        BlpConfig bc;
        bc.y0 = 0;
        bc.horizon = static_cast<uint64_t>(level);
        bc.record_values = true;
        bc.path_index = i;
        const BlpRecord rec = simulate_backward_blp(sys, bc, seed);
        double s = 0.0, m = 0.0;
        for (uint64_t v : rec.values) {
            s += static_cast<double>(v);
            m = std::max(m, static_cast<double>(v));
        }
        sum_v[i] = s;
        max_v[i] = m;
    });

    HittingBackwardReport rep;
    rep.paths = kept;
    rep.missed_fraction = static_cast<double>(paths - kept) / static_cast<double>(paths);
    rep.ks_sum = ks_two_sample(sum_d, sum_v);
    rep.ks_max = ks_two_sample(max_d, max_v);
    rep.threshold = ks_two_sample_threshold(kept, paths, 0.005);
    rep.pass = rep.ks_sum < rep.threshold && rep.ks_max < rep.threshold &&
               rep.missed_fraction <= 0.02;
    return rep;
}

}  // namespace erw
