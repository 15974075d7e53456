#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "erw/env_model.hpp"
#include "erw/parameters.hpp"
#include "erw/regimes.hpp"
#include "erw/simulators.hpp"

namespace erw {

// ---- distribution test helpers ----

double normal_cdf(double x);

// Kolmogorov-Smirnov statistic of a sample against the standard normal.
double ks_against_normal(std::vector<double> sample);

// Two-sample KS statistic; handles ties (integer-valued data included).
double ks_two_sample(std::vector<double> a, std::vector<double> b);

// Critical value c(alpha) * sqrt((n+m)/(n*m)).
double ks_two_sample_threshold(size_t n, size_t m, double alpha);

// ---- batched process sampling ----

std::vector<BlpRecord> sample_forward(const CookieSystem& sys, const BlpConfig& base,
                                      uint64_t paths, uint64_t seed, int threads = 1);
std::vector<BlpRecord> sample_backward(const CookieSystem& sys, const BlpConfig& base,
                                       uint64_t paths, uint64_t seed, int threads = 1);

// Fraction of records with lifetime strictly beyond n; horizon-censored
// records count as beyond whenever their horizon is at least n.
double survival_fraction(const std::vector<BlpRecord>& recs, uint64_t n);

// ---- tail exponent estimation ----

struct TailSample {
    std::vector<double> values;
    std::vector<uint8_t> censored;  // value is a lower bound
};

TailSample lifetimes_of(const std::vector<BlpRecord>& recs);
TailSample progenies_of(const std::vector<BlpRecord>& recs);

struct TailEstimate {
    double exponent = 0.0;  // kappa in P(X > t) ~ C t^{-kappa}
    double stderr_ = 0.0;   // bootstrap standard error
    std::string method;
    double window_lo = 0.0, window_hi = 0.0;
    size_t n_samples = 0, n_censored = 0;
};

// Least squares on log survival over a geometric grid in [window_lo, window_hi].
TailEstimate tail_exponent_regression(const TailSample& sample, double window_lo,
                                      double window_hi, int n_points, int n_bootstrap,
                                      uint64_t seed);

// Hill estimator over exceedances of the threshold (censored exceedances are
// dropped; keep the threshold well under any horizon).
TailEstimate tail_exponent_hill(const TailSample& sample, double threshold, int n_bootstrap,
                                uint64_t seed);

// ---- one-generation increment moments ----

struct MomentCheck {
    uint64_t n = 0;       // conditioned previous value
    uint64_t m_eff = 0;   // trial quota actually used (n forward, n+1 backward)
    uint64_t paths = 0;
    bool forward = true;
    double mean = 0.0, mean_se = 0.0, mean_pred = 0.0;
    double var_per = 0.0, var_se = 0.0, var_pred = 0.0;  // variance divided by m_eff
};

MomentCheck blp_increment_moments(const CookieSystem& sys, const DerivedParams& dp, bool forward,
                                  uint64_t n, uint64_t paths, uint64_t seed, int threads = 1);

// ---- speed ----

struct SpeedReport {
    double v_direct = 0.0, v_direct_se = 0.0;
    double v_regen = 0.0;
    uint64_t regen_count = 0;
    uint64_t paths = 0, horizon = 0;
};

// v_direct averages final position over time; v_regen uses fresh-level
// regeneration gaps (levels never stepped down from).
SpeedReport speed_estimates(const CookieSystem& sys, uint64_t horizon, uint64_t paths,
                            uint64_t seed, int threads = 1);

// ---- excursion-count drift/variance ratio ----

struct ExcursionDeltaReport {
    double delta_hat = 0.0, se = 0.0;
    double rho_hat = 0.0, nu_hat = 0.0;
    uint64_t n = 0, paths = 0;
};

// One-generation drift over half the variance rate, bootstrapped.
ExcursionDeltaReport excursion_delta(const CookieSystem& sys, uint64_t n, uint64_t paths,
                                     uint64_t seed, int threads = 1);

// ---- totally skewed stable reference ----

// Sample of the standard (scale 1) totally right-skewed alpha-stable law in
// the parameterization whose log characteristic function is
//   -|u|^alpha (1 - i tan(pi alpha/2) sgn u)        for alpha != 1
//   -|u| (1 + i (2/pi) sgn(u) log|u|)               for alpha == 1.
std::vector<double> stable_standard_sample(double alpha, size_t count, uint64_t seed);

// Maximum modulus gap between the empirical characteristic function and the
// scale-b target over a fixed frequency grid.
double stable_cf_gap(const std::vector<double>& sample, double alpha, double b);

// Scale map: b^{1/alpha} x for alpha != 1, b x + (2b/pi) log b for alpha == 1.
double stable_scale_apply(double alpha, double b, double x_standard);

// ---- centering sequences for the log-scale boundary law ----

// Built from a sample of regeneration durations W with positive tail index 1;
// m_hat is the truncated mean, d_hat the centering density, gamma_hat the
// generalized inverse of s * d_hat(s).
class CenteringFns {
  public:
    CenteringFns(std::vector<double> w_samples, double r_bar, double xi);
    double m_hat(double t) const;
    double d_hat(double t) const;
    double gamma_hat(double t) const;
    double r_bar() const { return r_bar_; }

  private:
    std::vector<double> sorted_w_;
    std::vector<double> prefix_mean_;  // prefix sums divided by sample count
    double r_bar_ = 1.0, xi_ = 0.0;
};

// ---- hitting-time limit law ----

struct LimitLawConfig {
    uint64_t n = 10000;
    uint64_t replicas = 2000;
    uint64_t horizon_cap = 400000000;
    size_t reference_size = 200000;
    int threads = 1;
};

struct LimitLawReport {
    LimitCase regime = LimitCase::none_recurrent;
    double ks = 0.0;
    uint64_t replicas = 0, n = 0;
    double scale = 0.0;   // fitted scale on the stated normalization
    double center = 0.0;  // per-replica centering subtracted before scaling
    double shift = 0.0;   // residual median alignment (log-scale case only)
    double censored_fraction = 0.0;
};

// Samples the first hitting time of level n and tests it against the law the
// regime classification predicts, with scale (and where needed center)
// fitted from the sample.
LimitLawReport limit_law_check(const CookieSystem& sys, const LimitLawConfig& cfg, uint64_t seed);

// ---- hitting-profile vs backward-process distribution check ----

struct HittingBackwardReport {
    double ks_sum = 0.0, ks_max = 0.0;
    double threshold = 0.0;
    uint64_t paths = 0;           // walk paths that reached the level
    double missed_fraction = 0.0;  // walk paths censored by the horizon
    bool pass = false;
};

// The left-edge crossing profile collected at the first hit of the level,
// read right to left, must match the backward process run for level steps;
// compared through summary statistics (sum and max) by two-sample KS.
HittingBackwardReport check_hitting_vs_backward(const CookieSystem& sys, int64_t level,
                                                uint64_t paths, uint64_t walk_horizon,
                                                uint64_t seed, int threads = 1);

}  // namespace erw
