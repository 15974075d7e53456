#pragma once

#include <string>
#include <vector>

#include "erw/env_model.hpp"
#include "erw/rng.hpp"

namespace erw {

// Closed-form quantities attached to one system. The plain fields describe
// success runs of the cookie sequence (walk drift side); the _tilde fields are
// the same pipeline run on swapped strengths 1-p (failure runs, leftward side).
struct DerivedParams {
    StationaryLaw law;
    Matrix Pi, Pi_tilde;        // run-boundary chains
    RowVector pi, pi_tilde;     // their stationary laws
    Vector g, g_tilde;          // expected run lengths by start type
    Vector r, r_tilde;          // mean-drift correction vectors
    double nu, nu_tilde;        // asymptotic variance slopes
    double delta, delta_tilde;  // 2 eta.r / nu and the swapped analogue
};

DerivedParams derived_params(const CookieSystem& sys);

// Independent closed-form route for r: direct resolvent in K rather than the
// run-boundary chain. The two routes agreeing is a standing regression check.
Vector r_direct_route(const CookieSystem& sys, const StationaryLaw& law, bool tilde);

// Truncated series route sum_{m>=0} (Pi^m - 1 pi) g; converges geometrically.
Vector r_series_route(const Matrix& Pi, const RowVector& pi, const Vector& g, double tol = 1e-13);

struct IdentityItem {
    std::string name;
    double residual;
    bool applicable;  // critical-only identities are skipped off criticality
};

struct IdentityReport {
    std::vector<IdentityItem> items;
    bool critical;
    double tol;
    bool pass;  // all applicable residuals <= tol
};

IdentityReport identity_suite(const CookieSystem& sys, double tol = 1e-9,
                              double tol_critical = 1e-10);

// Two-strength comparison system: strengths start at p1 and fall to the
// critical base p0 after an independent geometric number of cookies per site.
// The combined stack is a single 2N-state chain, critical for every eps.
struct CoupledSystem {
    CookieSystem hat;         // the 2N-state system
    double eps;
    double delta_hat;         // generic pipeline on hat
    double delta_hat_series;  // base delta + geometric-series correction
    double nu_hat;            // equals the base system's nu
};

// base must be critical; p1 >= base.p entrywise with mu.p1 > 1/2.
CoupledSystem coupled_delta(const CookieSystem& base, const Vector& p1, double eps);

// Smallest-work inverse: returns eps in [1e-12, 1] with delta_hat(eps) within
// 1e-6 of target, or the 1e-12 bound if the target is still above reach there.
// Throws TargetBelowRange if target < delta_hat(1) (the base system's delta).
double solve_epsilon_for_delta(const CookieSystem& base, const Vector& p1, double target,
                               double* achieved = nullptr);

// Random critical system for property tests: flat-simplex rows for K, strengths
// drawn U(0.1, 0.9) then shifted to the critical manifold, flat-simplex eta.
CookieSystem random_critical_system(int n, Rng& rng);

}  // namespace erw
