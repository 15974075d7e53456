#include "erw/parameters.hpp"

#include <cmath>

namespace erw {

namespace {

struct Side {
    Matrix Pi;
    RowVector pi;
    Vector g, r;
    double lambda, nu;
};

void check_residual(double res, double scale, const char* what) {
    if (!(res <= 1e-8 * std::max(1.0, scale))) {
        fail(errc::singular_solve, std::string(what) + " residual " + std::to_string(res));
    }
}

// One side of the pipeline: plain uses strengths p (success runs), tilde uses
// 1-p (failure runs). Everything follows from two small LU solves.
Side compute_side(const CookieSystem& sys, const StationaryLaw& law, bool tilde) {
    int n = sys.n();
    Vector s = tilde ? Vector(Vector::Ones(n) - sys.p) : sys.p;
    Vector c = Vector::Ones(n) - s;
    double sbar = tilde ? 1.0 - law.pbar : law.pbar;

    Side out;
    out.lambda = sbar / (1.0 - sbar);

    Matrix DsK = s.asDiagonal() * sys.K;
    Matrix DcK = c.asDiagonal() * sys.K;
    Matrix A = Matrix::Identity(n, n) - DsK;  // invertible: row sums of DsK are s(i) < 1
    Eigen::PartialPivLU<Matrix> lu_a(A);
    out.Pi = lu_a.solve(DcK);
    out.g = lu_a.solve(s);
    check_residual((A * out.Pi - DcK).cwiseAbs().maxCoeff(), 1.0, "run-boundary chain");
    check_residual((A * out.g - s).cwiseAbs().maxCoeff(), out.g.cwiseAbs().maxCoeff(), "run length");

    out.pi = (1.0 + out.lambda) * (law.mu * A);

    Matrix B = Matrix::Identity(n, n) - out.Pi + Vector::Ones(n) * out.pi;
    Eigen::PartialPivLU<Matrix> lu_b(B);
    Vector h = lu_b.solve(out.g);
    check_residual((B * h - out.g).cwiseAbs().maxCoeff(), h.cwiseAbs().maxCoeff(),
                   "fundamental solve");
    out.r = h - out.lambda * Vector::Ones(n);

    double mu_DsK_r = law.mu * (DsK * out.r);
    out.nu = (1.0 + out.lambda) * (out.lambda + 2.0 * mu_DsK_r);
    return out;
}

}  // namespace

DerivedParams derived_params(const CookieSystem& sys) {
    StationaryLaw law = stationary_law(sys);
    Side plain = compute_side(sys, law, false);
    Side swapped = compute_side(sys, law, true);

    if (!(plain.nu > 0.0)) fail(errc::non_positive_variance, "nu = " + std::to_string(plain.nu));
    if (!(swapped.nu > 0.0)) {
        fail(errc::non_positive_variance, "nu_tilde = " + std::to_string(swapped.nu));
    }

    DerivedParams out;
    out.law = law;
    out.Pi = std::move(plain.Pi);
    out.Pi_tilde = std::move(swapped.Pi);
    out.pi = std::move(plain.pi);
    out.pi_tilde = std::move(swapped.pi);
    out.g = std::move(plain.g);
    out.g_tilde = std::move(swapped.g);
    out.r = std::move(plain.r);
    out.r_tilde = std::move(swapped.r);
    out.nu = plain.nu;
    out.nu_tilde = swapped.nu;
    out.delta = 2.0 * (sys.eta * out.r).value() / out.nu;
    out.delta_tilde = 2.0 * (sys.eta * out.r_tilde).value() / out.nu_tilde;
    return out;
}

Vector r_direct_route(const CookieSystem& sys, const StationaryLaw& law, bool tilde) {
    int n = sys.n();
    Vector s = tilde ? Vector(Vector::Ones(n) - sys.p) : sys.p;
    Vector c = Vector::Ones(n) - s;
    double sbar = tilde ? 1.0 - law.pbar : law.pbar;
    double lambda = sbar / (1.0 - sbar);

    RowVector mu_DcK = (law.mu.cwiseProduct(c.transpose())) * sys.K;
    Matrix M = Matrix::Identity(n, n) - sys.K + (c * mu_DcK) / (1.0 - sbar);
    Eigen::PartialPivLU<Matrix> lu(M);
    Vector h = lu.solve(s);
    check_residual((M * h - s).cwiseAbs().maxCoeff(), h.cwiseAbs().maxCoeff(), "direct r solve");
    return h - lambda * Vector::Ones(n);
}

Vector r_series_route(const Matrix& Pi, const RowVector& pi, const Vector& g, double tol) {
    int n = static_cast<int>(g.size());
    Vector term = g - Vector::Ones(n) * (pi * g);
    Vector sum = term;
    for (int m = 1; m < 100000; ++m) {
        term = Pi * term - Vector::Ones(n) * (pi * term);
        sum += term;
        if (term.cwiseAbs().maxCoeff() < tol) return sum;
    }
    fail(errc::singular_solve, "run-boundary series did not converge");
}

IdentityReport identity_suite(const CookieSystem& sys, double tol, double tol_critical) {
    DerivedParams dp = derived_params(sys);
    CriticalityVerdict crit = criticality(dp.law, tol_critical);
    int n = sys.n();

    IdentityReport rep;
    rep.critical = crit.critical;
    rep.tol = tol;

    auto add = [&rep](const std::string& name, double residual, bool applicable) {
        rep.items.push_back(IdentityItem{name, residual, applicable});
    };

    double lambda = dp.law.lambda;
    double lambda_t = 1.0 / lambda;
    add("pi_mass", std::fabs(dp.pi.sum() - 1.0), true);
    add("pi_stationary", (dp.pi * dp.Pi - dp.pi).cwiseAbs().maxCoeff(), true);
    add("pi_dot_g_minus_lambda", std::fabs(dp.pi * dp.g - lambda), true);
    add("pi_dot_r", std::fabs(dp.pi * dp.r), true);
    add("r_dual_route", (dp.r - r_direct_route(sys, dp.law, false)).cwiseAbs().maxCoeff(), true);
    add("pi_tilde_mass", std::fabs(dp.pi_tilde.sum() - 1.0), true);
    add("pi_tilde_stationary", (dp.pi_tilde * dp.Pi_tilde - dp.pi_tilde).cwiseAbs().maxCoeff(),
        true);
    add("pi_tilde_dot_g_minus_lambda", std::fabs(dp.pi_tilde * dp.g_tilde - lambda_t), true);
    add("pi_tilde_dot_r", std::fabs(dp.pi_tilde * dp.r_tilde), true);
    add("r_tilde_dual_route",
        (dp.r_tilde - r_direct_route(sys, dp.law, true)).cwiseAbs().maxCoeff(), true);

    bool c = crit.critical;
    add("nu_tilde_match", std::fabs(dp.nu - dp.nu_tilde), c);
    double r_sum_res = 0.0;
    for (int i = 0; i < n; ++i) {
        r_sum_res = std::max(r_sum_res, std::fabs(dp.r(i) + dp.r_tilde(i) - (dp.nu / 2.0 - 1.0)));
    }
    add("r_sum_constant", r_sum_res, c);
    add("delta_sum", std::fabs(dp.delta + dp.delta_tilde - (1.0 - 2.0 / dp.nu)), c);

    rep.pass = true;
    for (const auto& item : rep.items) {
        if (item.applicable && !(item.residual <= tol)) rep.pass = false;
    }
    return rep;
}

namespace {

void check_domination(const CookieSystem& base, const Vector& p1, const StationaryLaw& law) {
    int n = base.n();
    if (static_cast<int>(p1.size()) != n) fail(errc::dimension_mismatch, "p1 size differs");
    for (int i = 0; i < n; ++i) {
        if (p1(i) < kEllipticity || p1(i) > 1.0 - kEllipticity) {
            fail(errc::ellipticity_violation, "p1(" + std::to_string(i + 1) + ") out of range");
        }
        if (p1(i) < base.p(i)) {
            fail(errc::not_dominating, "p1(" + std::to_string(i + 1) + ") below base strength");
        }
    }
    if (!(law.mu * p1 > 0.5)) fail(errc::not_dominating, "mu.p1 must exceed 1/2");
    if (std::fabs(law.pbar - 0.5) > 1e-10) {
        fail(errc::not_critical_base, "base pbar = " + std::to_string(law.pbar));
    }
}

CookieSystem build_hat(const CookieSystem& base, const Vector& p1, double eps) {
    int n = base.n();
    Matrix K_hat = Matrix::Zero(2 * n, 2 * n);
    K_hat.topLeftCorner(n, n) = (1.0 - eps) * base.K;
    K_hat.topRightCorner(n, n) = eps * base.K;
    K_hat.bottomRightCorner(n, n) = base.K;
    Vector p_hat(2 * n);
    p_hat << p1, base.p;
    RowVector eta_hat(2 * n);
    eta_hat << (1.0 - eps) * base.eta, eps * base.eta;
    return make_system(std::move(K_hat), std::move(p_hat), std::move(eta_hat));
}

}  // namespace

CoupledSystem coupled_delta(const CookieSystem& base, const Vector& p1, double eps) {
    if (!(eps > 0.0 && eps <= 1.0)) fail(errc::bad_input, "eps must be in (0,1]");
    StationaryLaw law = stationary_law(base);
    check_domination(base, p1, law);

    DerivedParams base_dp = derived_params(base);

    CoupledSystem out;
    out.eps = eps;
    out.hat = build_hat(base, p1, eps);
    out.nu_hat = base_dp.nu;
    out.delta_hat = derived_params(out.hat).delta;

    // Geometric series correction, summed in closed form: the terms
    // (1-eps)^j eta K^{j-1} (p1-p0) telescope into one resolvent solve, which
    // stays cheap and exact even when eps is tiny and the series is slow.
    double acc = 0.0;
    if (eps < 1.0) {
        const int n = base.n();
        Matrix M = Matrix::Identity(n, n) - (1.0 - eps) * base.K;
        Vector x = Eigen::PartialPivLU<Matrix>(M).solve(Vector(p1 - base.p));
        acc = (1.0 - eps) * (base.eta * x).value();
    }
    out.delta_hat_series = base_dp.delta + 4.0 * acc / base_dp.nu;
    return out;
}

double solve_epsilon_for_delta(const CookieSystem& base, const Vector& p1, double target,
                               double* achieved) {
    StationaryLaw law = stationary_law(base);
    check_domination(base, p1, law);
    DerivedParams base_dp = derived_params(base);
    int n = base.n();
    Vector w = p1 - base.p;

    // Exact value of the series: (1-eps) eta (I - (1-eps)K)^{-1} w.
    auto eval = [&](double eps) {
        if (eps >= 1.0) return base_dp.delta;
        Matrix M = Matrix::Identity(n, n) - (1.0 - eps) * base.K;
        Vector x = Eigen::PartialPivLU<Matrix>(M).solve(w);
        return base_dp.delta + (4.0 / base_dp.nu) * (1.0 - eps) * (base.eta * x).value();
    };

    if (target < base_dp.delta - 1e-12) {
        fail(errc::target_below_range,
             "target " + std::to_string(target) + " below delta at eps=1");
    }
    constexpr double kEpsFloor = 1e-12;
    if (eval(kEpsFloor) < target) {
        if (achieved) *achieved = eval(kEpsFloor);
        return kEpsFloor;
    }
    double lo = std::log(kEpsFloor), hi = 0.0;  // f(e^lo) >= target >= f(e^hi)
    double mid = hi, value = eval(1.0);
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        value = eval(std::exp(mid));
        if (std::fabs(value - target) <= 1e-6) break;
        if (value > target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if (achieved) *achieved = value;
    return std::exp(mid);
}

CookieSystem random_critical_system(int n, Rng& rng) {
    if (n < 1) fail(errc::bad_family_param, "need n >= 1");
    for (int attempt = 0; attempt < 1000; ++attempt) {
        Matrix K(n, n);
        for (int i = 0; i < n; ++i) {
            double row_sum = 0.0;
            for (int j = 0; j < n; ++j) {
                K(i, j) = rng.exponential();
                row_sum += K(i, j);
            }
            for (int j = 0; j < n; ++j) K(i, j) /= row_sum;
        }
        RowVector eta(n);
        double eta_sum = 0.0;
        for (int i = 0; i < n; ++i) {
            eta(i) = rng.exponential();
            eta_sum += eta(i);
        }
        eta /= eta_sum;
        Vector p(n);
        for (int i = 0; i < n; ++i) p(i) = 0.1 + 0.8 * rng.next_double();

        CookieSystem draft{K, p, eta};
        StationaryLaw law = stationary_law(draft);
        double shift = law.pbar - 0.5;
        bool ok = true;
        for (int i = 0; i < n; ++i) {
            p(i) -= shift;
            if (p(i) <= 0.05 || p(i) >= 0.95) ok = false;
        }
        if (!ok) continue;
        return make_system(std::move(K), std::move(p), std::move(eta));
    }
    fail(errc::bad_family_param, "could not sample a critical system");
}

}  // namespace erw
