#include "erw/env_model.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

namespace erw {

namespace {

bool all_finite(const Matrix& m) { return m.allFinite(); }

// Strongly connected components of the positivity graph of K (Tarjan).
std::vector<std::vector<int>> scc_components(const Matrix& K) {
    int n = static_cast<int>(K.rows());
    std::vector<int> index(n, -1), low(n, 0), stack;
    std::vector<bool> on_stack(n, false);
    std::vector<std::vector<int>> comps;
    int next_index = 0;

    std::function<void(int)> strongconnect = [&](int v) {
        index[v] = low[v] = next_index++;
        stack.push_back(v);
        on_stack[v] = true;
        for (int w = 0; w < n; ++w) {
            if (K(v, w) <= 0.0) continue;
            if (index[w] < 0) {
                strongconnect(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            std::vector<int> comp;
            for (;;) {
                int w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                comp.push_back(w);
                if (w == v) break;
            }
            comps.push_back(std::move(comp));
        }
    };

    for (int v = 0; v < n; ++v) {
        if (index[v] < 0) strongconnect(v);
    }
    return comps;
}

}  // namespace

std::vector<int> unique_closed_class(const Matrix& K) {
    int n = static_cast<int>(K.rows());
    auto comps = scc_components(K);
    std::vector<std::vector<int>> closed;
    for (const auto& comp : comps) {
        bool leaves = false;
        std::vector<bool> in_comp(n, false);
        for (int v : comp) in_comp[v] = true;
        for (int v : comp) {
            for (int w = 0; w < n; ++w) {
                if (K(v, w) > 0.0 && !in_comp[w]) {
                    leaves = true;
                    break;
                }
            }
            if (leaves) break;
        }
        if (!leaves) closed.push_back(comp);
    }
    if (closed.size() != 1) {
        fail(errc::multiple_closed_classes,
             "found " + std::to_string(closed.size()) + " closed classes, need exactly 1");
    }
    std::vector<int> cls = closed.front();
    std::sort(cls.begin(), cls.end());
    return cls;
}

void validate_system(const CookieSystem& sys) {
    int n = sys.n();
    if (n < 1) fail(errc::dimension_mismatch, "empty system");
    if (sys.K.rows() != n || sys.K.cols() != n) {
        fail(errc::dimension_mismatch,
             "K is " + std::to_string(sys.K.rows()) + "x" + std::to_string(sys.K.cols()) +
                 ", p has " + std::to_string(n) + " entries");
    }
    if (sys.eta.size() != n) fail(errc::dimension_mismatch, "eta size differs from p size");
    if (!all_finite(sys.K) || !sys.p.allFinite() || !sys.eta.allFinite()) {
        fail(errc::bad_input, "non-finite entry");
    }
    for (int i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (int j = 0; j < n; ++j) {
            if (sys.K(i, j) < 0.0) fail(errc::not_stochastic, "negative entry in K");
            row_sum += sys.K(i, j);
        }
        if (std::fabs(row_sum - 1.0) > kStochasticTol) {
            fail(errc::not_stochastic, "row " + std::to_string(i + 1) + " of K sums to " +
                                           std::to_string(row_sum));
        }
    }
    double eta_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        if (sys.eta(i) < 0.0) fail(errc::not_stochastic, "negative entry in eta");
        eta_sum += sys.eta(i);
    }
    if (std::fabs(eta_sum - 1.0) > kStochasticTol) {
        fail(errc::not_stochastic, "eta sums to " + std::to_string(eta_sum));
    }
    for (int i = 0; i < n; ++i) {
        if (sys.p(i) < kEllipticity || sys.p(i) > 1.0 - kEllipticity) {
            fail(errc::ellipticity_violation,
                 "p(" + std::to_string(i + 1) + ") = " + std::to_string(sys.p(i)));
        }
    }
    unique_closed_class(sys.K);
}

CookieSystem make_system(Matrix K, Vector p, RowVector eta) {
    CookieSystem sys{std::move(K), std::move(p), std::move(eta)};
    validate_system(sys);
    return sys;
}

StationaryLaw stationary_law(const CookieSystem& sys) {
    int n = sys.n();
    // mu (K - I) = 0 with sum(mu) = 1, solved as an overdetermined consistent
    // system; rank must be n because the closed class is unique.
    Matrix A(n + 1, n);
    A.topRows(n) = sys.K.transpose() - Matrix::Identity(n, n);
    A.bottomRows(1).setOnes();
    Vector b = Vector::Zero(n + 1);
    b(n) = 1.0;
    Eigen::ColPivHouseholderQR<Matrix> qr(A);
    if (qr.rank() < n) fail(errc::singular_solve, "stationary solve is rank deficient");
    Vector mu_col = qr.solve(b);

    auto cls = unique_closed_class(sys.K);
    std::vector<bool> in_class(n, false);
    for (int v : cls) in_class[v] = true;

    RowVector mu = mu_col.transpose();
    for (int i = 0; i < n; ++i) {
        if (!in_class[i] || mu(i) < 0.0) {
            if (std::fabs(mu(i)) > 1e-10) {
                fail(errc::singular_solve, "stationary law leaks off the closed class");
            }
            mu(i) = 0.0;
        }
    }
    mu /= mu.sum();

    double residual = (mu * sys.K - mu).cwiseAbs().maxCoeff();
    if (residual > 1e-10) fail(errc::singular_solve, "stationary residual too large");

    StationaryLaw law;
    law.mu = mu;
    law.pbar = mu * sys.p;
    law.lambda = law.pbar / (1.0 - law.pbar);
    return law;
}

CriticalityVerdict criticality(const StationaryLaw& law, double tol) {
    double gap = law.pbar - 0.5;
    return CriticalityVerdict{std::fabs(gap) <= tol, gap, tol};
}

CriticalityVerdict criticality(const CookieSystem& sys, double tol) {
    return criticality(stationary_law(sys), tol);
}

CookieSystem periodic_system(const std::vector<double>& strengths) {
    int n = static_cast<int>(strengths.size());
    if (n < 1) fail(errc::bad_family_param, "periodic family needs at least one strength");
    Matrix K = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) K(i, (i + 1) % n) = 1.0;
    Vector p(n);
    for (int i = 0; i < n; ++i) p(i) = strengths[i];
    RowVector eta = RowVector::Zero(n);
    eta(0) = 1.0;
    return make_system(std::move(K), std::move(p), std::move(eta));
}

CookieSystem geometric_system(double alpha, double p1) {
    if (!(alpha > 0.0 && alpha <= 1.0)) fail(errc::bad_family_param, "alpha must be in (0,1]");
    if (!(p1 > 0.0 && p1 < 1.0)) fail(errc::bad_family_param, "p1 must be in (0,1)");
    Matrix K(2, 2);
    K << 1.0 - alpha, alpha, 0.0, 1.0;
    Vector p(2);
    p << p1, 0.5;
    RowVector eta(2);
    eta << 1.0, 0.0;
    return make_system(std::move(K), std::move(p), std::move(eta));
}

CookieSystem bounded_stack_system(double alpha, double p1, double p2, double p3, double p4) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) fail(errc::bad_family_param, "alpha must be in [0,1]");
    for (double v : {p1, p2, p3, p4}) {
        if (!(v > 0.0 && v < 1.0)) fail(errc::bad_family_param, "strengths must be in (0,1)");
    }
    Matrix K = Matrix::Zero(5, 5);
    K(0, 1) = 1.0;  // first branch: second cookie, then fair coins
    K(1, 4) = 1.0;
    K(2, 3) = 1.0;  // second branch
    K(3, 4) = 1.0;
    K(4, 4) = 1.0;  // fair absorbing state
    Vector p(5);
    p << p1, p2, p3, p4, 0.5;
    RowVector eta(5);
    eta << alpha, 0.0, 1.0 - alpha, 0.0, 0.0;
    return make_system(std::move(K), std::move(p), std::move(eta));
}

CookieSystem two_type_system(double alpha, double p) {
    if (!(alpha > 0.0 && alpha <= 1.0)) fail(errc::bad_family_param, "alpha must be in (0,1]");
    if (!(p > 0.0 && p < 1.0)) fail(errc::bad_family_param, "p must be in (0,1)");
    Matrix K(2, 2);
    K << 1.0 - alpha, alpha, alpha, 1.0 - alpha;
    Vector pv(2);
    pv << p, 1.0 - p;
    RowVector eta(2);
    eta << 1.0, 0.0;
    return make_system(std::move(K), std::move(pv), std::move(eta));
}

namespace {

double json_number(const nlohmann::json& v) {
    if (!v.is_number()) fail(errc::bad_input, "expected a number in model file");
    double x = v.get<double>();
    if (!std::isfinite(x)) fail(errc::bad_input, "non-finite entry in model file");
    return x;
}

}  // namespace

CookieSystem system_from_json_text(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded()) fail(errc::bad_input, "model file is not valid JSON");
    if (!doc.is_object() || !doc.contains("K") || !doc.contains("p") || !doc.contains("eta")) {
        fail(errc::bad_input, "model file needs objects K, p, eta");
    }
    const auto& jK = doc["K"];
    const auto& jp = doc["p"];
    const auto& je = doc["eta"];
    if (!jK.is_array() || jK.empty() || !jp.is_array() || !je.is_array()) {
        fail(errc::bad_input, "K must be a non-empty array of rows; p, eta arrays");
    }
    int n = static_cast<int>(jK.size());
    Matrix K(n, n);
    for (int i = 0; i < n; ++i) {
        if (!jK[i].is_array() || static_cast<int>(jK[i].size()) != n) {
            fail(errc::dimension_mismatch, "K row " + std::to_string(i + 1) + " has wrong length");
        }
        for (int j = 0; j < n; ++j) K(i, j) = json_number(jK[i][j]);
    }
    if (static_cast<int>(jp.size()) != n || static_cast<int>(je.size()) != n) {
        fail(errc::dimension_mismatch, "p and eta must match K's dimension");
    }
    Vector p(n);
    RowVector eta(n);
    for (int i = 0; i < n; ++i) {
        p(i) = json_number(jp[i]);
        eta(i) = json_number(je[i]);
    }
    return make_system(std::move(K), std::move(p), std::move(eta));
}

CookieSystem load_system_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::bad_input, "cannot open model file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return system_from_json_text(ss.str());
}

std::string system_to_json(const CookieSystem& sys) {
    nlohmann::json doc;
    int n = sys.n();
    for (int i = 0; i < n; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < n; ++j) row.push_back(sys.K(i, j));
        doc["K"].push_back(row);
    }
    for (int i = 0; i < n; ++i) {
        doc["p"].push_back(sys.p(i));
        doc["eta"].push_back(sys.eta(i));
    }
    return doc.dump(2);
}

}  // namespace erw
