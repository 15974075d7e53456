#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "erw/errors.hpp"

namespace erw {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

// Validation margins. Row sums and probability-vector sums must match 1 to
// kStochasticTol; step probabilities must stay inside (kEllipticity, 1-kEllipticity).
inline constexpr double kStochasticTol = 1e-12;
inline constexpr double kEllipticity = 1e-9;

// An i.i.d.-per-site cookie stack model: finite chain K drives the stack type
// from an initial law eta, and the j-th cookie at a site carries step
// probability p(type of the j-th draw). Valid systems have exactly one closed
// communicating class.
struct CookieSystem {
    Matrix K;
    Vector p;
    RowVector eta;

    int n() const { return static_cast<int>(p.size()); }
};

// Throws on any structural violation; see errors.hpp for the kinds.
void validate_system(const CookieSystem& sys);

CookieSystem make_system(Matrix K, Vector p, RowVector eta);

// States of the unique closed communicating class of K, ascending.
// Throws MultipleClosedClasses if the class is not unique.
std::vector<int> unique_closed_class(const Matrix& K);

struct StationaryLaw {
    RowVector mu;   // stationary law of K, zero off the closed class
    double pbar;    // mu . p
    double lambda;  // pbar / (1 - pbar)
};

StationaryLaw stationary_law(const CookieSystem& sys);

struct CriticalityVerdict {
    bool critical;
    double gap;  // pbar - 1/2, signed
    double tol;
};

CriticalityVerdict criticality(const StationaryLaw& law, double tol = 1e-10);
CriticalityVerdict criticality(const CookieSystem& sys, double tol = 1e-10);

// Example families.
//
// periodic: deterministic cycle through the given strengths, stack starts at
// the first one. Critical exactly when the strengths average to 1/2.
CookieSystem periodic_system(const std::vector<double>& strengths);

// geometric: a run of strength p1 cookies with geometric length (escape rate
// alpha), then fair coins forever. Always critical.
CookieSystem geometric_system(double alpha, double p1);

// bounded_stack: with probability alpha the stack reads (p1, p2, fair...),
// otherwise (p3, p4, fair...). Always critical.
CookieSystem bounded_stack_system(double alpha, double p1, double p2, double p3, double p4);

// two_type: two states swapping with rate alpha, strengths (p, 1-p), stack
// starts at the first state. Always critical.
CookieSystem two_type_system(double alpha, double p);

// Model files: {"K": [[...]], "p": [...], "eta": [...]}. Non-finite entries are
// rejected. The returned system is validated.
CookieSystem system_from_json_text(const std::string& text);
CookieSystem load_system_json(const std::string& path);
std::string system_to_json(const CookieSystem& sys);

}  // namespace erw
