#pragma once

#include <string>
#include <vector>

#include "erw/parameters.hpp"

namespace erw {

enum class Transience { recurrent, right, left };
enum class SpeedSign { zero, positive, negative };

// Long-run law of the hitting times / position, after boundary snapping.
enum class LimitCase {
    non_critical_gaussian,
    stable_one_two,     // delta in (1,2): pure stable scaling, no centering
    stable_at_two,      // delta = 2: linear scale with slowly varying centering
    stable_two_four,    // delta in (2,4): stable around the ballistic center
    gaussian_log_at_four,  // delta = 4: Gaussian at sqrt(n log n)
    gaussian_above_four,   // delta > 4: Gaussian at sqrt(n)
    none_recurrent,
};

const char* limit_case_name(LimitCase c);

// scale = n^exponent * (log n)^log_power around the given centering.
struct ScalingTemplate {
    double exponent = 0.0;
    double log_power = 0.0;
    enum class Centering { none, linear, log_sequence, gamma_sequence } centering = Centering::none;
};

const char* centering_name(ScalingTemplate::Centering c);

struct RegimeReport {
    CriticalityVerdict crit;
    Transience transience = Transience::recurrent;
    SpeedSign speed = SpeedSign::zero;
    LimitCase limit_case = LimitCase::none_recurrent;
    bool mirrored = false;  // the limit case describes leftward motion (via delta_tilde)
    bool has_scalings = false;
    ScalingTemplate hitting, position;
    std::vector<std::string> boundary_flags;  // e.g. "delta=2"
    double delta = 0.0, delta_tilde = 0.0, nu = 0.0;

    std::string regime_label() const;  // compact label for sweep output
};

RegimeReport classify(const DerivedParams& dp, const CriticalityVerdict& crit,
                      double tol_boundary = 1e-9);
RegimeReport classify(const CookieSystem& sys, double tol_critical = 1e-10,
                      double tol_boundary = 1e-9);

struct SweepAxis {
    double lo = 0.0, hi = 0.0;
    int count = 1;
};

struct SweepRow {
    double axis1 = 0.0, axis2 = 0.0;
    bool ok = false;
    std::string error;  // error kind name when !ok
    double delta = 0.0, delta_tilde = 0.0, nu = 0.0;
    std::string regime;
    std::string boundary_flags;  // '|'-joined
};

// family is "geometric" (axis1 = alpha, axis2 = p1) or "twotype" (axis1 =
// alpha, axis2 = p). Rows come out in row-major axis1-then-axis2 order; grid
// points that fail validation become error-labelled rows.
std::vector<SweepRow> phase_sweep(const std::string& family, const SweepAxis& axis1,
                                  const SweepAxis& axis2, double tol_critical = 1e-10,
                                  double tol_boundary = 1e-9);

}  // namespace erw
