#include "erw/regimes.hpp"

#include <cmath>

namespace erw {

const char* limit_case_name(LimitCase c) {
    switch (c) {
        case LimitCase::non_critical_gaussian: return "NonCriticalGaussian";
        case LimitCase::stable_one_two: return "Stable_1_2";
        case LimitCase::stable_at_two: return "Stable_at_2";
        case LimitCase::stable_two_four: return "Stable_2_4";
        case LimitCase::gaussian_log_at_four: return "Gaussian_log_at_4";
        case LimitCase::gaussian_above_four: return "Gaussian_gt_4";
        case LimitCase::none_recurrent: return "NoneRecurrent";
    }
    return "?";
}

const char* centering_name(ScalingTemplate::Centering c) {
    switch (c) {
        case ScalingTemplate::Centering::none: return "none";
        case ScalingTemplate::Centering::linear: return "linear";
        case ScalingTemplate::Centering::log_sequence: return "log_sequence";
        case ScalingTemplate::Centering::gamma_sequence: return "gamma_sequence";
    }
    return "?";
}

std::string RegimeReport::regime_label() const {
    std::string base = limit_case_name(limit_case);
    if (mirrored) return "MirrorOf(" + base + ")";
    return base;
}

namespace {

// Snap to the nearest boundary in {0,1,2,4} within tol; exact-boundary
// semantics for the classification thresholds.
double snap(double value, double tol, const char* name, std::vector<std::string>* flags) {
    for (double c : {0.0, 1.0, 2.0, 4.0}) {
        if (std::fabs(value - c) <= tol) {
            if (flags) {
                flags->push_back(std::string(name) + "=" + std::to_string(static_cast<int>(c)));
            }
            return c;
        }
    }
    return value;
}

// Hitting-time and position scalings for a transient-right critical walk with
// the given (snapped) delta. delta > 1 required.
void critical_scalings(double delta, ScalingTemplate* hitting, ScalingTemplate* position) {
    using C = ScalingTemplate::Centering;
    if (delta < 2.0) {
        *hitting = {2.0 / delta, 0.0, C::none};
        *position = {delta / 2.0, 0.0, C::none};
    } else if (delta == 2.0) {
        *hitting = {1.0, 0.0, C::log_sequence};
        *position = {1.0, -2.0, C::gamma_sequence};
    } else if (delta < 4.0) {
        *hitting = {2.0 / delta, 0.0, C::linear};
        *position = {2.0 / delta, 0.0, C::linear};
    } else {
        // sqrt(n log n) exactly at 4, sqrt(n) above
        double lp = (delta == 4.0) ? 0.5 : 0.0;
        *hitting = {0.5, lp, C::linear};
        *position = {0.5, lp, C::linear};
    }
}

LimitCase critical_case(double delta) {
    if (delta < 2.0) return LimitCase::stable_one_two;
    if (delta == 2.0) return LimitCase::stable_at_two;
    if (delta < 4.0) return LimitCase::stable_two_four;
    if (delta == 4.0) return LimitCase::gaussian_log_at_four;
    return LimitCase::gaussian_above_four;
}

}  // namespace

RegimeReport classify(const DerivedParams& dp, const CriticalityVerdict& crit,
                      double tol_boundary) {
    RegimeReport rep;
    rep.crit = crit;
    rep.delta = dp.delta;
    rep.delta_tilde = dp.delta_tilde;
    rep.nu = dp.nu;

    if (!crit.critical) {
        bool right = crit.gap > 0.0;
        rep.transience = right ? Transience::right : Transience::left;
        rep.speed = right ? SpeedSign::positive : SpeedSign::negative;
        rep.limit_case = LimitCase::non_critical_gaussian;
        rep.mirrored = !right;
        rep.has_scalings = true;
        rep.hitting = {0.5, 0.0, ScalingTemplate::Centering::linear};
        rep.position = {0.5, 0.0, ScalingTemplate::Centering::linear};
        return rep;
    }

    double d = snap(dp.delta, tol_boundary, "delta", &rep.boundary_flags);
    double dt = snap(dp.delta_tilde, tol_boundary, "delta_tilde", &rep.boundary_flags);
    if (d > 1.0 && dt > 1.0) {
        // impossible for a valid critical system: delta + delta_tilde < 1
        fail(errc::regime_mismatch, "both delta and delta_tilde exceed 1");
    }

    if (d > 1.0) {
        rep.transience = Transience::right;
        rep.speed = d > 2.0 ? SpeedSign::positive : SpeedSign::zero;
        rep.limit_case = critical_case(d);
        rep.mirrored = false;
        rep.has_scalings = true;
        critical_scalings(d, &rep.hitting, &rep.position);
    } else if (dt > 1.0) {
        rep.transience = Transience::left;
        rep.speed = dt > 2.0 ? SpeedSign::negative : SpeedSign::zero;
        rep.limit_case = critical_case(dt);
        rep.mirrored = true;
        rep.has_scalings = true;
        critical_scalings(dt, &rep.hitting, &rep.position);
    } else {
        rep.transience = Transience::recurrent;
        rep.speed = SpeedSign::zero;
        rep.limit_case = LimitCase::none_recurrent;
        rep.mirrored = false;
        rep.has_scalings = false;
    }
    return rep;
}

RegimeReport classify(const CookieSystem& sys, double tol_critical, double tol_boundary) {
    DerivedParams dp = derived_params(sys);
    return classify(dp, criticality(dp.law, tol_critical), tol_boundary);
}

std::vector<SweepRow> phase_sweep(const std::string& family, const SweepAxis& axis1,
                                  const SweepAxis& axis2, double tol_critical,
                                  double tol_boundary) {
    if (family != "geometric" && family != "twotype") {
        fail(errc::bad_family_param, "sweep supports families geometric and twotype");
    }
    if (axis1.count < 1 || axis2.count < 1) fail(errc::bad_input, "axis counts must be >= 1");

    auto grid_value = [](const SweepAxis& ax, int i) {
        if (ax.count == 1) return ax.lo;
        return ax.lo + (ax.hi - ax.lo) * static_cast<double>(i) / (ax.count - 1);
    };

    std::vector<SweepRow> rows;
    rows.reserve(static_cast<size_t>(axis1.count) * axis2.count);
    for (int i = 0; i < axis1.count; ++i) {
        for (int j = 0; j < axis2.count; ++j) {
            SweepRow row;
            row.axis1 = grid_value(axis1, i);
            row.axis2 = grid_value(axis2, j);
            try {
                CookieSystem sys = family == "geometric"
                                       ? geometric_system(row.axis1, row.axis2)
                                       : two_type_system(row.axis1, row.axis2);
                RegimeReport rep = classify(sys, tol_critical, tol_boundary);
                row.ok = true;
                row.delta = rep.delta;
                row.delta_tilde = rep.delta_tilde;
                row.nu = rep.nu;
                row.regime = rep.regime_label();
                std::string flags;
                for (const auto& f : rep.boundary_flags) {
                    if (!flags.empty()) flags += '|';
                    flags += f;
                }
                row.boundary_flags = flags;
            } catch (const Error& e) {
                row.ok = false;
                row.error = errc_name(e.kind());
                row.regime = std::string("error:") + errc_name(e.kind());
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

}  // namespace erw
