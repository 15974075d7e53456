#include "erw/errors.hpp"

namespace erw {

const char* errc_name(errc kind) {
    switch (kind) {
        case errc::dimension_mismatch: return "DimensionMismatch";
        case errc::not_stochastic: return "NotStochastic";
        case errc::ellipticity_violation: return "EllipticityViolation";
        case errc::multiple_closed_classes: return "MultipleClosedClasses";
        case errc::singular_solve: return "SingularSolve";
        case errc::non_positive_variance: return "NonPositiveVariance";
        case errc::bad_family_param: return "BadFamilyParam";
        case errc::not_dominating: return "NotDominating";
        case errc::not_critical_base: return "NotCriticalBase";
        case errc::target_below_range: return "TargetBelowRange";
        case errc::bad_input: return "BadInput";
        case errc::window_too_narrow: return "WindowTooNarrow";
        case errc::all_censored: return "AllCensored";
        case errc::bad_alpha: return "BadAlpha";
        case errc::insufficient_pairs: return "InsufficientPairs";
        case errc::regime_mismatch: return "RegimeMismatch";
        case errc::coupling_violation: return "CouplingViolation";
    }
    return "UnknownError";
}

}  // namespace erw
