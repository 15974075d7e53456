#pragma once

#include <stdexcept>
#include <string>

namespace erw {

// Every precondition failure carries one of these kinds. The CLI maps any
// thrown Error to exit code 2 and prints the kind name, so the names below are
// part of the tool's interface.
enum class errc {
    dimension_mismatch,
    not_stochastic,
    ellipticity_violation,
    multiple_closed_classes,
    singular_solve,
    non_positive_variance,
    bad_family_param,
    not_dominating,
    not_critical_base,
    target_below_range,
    bad_input,
    window_too_narrow,
    all_censored,
    bad_alpha,
    insufficient_pairs,
    regime_mismatch,
    coupling_violation,
};

const char* errc_name(errc kind);

class Error : public std::runtime_error {
  public:
    Error(errc kind, const std::string& detail)
        : std::runtime_error(std::string(errc_name(kind)) + ": " + detail), kind_(kind) {}

    errc kind() const { return kind_; }

  private:
    errc kind_;
};

[[noreturn]] inline void fail(errc kind, const std::string& detail) {
    throw Error(kind, detail);
}

}  // namespace erw
