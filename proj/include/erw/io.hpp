#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "erw/parameters.hpp"
#include "erw/regimes.hpp"
#include "erw/simulators.hpp"
#include "erw/statistics.hpp"

namespace erw {

using Provenance = std::vector<std::pair<std::string, std::string>>;

// 17 significant digits; '.' decimal point regardless of locale.
std::string format_g17(double v);

nlohmann::json vector_to_json(const Vector& v);
nlohmann::json rowvector_to_json(const RowVector& v);
nlohmann::json matrix_to_json(const Matrix& m);

// Field names are part of the interface: mu, pbar, lambda, Pi, pi, pi_tilde,
// g, r, r_tilde, nu, nu_tilde, delta, delta_tilde (plus tilde companions).
nlohmann::json params_to_json(const CookieSystem& sys, const DerivedParams& dp);

nlohmann::json identity_report_to_json(const IdentityReport& rep);
nlohmann::json regime_to_json(const RegimeReport& rep);

struct EstimatorReport {
    std::string name;
    double estimate = 0.0;
    double stderr_ = 0.0;
    std::string method;
    double window_lo = 0.0, window_hi = 0.0;
    uint64_t n_samples = 0;
    uint64_t seed = 0;
    bool pass = false;
    double target = 0.0;
    double tolerance = 0.0;
};

nlohmann::json estimator_to_json(const EstimatorReport& rep);

// CSV builders. Provenance pairs become leading "# key=value" lines; numbers
// print with 17 significant digits; rows end with LF.
std::string sweep_csv(const std::vector<SweepRow>& rows, const Provenance& prov);
std::string trajectory_csv(const std::vector<int64_t>& values, uint64_t stride,
                           const Provenance& prov);
std::string value_trajectory_csv(const std::vector<uint64_t>& values, const Provenance& prov);
std::string coupled_trajectory_csv(const CoupledRecord& rec, const Provenance& prov);
std::string regen_csv(const std::vector<RegenPair>& regens, const Provenance& prov);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace erw
