// Serialization: JSON report objects and deterministic CSV builders.

#include "erw/io.hpp"

#include <cstdio>
#include <fstream>

#include "erw/errors.hpp"

namespace erw {

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

nlohmann::json vector_to_json(const Vector& v) {
    nlohmann::json a = nlohmann::json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

nlohmann::json rowvector_to_json(const RowVector& v) {
    nlohmann::json a = nlohmann::json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

nlohmann::json matrix_to_json(const Matrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

nlohmann::json params_to_json(const CookieSystem& sys, const DerivedParams& dp) {
    nlohmann::json j;
    j["n"] = sys.n();
    j["K"] = matrix_to_json(sys.K);
    j["p"] = vector_to_json(sys.p);
    j["eta"] = rowvector_to_json(sys.eta);
    j["mu"] = rowvector_to_json(dp.law.mu);
    j["pbar"] = dp.law.pbar;
    j["lambda"] = dp.law.lambda;
    j["Pi"] = matrix_to_json(dp.Pi);
    j["Pi_tilde"] = matrix_to_json(dp.Pi_tilde);
    j["pi"] = rowvector_to_json(dp.pi);
    j["pi_tilde"] = rowvector_to_json(dp.pi_tilde);
    j["g"] = vector_to_json(dp.g);
    j["g_tilde"] = vector_to_json(dp.g_tilde);
    j["r"] = vector_to_json(dp.r);
    j["r_tilde"] = vector_to_json(dp.r_tilde);
    j["nu"] = dp.nu;
    j["nu_tilde"] = dp.nu_tilde;
    j["delta"] = dp.delta;
    j["delta_tilde"] = dp.delta_tilde;
    return j;
}

nlohmann::json identity_report_to_json(const IdentityReport& rep) {
    nlohmann::json items = nlohmann::json::array();
    for (const auto& it : rep.items) {
        items.push_back({{"name", it.name},
                         {"residual", it.residual},
                         {"applicable", it.applicable}});
    }
    return {{"items", std::move(items)},
            {"critical", rep.critical},
            {"tol", rep.tol},
            {"pass", rep.pass}};
}

nlohmann::json regime_to_json(const RegimeReport& rep) {
    nlohmann::json j;
    j["critical"] = rep.crit.critical;
    j["criticality_gap"] = rep.crit.gap;
    j["delta"] = rep.delta;
    j["delta_tilde"] = rep.delta_tilde;
    j["nu"] = rep.nu;
    switch (rep.transience) {
        case Transience::recurrent: j["transience"] = "recurrent"; break;
        case Transience::right: j["transience"] = "right"; break;
        case Transience::left: j["transience"] = "left"; break;
    }
    switch (rep.speed) {
        case SpeedSign::zero: j["speed_sign"] = "zero"; break;
        case SpeedSign::positive: j["speed_sign"] = "positive"; break;
        case SpeedSign::negative: j["speed_sign"] = "negative"; break;
    }
    j["limit_case"] = limit_case_name(rep.limit_case);
    j["mirrored"] = rep.mirrored;
    j["label"] = rep.regime_label();
    j["boundary_flags"] = rep.boundary_flags;
    if (rep.has_scalings) {
        auto scaling = [](const ScalingTemplate& t) {
            nlohmann::json s;
            s["exponent"] = t.exponent;
            s["log_power"] = t.log_power;
            s["centering"] = centering_name(t.centering);
            return s;
        };
        j["hitting_scaling"] = scaling(rep.hitting);
        j["position_scaling"] = scaling(rep.position);
    }
    return j;
}

nlohmann::json estimator_to_json(const EstimatorReport& rep) {
    nlohmann::json j;
    j["name"] = rep.name;
    j["estimate"] = rep.estimate;
    j["stderr"] = rep.stderr_;
    j["method"] = rep.method;
    j["window"] = {rep.window_lo, rep.window_hi};
    j["n_samples"] = rep.n_samples;
    j["seed"] = rep.seed;
    j["pass"] = rep.pass;
    j["target"] = rep.target;
    j["tolerance"] = rep.tolerance;
    return j;
}

namespace {

void append_provenance(std::string* out, const Provenance& prov) {
    for (const auto& [k, v] : prov) {
        out->append("# ");
        out->append(k);
        out->append("=");
        out->append(v);
        out->append("\n");
    }
}

}  // namespace

std::string sweep_csv(const std::vector<SweepRow>& rows, const Provenance& prov) {
    std::string out;
    append_provenance(&out, prov);
    out += "axis1,axis2,delta,delta_tilde,nu,regime,boundary_flags\n";
    for (const auto& r : rows) {
        out += format_g17(r.axis1);
        out += ",";
        out += format_g17(r.axis2);
        out += ",";
        out += format_g17(r.delta);
        out += ",";
        out += format_g17(r.delta_tilde);
        out += ",";
        out += format_g17(r.nu);
        out += ",";
        out += r.regime;
        out += ",";
        out += r.boundary_flags;
        out += "\n";
    }
    return out;
}

std::string trajectory_csv(const std::vector<int64_t>& values, uint64_t stride,
                           const Provenance& prov) {
    std::string out;
    append_provenance(&out, prov);
    out += "step,value\n";
    for (size_t i = 0; i < values.size(); ++i) {
        out += std::to_string(stride * (i + 1));
        out += ",";
        out += std::to_string(values[i]);
        out += "\n";
    }
    return out;
}

std::string value_trajectory_csv(const std::vector<uint64_t>& values, const Provenance& prov) {
    std::string out;
    append_provenance(&out, prov);
    out += "step,value\n";
    for (size_t i = 0; i < values.size(); ++i) {
        out += std::to_string(i + 1);
        out += ",";
        out += std::to_string(values[i]);
        out += "\n";
    }
    return out;
}

std::string coupled_trajectory_csv(const CoupledRecord& rec, const Provenance& prov) {
    std::string out;
    append_provenance(&out, prov);
    out += "step,value,value_hat\n";
    for (size_t i = 0; i < rec.strong.size(); ++i) {
        out += std::to_string(i);
        out += ",";
        out += std::to_string(rec.strong[i]);
        out += ",";
        out += std::to_string(rec.weak[i]);
        out += "\n";
    }
    return out;
}

std::string regen_csv(const std::vector<RegenPair>& regens, const Provenance& prov) {
    std::string out;
    append_provenance(&out, prov);
    out += "k,duration,progeny\n";
    for (size_t i = 0; i < regens.size(); ++i) {
        out += std::to_string(i + 1);
        out += ",";
        out += std::to_string(regens[i].duration);
        out += ",";
        out += std::to_string(regens[i].progeny);
        out += "\n";
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(errc::bad_input, "cannot open output file: " + path);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) fail(errc::bad_input, "write failed: " + path);
}

}  // namespace erw
