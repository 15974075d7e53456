// Command line front end: params, classify, sweep, simulate, verify.
// Exit codes: 0 success, 1 statistical suite failure, 2 validation error.

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "erw/env_model.hpp"
#include "erw/errors.hpp"
#include "erw/io.hpp"
#include "erw/parameters.hpp"
#include "erw/regimes.hpp"
#include "erw/rng.hpp"
#include "erw/simulators.hpp"
#include "erw/statistics.hpp"

namespace {

constexpr uint64_t kDefaultSeed = 1729;  // fixed so bare invocations reproduce

struct Options {
    std::string config_path;
    std::string model;
    std::string family;
    uint64_t seed = kDefaultSeed;
    uint64_t paths = 0;  // 0 = per-command default
    uint64_t horizon = 0;
    std::string out;
    std::string format;  // "", "json", "csv"
    double tol_critical = 1e-10;
    double tol_boundary = 1e-9;
    int threads = 1;

    // command extras
    std::string target;
    std::string suite;
    std::string mode = "forward";
    std::string p1_list;
    std::string alpha_grid = "0.05:1.0:20";
    std::string p_grid = "0.51:0.95:20";
    uint64_t y0 = 1;
    uint64_t level = 0;
    uint64_t stride = 1;
    uint64_t n_regen = 0;
    uint64_t value_cap = 0;
    double eps = 0.5;
};

struct GridSpec {
    double lo = 0.0, hi = 0.0;
    int count = 0;
};

GridSpec parse_grid(const std::string& s) {
    GridSpec g;
    if (std::sscanf(s.c_str(), "%lf:%lf:%d", &g.lo, &g.hi, &g.count) != 3 || g.count < 1)
        erw::fail(erw::errc::bad_input, "grid spec must be lo:hi:count, got '" + s + "'");
    return g;
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            erw::fail(erw::errc::bad_input, "bad number in list: '" + item + "'");
        }
    }
    if (out.empty()) erw::fail(erw::errc::bad_input, "empty number list");
    return out;
}

std::string lower_name(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

// Family spec: name(arg1,arg2,...), e.g. geometric(0.5,0.75).
erw::CookieSystem parse_family(const std::string& spec) {
    const auto open = spec.find('(');
    const auto close = spec.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open)
        erw::fail(erw::errc::bad_family_param, "family spec must look like name(a,b,...)");
    const std::string name = lower_name(spec.substr(0, open));
    const std::vector<double> args = parse_double_list(spec.substr(open + 1, close - open - 1));

    if (name == "geometric") {
        if (args.size() != 2) erw::fail(erw::errc::bad_family_param, "geometric(alpha,p1)");
        return erw::geometric_system(args[0], args[1]);
    }
    if (name == "twotype") {
        if (args.size() != 2) erw::fail(erw::errc::bad_family_param, "twotype(alpha,p)");
        return erw::two_type_system(args[0], args[1]);
    }
    if (name == "periodic") return erw::periodic_system(args);
    if (name == "boundedstack") {
        if (args.size() != 5)
            erw::fail(erw::errc::bad_family_param, "boundedstack(alpha,p1,p2,p3,p4)");
        return erw::bounded_stack_system(args[0], args[1], args[2], args[3], args[4]);
    }
    erw::fail(erw::errc::bad_family_param, "unknown family '" + name + "'");
}

erw::CookieSystem resolve_model(const Options& opt) {
    if (!opt.model.empty() && !opt.family.empty())
        erw::fail(erw::errc::bad_input, "give either --model or --family, not both");
    if (!opt.model.empty()) return erw::load_system_json(opt.model);
    if (!opt.family.empty()) return parse_family(opt.family);
    erw::fail(erw::errc::bad_input, "a model is required (--model file or --family spec)");
}

// Overlay config-file values under already-parsed flags: a key applies only
// when its flag was not given on the command line.
void overlay_config(const CLI::App& cmd, Options* opt) {
    if (opt->config_path.empty()) return;
    std::ifstream f(opt->config_path);
    if (!f) erw::fail(erw::errc::bad_input, "cannot read config file: " + opt->config_path);
    nlohmann::json j = nlohmann::json::parse(f, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        erw::fail(erw::errc::bad_input, "config file must hold a JSON object");

    auto flag_given = [&](const std::string& flag) {
        const CLI::Option* o = cmd.get_option_no_throw(flag);
        return o != nullptr && o->count() > 0;
    };
    try {
        auto take_str = [&](const char* key, const std::string& flag, std::string* dst) {
            if (j.contains(key) && !flag_given(flag)) *dst = j.at(key).get<std::string>();
        };
        auto take_u64 = [&](const char* key, const std::string& flag, uint64_t* dst) {
            if (j.contains(key) && !flag_given(flag)) *dst = j.at(key).get<uint64_t>();
        };
        auto take_dbl = [&](const char* key, const std::string& flag, double* dst) {
            if (j.contains(key) && !flag_given(flag)) *dst = j.at(key).get<double>();
        };
        auto take_int = [&](const char* key, const std::string& flag, int* dst) {
            if (j.contains(key) && !flag_given(flag)) *dst = j.at(key).get<int>();
        };

        take_str("model", "--model", &opt->model);
        take_str("family", "--family", &opt->family);
        take_u64("seed", "--seed", &opt->seed);
        take_u64("paths", "--paths", &opt->paths);
        take_u64("horizon", "--horizon", &opt->horizon);
        take_str("out", "--out", &opt->out);
        take_str("format", "--format", &opt->format);
        take_dbl("tol_critical", "--tol-critical", &opt->tol_critical);
        take_dbl("tol_boundary", "--tol-boundary", &opt->tol_boundary);
        take_int("threads", "--threads", &opt->threads);
        take_str("target", "--target", &opt->target);
        take_str("suite", "--suite", &opt->suite);
        take_str("mode", "--mode", &opt->mode);
        take_str("p1", "--p1", &opt->p1_list);
        take_str("alpha_grid", "--alpha-grid", &opt->alpha_grid);
        take_str("p_grid", "--p-grid", &opt->p_grid);
        take_u64("y0", "--y0", &opt->y0);
        take_u64("level", "--level", &opt->level);
        take_u64("stride", "--stride", &opt->stride);
        take_u64("n_regen", "--n-regen", &opt->n_regen);
        take_u64("value_cap", "--value-cap", &opt->value_cap);
        take_dbl("eps", "--eps", &opt->eps);
    } catch (const nlohmann::json::exception& e) {
        erw::fail(erw::errc::bad_input, std::string("config file: ") + e.what());
    }
}

void add_common_flags(CLI::App* cmd, Options* opt) {
    cmd->add_option("--config", opt->config_path, "JSON config file (flags win over file)");
    cmd->add_option("--model", opt->model, "model JSON file with K, p, eta");
    cmd->add_option("--family", opt->family, "builder spec, e.g. geometric(0.5,0.75)");
    cmd->add_option("--seed", opt->seed, "master seed (default 1729)");
    cmd->add_option("--paths", opt->paths, "replica count (0 = command default)");
    cmd->add_option("--horizon", opt->horizon, "step/generation cap (0 = command default)");
    cmd->add_option("--out", opt->out, "output file (default stdout)");
    cmd->add_option("--format", opt->format, "json or csv where the command supports both");
    cmd->add_option("--tol-critical", opt->tol_critical, "criticality tolerance");
    cmd->add_option("--tol-boundary", opt->tol_boundary, "regime boundary snap tolerance");
    cmd->add_option("--threads", opt->threads, "internal fan-out threads");
}

nlohmann::json effective_config(const Options& opt, const std::string& command) {
    nlohmann::json j;
    j["command"] = command;
    j["seed"] = opt.seed;
    if (!opt.model.empty()) j["model"] = opt.model;
    if (!opt.family.empty()) j["family"] = opt.family;
    if (opt.paths) j["paths"] = opt.paths;
    if (opt.horizon) j["horizon"] = opt.horizon;
    j["tol_critical"] = opt.tol_critical;
    j["tol_boundary"] = opt.tol_boundary;
    j["threads"] = opt.threads;
    return j;
}

erw::Provenance provenance_of(const nlohmann::json& cfg) {
    erw::Provenance prov;
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
        const nlohmann::json& v = it.value();
        prov.emplace_back(it.key(), v.is_string() ? v.get<std::string>() : v.dump());
    }
    return prov;
}

void emit(const Options& opt, const std::string& content) {
    if (opt.out.empty()) {
        std::fwrite(content.data(), 1, content.size(), stdout);
    } else {
        erw::write_text_file(opt.out, content);
    }
}

void require_format(const Options& opt, const std::string& natural) {
    if (!opt.format.empty() && opt.format != natural)
        erw::fail(erw::errc::bad_input, "this command emits " + natural + ", not " + opt.format);
}

int cmd_params(const Options& opt) {
    require_format(opt, "json");
    const erw::CookieSystem sys = resolve_model(opt);
    const erw::DerivedParams dp = erw::derived_params(sys);
    const erw::IdentityReport ids = erw::identity_suite(sys);
    nlohmann::json j;
    j["config"] = effective_config(opt, "params");
    j["params"] = erw::params_to_json(sys, dp);
    j["identities"] = erw::identity_report_to_json(ids);
    emit(opt, j.dump(2) + "\n");
    return 0;
}

int cmd_classify(const Options& opt) {
    require_format(opt, "json");
    const erw::CookieSystem sys = resolve_model(opt);
    const erw::RegimeReport rep = erw::classify(sys, opt.tol_critical, opt.tol_boundary);
    nlohmann::json j;
    j["config"] = effective_config(opt, "classify");
    j["regime"] = erw::regime_to_json(rep);
    emit(opt, j.dump(2) + "\n");
    return 0;
}

int cmd_sweep(const Options& opt) {
    require_format(opt, "csv");
    if (opt.family.empty())
        erw::fail(erw::errc::bad_input, "sweep needs --family geometric or twotype");
    std::string fam = opt.family;
    const auto open = fam.find('(');
    if (open != std::string::npos) fam = fam.substr(0, open);
    fam = lower_name(fam);

    const GridSpec ga = parse_grid(opt.alpha_grid);
    const GridSpec gp = parse_grid(opt.p_grid);
    const std::vector<erw::SweepRow> rows =
        erw::phase_sweep(fam, {ga.lo, ga.hi, ga.count}, {gp.lo, gp.hi, gp.count},
                         opt.tol_critical, opt.tol_boundary);

    nlohmann::json cfg = effective_config(opt, "sweep");
    cfg["family"] = fam;
    cfg["alpha_grid"] = opt.alpha_grid;
    cfg["p_grid"] = opt.p_grid;
    emit(opt, erw::sweep_csv(rows, provenance_of(cfg)));
    return 0;
}

int cmd_simulate(const Options& opt) {
    if (opt.target.empty())
        erw::fail(erw::errc::bad_input, "simulate needs --target walk|ublp|vblp|coupled");
    require_format(opt, "csv");
    const erw::CookieSystem sys = resolve_model(opt);
    const uint64_t paths = opt.paths ? opt.paths : 1;
    const uint64_t horizon = opt.horizon ? opt.horizon : 100000;
    const bool dump_trajectory = paths == 1;

    nlohmann::json cfg = effective_config(opt, "simulate");
    cfg["target"] = opt.target;
    cfg["paths"] = paths;
    cfg["horizon"] = horizon;
    cfg["y0"] = opt.y0;
    nlohmann::json summary;
    std::string artifact;

    if (opt.target == "walk") {
        uint64_t censored = 0;
        double mean_final = 0.0;
        for (uint64_t i = 0; i < paths; ++i) {
            erw::WalkConfig wc;
            wc.horizon = horizon;
            wc.record_stride = dump_trajectory ? std::max<uint64_t>(opt.stride, 1) : 0;
            wc.path_index = i;
            const erw::WalkRecord rec = erw::simulate_walk(sys, wc, opt.seed);
            censored += rec.horizon_hit ? 1 : 0;
            mean_final += static_cast<double>(rec.final_position);
            if (dump_trajectory) {
                cfg["stride"] = wc.record_stride;
                artifact = erw::trajectory_csv(rec.positions, wc.record_stride,
                                               provenance_of(cfg));
            }
        }
        summary["censored_fraction"] = static_cast<double>(censored) / static_cast<double>(paths);
        summary["mean_final_position"] = mean_final / static_cast<double>(paths);
    } else if (opt.target == "ublp" || opt.target == "vblp") {
        const bool forward = opt.target == "ublp";
        erw::BlpConfig bc;
        bc.y0 = forward ? opt.y0 : (opt.y0 == 1 ? 0 : opt.y0);
        bc.horizon = horizon;
        // Supercritical forward values grow geometrically and each generation
        // costs O(value); a cap keeps runs bounded (record is marked censored).
        bc.value_cap = opt.value_cap ? opt.value_cap : (forward ? 1000000000ULL : 0);
        bc.n_regenerations = static_cast<int>(opt.n_regen);
        bc.record_values = dump_trajectory && opt.n_regen == 0;
        cfg["y0"] = bc.y0;
        uint64_t censored = 0, alive = 0;
        double mean_lifetime = 0.0;
        for (uint64_t i = 0; i < paths; ++i) {
            bc.path_index = i;
            const erw::BlpRecord rec = forward ? erw::simulate_forward_blp(sys, bc, opt.seed)
                                               : erw::simulate_backward_blp(sys, bc, opt.seed);
            censored += rec.censored ? 1 : 0;
            alive += rec.final_value > 0 ? 1 : 0;
            mean_lifetime += static_cast<double>(rec.lifetime);
            if (dump_trajectory) {
                if (opt.n_regen > 0) {
                    artifact = erw::regen_csv(rec.regens, provenance_of(cfg));
                    summary["regen_rows"] = rec.regens.size();
                } else {
                    artifact = erw::value_trajectory_csv(rec.values, provenance_of(cfg));
                }
            }
        }
        summary["censored_fraction"] = static_cast<double>(censored) / static_cast<double>(paths);
        summary["alive_fraction"] = static_cast<double>(alive) / static_cast<double>(paths);
        summary["mean_first_zero"] = mean_lifetime / static_cast<double>(paths);
    } else if (opt.target == "coupled") {
        if (opt.p1_list.empty())
            erw::fail(erw::errc::bad_input, "coupled needs --p1 as a comma-separated vector");
        const std::vector<double> p1v = parse_double_list(opt.p1_list);
        if (static_cast<int>(p1v.size()) != sys.n())
            erw::fail(erw::errc::dimension_mismatch, "--p1 length must match the model size");
        erw::Vector p1(sys.n());
        for (int i = 0; i < sys.n(); ++i) p1(i) = p1v[static_cast<size_t>(i)];

        erw::CoupledConfig cc;
        cc.mode = opt.mode == "backward" ? erw::CoupledMode::backward : erw::CoupledMode::forward;
        if (opt.mode != "backward" && opt.mode != "forward")
            erw::fail(erw::errc::bad_input, "mode must be forward or backward");
        cc.y0 = opt.y0;
        cc.horizon = horizon;
        // The pure-p1 side is supercritical whenever p1 exceeds the critical
        // base, so forward runs need a cap to terminate.
        cc.value_cap = opt.value_cap ? opt.value_cap : 1000000;
        cfg["eps"] = opt.eps;
        cfg["mode"] = opt.mode;
        uint64_t violations = 0;
        for (uint64_t i = 0; i < paths; ++i) {
            cc.path_index = i;
            const erw::CoupledRecord rec = erw::simulate_coupled_blp(sys, p1, opt.eps, cc, opt.seed);
            violations += rec.violations;
            if (dump_trajectory) artifact = erw::coupled_trajectory_csv(rec, provenance_of(cfg));
        }
        summary["domination_violations"] = violations;
    } else {
        erw::fail(erw::errc::bad_input, "unknown target '" + opt.target + "'");
    }

    summary["config"] = cfg;
    if (!artifact.empty() && !opt.out.empty()) {
        erw::write_text_file(opt.out, artifact);
        const std::string s = summary.dump(2) + "\n";
        std::fwrite(s.data(), 1, s.size(), stdout);
    } else if (!artifact.empty()) {
        std::fwrite(artifact.data(), 1, artifact.size(), stdout);
    } else {
        emit(opt, summary.dump(2) + "\n");
    }
    return 0;
}

int cmd_verify(const Options& opt) {
    require_format(opt, "json");
    if (opt.suite.empty())
        erw::fail(erw::errc::bad_input,
                  "verify needs --suite identities|bijections|moments|tails|speed|limits|"
                  "excursion_delta");
    nlohmann::json cfg = effective_config(opt, "verify");
    cfg["suite"] = opt.suite;
    nlohmann::json details = nlohmann::json::array();
    bool pass = true;

    if (opt.suite == "identities") {
        const uint64_t count = opt.paths ? opt.paths : 50;
        erw::Rng gen(opt.seed ^ erw::domain::generator, 0);
        double worst = 0.0;
        for (uint64_t i = 0; i < count; ++i) {
            const int n = 2 + static_cast<int>(i % 5);
            const erw::CookieSystem sys = erw::random_critical_system(n, gen);
            const erw::IdentityReport rep = erw::identity_suite(sys);
            for (const auto& item : rep.items)
                if (item.applicable) worst = std::max(worst, item.residual);
            if (!rep.pass) {
                pass = false;
                details.push_back({{"system", i}, {"n", n}, {"pass", false}});
            }
        }
        details.push_back({{"systems", count}, {"worst_residual", worst}});
    } else if (opt.suite == "bijections") {
        const erw::CookieSystem sys = resolve_model(opt);
        const uint64_t paths = opt.paths ? opt.paths : 2000;
        const uint64_t horizon = opt.horizon ? opt.horizon : 1000000;
        const int64_t level = opt.level ? static_cast<int64_t>(opt.level) : 100;

        // The replay costs O(range^2) on transient instances, so this check
        // runs on a short walk regardless of the hitting-check horizon.
        const erw::PathwiseReport pw = erw::verify_walk_forward_coupling(
            sys, 5, std::min<uint64_t>(paths, 25), std::min<uint64_t>(horizon, 2000), opt.seed);
        pass = pass && pw.domination_violations == 0 && pw.equality_violations == 0;
        details.push_back({{"check", "walk_forward_pathwise"},
                           {"paths", pw.paths},
                           {"gamma_completed", pw.gamma_completed},
                           {"domination_violations", pw.domination_violations},
                           {"equality_violations", pw.equality_violations}});

        const erw::HittingBackwardReport hb =
            erw::check_hitting_vs_backward(sys, level, paths, horizon, opt.seed, opt.threads);
        pass = pass && hb.pass;
        details.push_back({{"check", "hitting_vs_backward"},
                           {"ks_sum", hb.ks_sum},
                           {"ks_max", hb.ks_max},
                           {"threshold", hb.threshold},
                           {"missed_fraction", hb.missed_fraction},
                           {"pass", hb.pass}});
    } else if (opt.suite == "moments") {
        const erw::CookieSystem sys = resolve_model(opt);
        const erw::DerivedParams dp = erw::derived_params(sys);
        const uint64_t paths = opt.paths ? opt.paths : 20000;
        for (const uint64_t n : {uint64_t{50}, uint64_t{100}, uint64_t{200}}) {
            for (const bool forward : {true, false}) {
                const erw::MomentCheck mc =
                    erw::blp_increment_moments(sys, dp, forward, n, paths, opt.seed, opt.threads);
                const double nd = static_cast<double>(n);
                const double scale = static_cast<double>(mc.m_eff) / nd;
                const double var_n = mc.var_per * scale;
                const double var_se_n = mc.var_se * scale;
                const bool mean_ok = std::abs(mc.mean - mc.mean_pred) <= 3.0 * mc.mean_se;
                const bool var_ok = std::abs(var_n - mc.var_pred * scale) <=
                                    std::max(3.0 * var_se_n, 5.0 / nd);
                pass = pass && mean_ok && var_ok;
                details.push_back({{"process", forward ? "ublp" : "vblp"},
                                   {"n", n},
                                   {"mean", mc.mean},
                                   {"mean_pred", mc.mean_pred},
                                   {"mean_se", mc.mean_se},
                                   {"var_over_n", var_n},
                                   {"var_pred", mc.var_pred * scale},
                                   {"var_se", var_se_n},
                                   {"pass", mean_ok && var_ok}});
            }
        }
    } else if (opt.suite == "tails") {
        const erw::CookieSystem sys = resolve_model(opt);
        const erw::DerivedParams dp = erw::derived_params(sys);
        const uint64_t paths = opt.paths ? opt.paths : 20000;
        const uint64_t horizon = opt.horizon ? opt.horizon : 10000;
        const double tol = 0.15;

        erw::BlpConfig bc;
        bc.horizon = horizon;
        bc.y0 = 0;
        const auto vrecs = erw::sample_backward(sys, bc, paths, opt.seed, opt.threads);
        const auto vlife = erw::lifetimes_of(vrecs);
        const auto vprog = erw::progenies_of(vrecs);
        bc.y0 = opt.y0;
        const auto urecs = erw::sample_forward(sys, bc, paths, opt.seed, opt.threads);
        const auto ulife = erw::lifetimes_of(urecs);

        const double hi_life = static_cast<double>(horizon) / 10.0;
        const auto e_vlife =
            erw::tail_exponent_regression(vlife, 10.0, hi_life, 8, 200, opt.seed);
        const auto e_vprog =
            erw::tail_exponent_regression(vprog, 30.0, hi_life * 10.0, 8, 200, opt.seed);
        const auto e_ulife =
            erw::tail_exponent_regression(ulife, 10.0, hi_life, 8, 200, opt.seed);

        struct Row {
            const char* name;
            const erw::TailEstimate* est;
            double target;
            bool applicable;
        };
        const Row rows[] = {
            {"vblp_lifetime", &e_vlife, dp.delta, dp.delta > 0.0},
            {"vblp_progeny", &e_vprog, dp.delta / 2.0, dp.delta > 0.0},
            {"ublp_lifetime", &e_ulife, 1.0 - dp.delta, dp.delta < 1.0},
        };
        for (const Row& r : rows) {
            const bool ok = !r.applicable || std::abs(r.est->exponent - r.target) <= tol;
            pass = pass && ok;
            details.push_back({{"tail", r.name},
                               {"exponent", r.est->exponent},
                               {"stderr", r.est->stderr_},
                               {"target", r.target},
                               {"tolerance", tol},
                               {"applicable", r.applicable},
                               {"n_censored", r.est->n_censored},
                               {"pass", ok}});
        }
    } else if (opt.suite == "speed") {
        const erw::CookieSystem sys = resolve_model(opt);
        const erw::RegimeReport reg = erw::classify(sys, opt.tol_critical, opt.tol_boundary);
        const uint64_t paths = opt.paths ? opt.paths : 32;
        const uint64_t horizon = opt.horizon ? opt.horizon : 1000000;
        const erw::SpeedReport sp = erw::speed_estimates(sys, horizon, paths, opt.seed, opt.threads);
        if (reg.speed == erw::SpeedSign::positive) {
            const double rel = std::abs(sp.v_direct - sp.v_regen) /
                               std::max(1e-12, std::abs(sp.v_direct));
            pass = rel <= 0.05 && sp.v_direct > 0.0;
            details.push_back({{"v_direct", sp.v_direct},
                               {"v_regen", sp.v_regen},
                               {"relative_gap", rel},
                               {"regen_count", sp.regen_count},
                               {"pass", pass}});
        } else {
            pass = std::abs(sp.v_direct) < 0.01;
            details.push_back({{"v_direct", sp.v_direct},
                               {"v_direct_se", sp.v_direct_se},
                               {"predicted", "zero-or-negative speed"},
                               {"pass", pass}});
        }
    } else if (opt.suite == "limits") {
        const erw::CookieSystem sys = resolve_model(opt);
        erw::LimitLawConfig lc;
        lc.n = opt.level ? opt.level : 10000;
        lc.replicas = opt.paths ? opt.paths : 500;
        lc.horizon_cap = opt.horizon ? opt.horizon : 400000000;
        lc.threads = opt.threads;
        const erw::LimitLawReport rep = erw::limit_law_check(sys, lc, opt.seed);
        const bool gaussian = rep.regime == erw::LimitCase::non_critical_gaussian ||
                              rep.regime == erw::LimitCase::gaussian_above_four ||
                              rep.regime == erw::LimitCase::gaussian_log_at_four;
        const double threshold = gaussian ? 0.05 : 0.07;
        pass = rep.ks < threshold;
        details.push_back({{"regime", erw::limit_case_name(rep.regime)},
                           {"ks", rep.ks},
                           {"threshold", threshold},
                           {"scale", rep.scale},
                           {"center", rep.center},
                           {"censored_fraction", rep.censored_fraction},
                           {"pass", pass}});
    } else if (opt.suite == "excursion_delta") {
        const erw::CookieSystem sys = resolve_model(opt);
        const erw::DerivedParams dp = erw::derived_params(sys);
        const uint64_t n = opt.level ? opt.level : 2000;
        const uint64_t paths = opt.paths ? opt.paths : 10000;
        const erw::ExcursionDeltaReport rep =
            erw::excursion_delta(sys, n, paths, opt.seed, opt.threads);
        pass = std::abs(rep.delta_hat - dp.delta) <= 3.0 * rep.se;
        details.push_back({{"delta_hat", rep.delta_hat},
                           {"stderr", rep.se},
                           {"delta_closed_form", dp.delta},
                           {"rho_hat", rep.rho_hat},
                           {"nu_hat", rep.nu_hat},
                           {"pass", pass}});
    } else {
        erw::fail(erw::errc::bad_input, "unknown suite '" + opt.suite + "'");
    }

    nlohmann::json j;
    j["config"] = cfg;
    j["suite"] = opt.suite;
    j["pass"] = pass;
    j["details"] = details;
    emit(opt, j.dump(2) + "\n");
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"excited random walk toolkit: closed-form parameters, regime "
                 "classification, exact simulation, statistical verification"};
    app.require_subcommand(1);
    Options opt;

    CLI::App* c_params = app.add_subcommand("params", "derived parameters + identity residuals");
    add_common_flags(c_params, &opt);
    CLI::App* c_classify = app.add_subcommand("classify", "regime classification report");
    add_common_flags(c_classify, &opt);

    CLI::App* c_sweep = app.add_subcommand("sweep", "phase-diagram grid as CSV");
    add_common_flags(c_sweep, &opt);
    c_sweep->add_option("--alpha-grid", opt.alpha_grid, "axis1 grid lo:hi:count");
    c_sweep->add_option("--p-grid", opt.p_grid, "axis2 grid lo:hi:count");

    CLI::App* c_sim = app.add_subcommand("simulate", "walk / process trajectories and aggregates");
    add_common_flags(c_sim, &opt);
    c_sim->add_option("--target", opt.target, "walk | ublp | vblp | coupled");
    c_sim->add_option("--y0", opt.y0, "initial value (ublp default 1, vblp default 0)");
    c_sim->add_option("--stride", opt.stride, "walk trajectory recording stride");
    c_sim->add_option("--n-regen", opt.n_regen, "vblp: stop after this many regenerations");
    c_sim->add_option("--value-cap", opt.value_cap, "forward value cap (0 = none)");
    c_sim->add_option("--eps", opt.eps, "coupled: strength decay rate in (0,1]");
    c_sim->add_option("--p1", opt.p1_list, "coupled: dominating strengths, comma separated");
    c_sim->add_option("--mode", opt.mode, "coupled: forward | backward");

    CLI::App* c_verify = app.add_subcommand("verify", "statistical verification suites");
    add_common_flags(c_verify, &opt);
    c_verify->add_option("--suite", opt.suite,
                         "identities | bijections | moments | tails | speed | limits | "
                         "excursion_delta");
    c_verify->add_option("--level", opt.level, "hitting level / conditioning value");
    c_verify->add_option("--y0", opt.y0, "initial value for forward tails");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    try {
        overlay_config(*sub, &opt);
        if (sub == c_params) return cmd_params(opt);
        if (sub == c_classify) return cmd_classify(opt);
        if (sub == c_sweep) return cmd_sweep(opt);
        if (sub == c_sim) return cmd_simulate(opt);
        if (sub == c_verify) return cmd_verify(opt);
        return 2;
    } catch (const erw::Error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "BadInput: %s\n", e.what());
        return 2;
    }
}
