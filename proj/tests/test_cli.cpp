// End-to-end CLI checks: exit codes, output shape, determinism, error names.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#ifndef ERW_CLI_PATH
#error "ERW_CLI_PATH must point at the cli binary"
#endif

namespace {

struct RunResult {
    int code = -1;
    std::string out, err;
};

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

RunResult run(const std::string& args) {
    const std::string out = "/tmp/erw_cli_test_out.txt";
    const std::string err = "/tmp/erw_cli_test_err.txt";
    const std::string cmd =
        std::string(ERW_CLI_PATH) + " " + args + " > " + out + " 2> " + err;
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

}  // namespace

TEST_CASE("params emits the full parameter block with provenance") {
    auto r = run("params --family 'geometric(0.5,0.75)'");
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["config"]["seed"] == 1729);
    CHECK(j["config"]["family"] == "geometric(0.5,0.75)");
    auto& p = j["params"];
    for (const char* key : {"mu", "pbar", "lambda", "Pi", "Pi_tilde", "pi", "pi_tilde", "g",
                            "g_tilde", "r", "r_tilde", "nu", "nu_tilde", "delta", "delta_tilde",
                            "n", "K", "p", "eta"}) {
        INFO(key);
        CHECK(p.contains(key));
    }
    CHECK(p["delta"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(j["identities"]["pass"] == true);
}

TEST_CASE("classify reports regime and scalings") {
    auto r = run("classify --family 'geometric(0.1,0.9)'");
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["regime"]["label"] == "Gaussian_gt_4");
    CHECK(j["regime"]["delta"].get<double>() == doctest::Approx(8.0).epsilon(1e-9));
    CHECK(j["regime"]["hitting_scaling"]["exponent"] == doctest::Approx(0.5));
}

TEST_CASE("sweep emits one csv row per grid point") {
    auto r = run("sweep --family geometric --alpha-grid 0.1:1.0:10 --p-grid 0.55:0.95:9");
    REQUIRE(r.code == 0);
    int rows = 0, comments = 0;
    std::istringstream ss(r.out);
    std::string line;
    bool saw_header = false;
    while (std::getline(ss, line)) {
        if (line.rfind("#", 0) == 0) {
            ++comments;
        } else if (line.rfind("axis1,", 0) == 0) {
            saw_header = true;
        } else if (!line.empty()) {
            ++rows;
        }
    }
    CHECK(saw_header);
    CHECK(rows == 90);
    CHECK(comments >= 4);
}

TEST_CASE("identical invocations produce identical bytes") {
    const char* cmd = "simulate --target walk --family 'geometric(0.2,0.55)' "
                      "--horizon 20000 --stride 50";
    auto a = run(cmd);
    auto b = run(cmd);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("step,value") != std::string::npos);

    auto c = run(std::string(cmd) + " --seed 5");
    CHECK(c.out != a.out);
}

TEST_CASE("aggregate simulation reports censoring") {
    auto r = run("simulate --target vblp --family 'geometric(0.5,0.75)' --paths 50 "
                 "--horizon 100000");
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j.contains("censored_fraction"));
    CHECK(j["config"]["paths"] == 50);
}

TEST_CASE("regeneration output has the requested row count") {
    auto r = run("simulate --target vblp --family 'geometric(0.5,0.75)' --n-regen 40");
    REQUIRE(r.code == 0);
    int rows = 0;
    std::istringstream ss(r.out);
    std::string line;
    while (std::getline(ss, line))
        if (!line.empty() && line[0] != '#' && line.rfind("k,", 0) != 0) ++rows;
    CHECK(rows == 40);
}

TEST_CASE("validation failures exit 2 with the kind on stderr") {
    const std::string model = "/tmp/erw_cli_test_model.json";
    {
        std::ofstream f(model);
        f << "{\"K\": [[0.4,0.5],[0.5,0.5]], \"p\": [0.6,0.6], \"eta\": [1.0,0.0]}";
    }
    auto r = run("params --model " + model);
    CHECK(r.code == 2);
    CHECK(r.err.find("NotStochastic") == 0);

    auto r2 = run("params --family 'geometric(0.5)'");
    CHECK(r2.code == 2);
    CHECK(r2.err.find("BadFamilyParam") == 0);

    auto r3 = run("params");
    CHECK(r3.code == 2);
    CHECK(r3.err.find("BadInput") == 0);

    auto r4 = run("simulate --family 'geometric(0.5,0.75)' --target warp");
    CHECK(r4.code == 2);

    auto r5 = run("wibble");
    CHECK(r5.code == 2);
}

TEST_CASE("config file fills gaps and flags win") {
    const std::string cfg = "/tmp/erw_cli_test_cfg.json";
    {
        std::ofstream f(cfg);
        f << "{\"family\": \"geometric(0.5,0.75)\", \"seed\": 99}";
    }
    auto r = run("params --config " + cfg);
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["config"]["seed"] == 99);
    CHECK(j["config"]["family"] == "geometric(0.5,0.75)");

    auto r2 = run("params --config " + cfg + " --seed 7");
    auto j2 = nlohmann::json::parse(r2.out);
    CHECK(j2["config"]["seed"] == 7);
}

TEST_CASE("verify identities: quick pass") {
    auto r = run("verify --suite identities --paths 10");
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["pass"] == true);
    CHECK(j["suite"] == "identities");
}

TEST_CASE("the trajectory file lands at --out with the summary on stdout") {
    const std::string out_file = "/tmp/erw_cli_test_traj.csv";
    std::remove(out_file.c_str());
    auto r = run("simulate --target ublp --family 'geometric(0.5,0.75)' --y0 5 "
                 "--horizon 1000 --out " + out_file);
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);  // summary on stdout
    CHECK(j.contains("censored_fraction"));
    const std::string traj = slurp(out_file);
    CHECK(traj.find("step,value") != std::string::npos);
}
