#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "crackqc/effective.hpp"
#include "doctest.h"
#include "json.hpp"

using nlohmann::json;

namespace {

struct Run {
    int status = -1;
    std::string out;
};

/// Runs the CLI with the given arguments, capturing stdout only.
Run run(const std::string& args) {
    const std::string cmd = std::string(CRACKQC_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    const int st = pclose(pipe);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "crackqc_cli_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("exit codes of validate") {
        CHECK(run("validate").status == 0);
        CHECK(run("validate --k2 -2").status == 2);
        CHECK(run("validate --k3 0").status == 2);
        CHECK(run("validate --no-such-flag").status == 2);
        CHECK(run("--model nope validate").status == 2);
    }

    TEST_CASE("coefficients report in JSON with the oracle") {
        const auto r = run("coefficients --json --oracle");
        REQUIRE(r.status == 0);
        const json j = json::parse(r.out);
        REQUIRE(j["models"].size() == 4);
        CHECK(j["oracle_pass"].get<bool>());
        CHECK(j["max_abs_diff"].get<double>() <= 1e-8);
        const auto p = crackqc::validate(4.0, 0.4, 20.0, 0.5);
        const auto want = crackqc::exact_coefficients(p, 104);
        for (const auto& m : j["models"]) {
            if (m["model"] != "exact") continue;
            CHECK(m["kappa"].get<double>() == doctest::Approx(want.kappa).epsilon(1e-15));
            CHECK(m["eta"].get<double>() == doctest::Approx(want.eta).epsilon(1e-15));
        }
        CHECK(j["gap"].get<double>() < 0);
    }

    TEST_CASE("zero-length trace") {
        const auto r = run("trace --model exact --smax 0");
        CHECK(r.status == 0);
        CHECK(r.out == "s,u,P,residual\n0,0,0,0\n");
    }

    TEST_CASE("trace of every model to files") {
        const auto out = scratch("curve.csv");
        const auto r = run("trace --model all --out " + out.string());
        REQUIRE(r.status == 0);
        for (const char* m : {"exact", "qc", "qqc", "fqc"}) {
            const auto f = out.parent_path() / (std::string("curve_") + m + ".csv");
            REQUIRE(std::filesystem::exists(f));
            std::istringstream in(read_file(f));
            std::string line, last;
            std::getline(in, line);
            CHECK(line == "s,u,P,residual");
            size_t rows = 0;
            while (std::getline(in, line)) {
                last = line;
                ++rows;
            }
            CHECK(rows > 3000);
            double s, u, P, res;
            REQUIRE(std::sscanf(last.c_str(), "%lf,%lf,%lf,%lf", &s, &u, &P, &res) == 4);
            CHECK(u > 0.55);
            CHECK(std::abs(res) <= 1e-8);
        }
    }

    TEST_CASE("folds report") {
        const auto r = run("folds --json");
        REQUIRE(r.status == 0);
        const json j = json::parse(r.out);
        int exact = 0;
        for (const auto& f : j["folds"]) exact += f["model"] == "exact";
        CHECK(exact == 2);
        CHECK(j["folds"].size() == 8);
    }

    TEST_CASE("curve comparison report") {
        const auto r = run("compare --json");
        REQUIRE(r.status == 0);
        const json j = json::parse(r.out);
        for (const auto& c : j["comparisons"]) CHECK(c["within_bound"].get<bool>());
    }

    TEST_CASE("table reproduction fails at the stated constants") {
        const auto r = run("reproduce-tables --json");
        CHECK(r.status == 1);
        const json j = json::parse(r.out);
        CHECK(j["comparisons"].size() == 16);
        CHECK_FALSE(j["pass"].get<bool>());
        CHECK(j["max_abs_error"].get<double>() > 0.1);
    }

    TEST_CASE("invariant suites") {
        CHECK(run("check").status == 0);
        CHECK(run("check --k1 1 --k2 -0.2 --k3 1 --ucut 1").status == 2);
        const auto a = run("check --json --seed 7");
        const auto b = run("check --json --seed 7");
        REQUIRE(a.status == 0);
        CHECK(a.out == b.out);
        CHECK(json::parse(a.out)["seed"] == 7);
    }

    TEST_CASE("configuration file and flag precedence") {
        const auto cfg = scratch("config.json");
        std::ofstream(cfg) << R"({"k1": 5.0, "n": 40, "m": 30, "model": "qqc"})";
        const auto a = run("--config " + cfg.string() + " coefficients --json");
        REQUIRE(a.status == 0);
        const json ja = json::parse(a.out);
        CHECK(ja["k1"] == 5.0);
        CHECK(ja["n"] == 40);
        REQUIRE(ja["models"].size() == 1);
        CHECK(ja["models"][0]["model"] == "qqc");
        const auto b = run("--config " + cfg.string() + " --k1 6 coefficients --json");
        REQUIRE(b.status == 0);
        CHECK(json::parse(b.out)["k1"] == 6.0);

        const auto bad = scratch("bad.json");
        std::ofstream(bad) << R"({"k1": 5.0, "kappa_one": 2})";
        CHECK(run("--config " + bad.string() + " validate").status == 2);
        std::ofstream(scratch("broken.json")) << "{";
        CHECK(run("--config " + scratch("broken.json").string() + " validate").status == 2);
        CHECK(run("--config /nonexistent/cfg.json validate").status == 2);
    }

    TEST_CASE("unwritable output path") {
        CHECK(run("trace --model exact --out /nonexistent/dir/c.csv").status == 2);
    }

    TEST_CASE("index violations are input errors") {
        CHECK(run("coefficients --model qc --m 2 --n 10").status == 2);
        CHECK(run("coefficients --m 104 --n 104").status == 2);
    }
}
