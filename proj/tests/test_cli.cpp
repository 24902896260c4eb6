#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "sphstein/sample.hpp"

namespace {

namespace fs = std::filesystem;

std::string cli_path() {
    const char* env = std::getenv("SPHSTEIN_CLI");
    return env ? env : "";
}

std::string golden_dir() {
    const char* env = std::getenv("SPHSTEIN_GOLDEN");
    return env ? env : "";
}

int run(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string run_capture(const std::string& args) {
    const auto out = fs::temp_directory_path() / "sphstein_cli_out.txt";
    const std::string cmd = cli_path() + " " + args + " >" + out.string() + " 2>&1";
    (void)!std::system(cmd.c_str());
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    fs::remove(out);
    return ss.str();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("exit codes: usage 64, missing input 66") {
    REQUIRE_FALSE(cli_path().empty());
    CHECK(run("--definitely-not-a-flag") == 64);
    CHECK(run("test --statistic stein") == 64);  // missing required --data
    CHECK(run("test --data /nonexistent/file.csv") == 66);
    CHECK(run("power --config /nonexistent/cfg.json --out /tmp/t.csv") == 66);
    CHECK(run("--help") == 0);
}

TEST_CASE("sample command is deterministic and produces unit rows") {
    const auto dir = fs::temp_directory_path();
    const auto a = dir / "sph_cli_a.csv";
    const auto b = dir / "sph_cli_b.csv";
    const std::string model = R"('{"kind":"vmf","kappa":5.0,"p":3}')";
    CHECK(run("sample --model " + model + " --n 40 --seed 3 --out " + a.string()) == 0);
    CHECK(run("sample --model " + model + " --n 40 --seed 3 --out " + b.string()) == 0);
    CHECK(slurp(a) == slurp(b));
    const auto sample = sphstein::load_sample_csv(a.string());
    CHECK(sample.n() == 40);
    CHECK(sample.p() == 3);
    fs::remove(a);
    fs::remove(b);
}

TEST_CASE("test command rejects a concentrated alternative and honors --json") {
    const auto dir = fs::temp_directory_path();
    const auto data = dir / "sph_cli_vmf.csv";
    REQUIRE(run("sample --model '{\"kind\":\"vmf\",\"kappa\":5.0,\"p\":3}' --n 100 --seed 11 --out " +
                data.string()) == 0);
    const auto out = run_capture("test --data " + data.string() +
                                 " --statistic stein --lambda 1 --m 800 --seed 5 --json");
    CHECK(out.find("\"reject\": true") != std::string::npos);
    CHECK(out.find("\"p_value\"") != std::string::npos);

    // single observation degenerates to the diagonal statistic but still runs
    const auto one = dir / "sph_cli_one.csv";
    {
        std::ofstream os(one);
        os << "1,0,0\n";
    }
    CHECK(run("test --data " + one.string() + " --m 200 --seed 2") == 0);
    fs::remove(data);
    fs::remove(one);
}

TEST_CASE("malformed rows are listed unless --normalize") {
    const auto dir = fs::temp_directory_path();
    const auto bad = dir / "sph_cli_bad.csv";
    {
        std::ofstream os(bad);
        os << "1,0,0\n0.5,0.5,0.5\n0,1,0\n";
    }
    const auto out = run_capture("test --data " + bad.string() + " --m 200");
    CHECK(out.find("row") != std::string::npos);
    CHECK(out.find('2') != std::string::npos);
    CHECK(run("test --data " + bad.string() + " --m 200 --normalize --seed 4") == 0);
    fs::remove(bad);
}

TEST_CASE("critval command emits the documented csv") {
    const auto dir = fs::temp_directory_path();
    const auto out = dir / "sph_cli_crit.csv";
    CHECK(run("critval --statistic stein --lambda 1 --n 30 --p 3 --m 500 --seed 6 --out " +
              out.string()) == 0);
    const auto text = slurp(out);
    CHECK(text.rfind("statistic,n,p,lambda,alpha,M,seed,critical_value\n", 0) == 0);
    CHECK(text.find("stein,30,3,1,") != std::string::npos);
    fs::remove(out);
}

TEST_CASE("tune command writes scores with one selected row") {
    const auto dir = fs::temp_directory_path();
    const auto data = dir / "sph_cli_tunedata.csv";
    REQUIRE(run("sample --model '{\"kind\":\"vmf\",\"kappa\":2.0,\"p\":3}' --n 60 --seed 21 --out " +
                data.string()) == 0);
    const auto out = dir / "sph_cli_scores.csv";
    CHECK(run("tune --data " + data.string() +
              " --mode kfold --folds 6 --grid-min 0.5 --grid-max 2.0 --grid-step 0.5 --seed 8 --out " +
              out.string()) == 0);
    const auto text = slurp(out);
    CHECK(text.rfind("lambda,score,selected\n", 0) == 0);
    int selected = 0;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line))
        if (line.find(",true") != std::string::npos) ++selected;
    CHECK(selected == 1);
    fs::remove(data);
    fs::remove(out);
}

TEST_CASE("field command round trips a small grid") {
    const auto dir = fs::temp_directory_path();
    const auto out = dir / "sph_cli_field.csv";
    CHECK(run("field --kind rho_null --lambda 1 --resolution 13x7 --out " + out.string()) == 0);
    const auto text = slurp(out);
    CHECK(text.rfind("lon,lat,hammer_x,hammer_y,value\n", 0) == 0);
    int rows = 0;
    std::stringstream ss(text);
    std::string line;
    std::getline(ss, line);
    while (std::getline(ss, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 13 * 7);
    fs::remove(out);
}

TEST_CASE("power command matches the committed golden table") {
    REQUIRE_FALSE(golden_dir().empty());
    const auto dir = fs::temp_directory_path();
    const auto cfg = dir / "sph_cli_cfg.json";
    {
        std::ofstream os(cfg);
        os << R"({"p": 2, "sample_sizes": [10], "alpha": 0.05, "m_critical": 400,
                  "m_power": 400, "seed": 12345,
                  "tests": [{"id": "rayleigh"}, {"id": "stein", "lambda": 1.0}],
                  "alternatives": [{"kind": "uniform"}, {"kind": "vmf", "kappa": 1.0}]})";
    }
    const auto out = dir / "sph_cli_power.csv";
    CHECK(run("power --config " + cfg.string() + " --out " + out.string()) == 0);
    const auto got = slurp(out);
    const auto want = slurp(fs::path(golden_dir()) / "power_mini.csv");
    CHECK(got == want);
    CHECK(fs::exists(out.string() + ".meta.json"));
    fs::remove(cfg);
    fs::remove(out);
    fs::remove(out.string() + ".meta.json");
}

TEST_SUITE_END();
