#include "doctest.h"

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli/cli_core.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kEuclid = R"({"kind":"euclidean","dim":2})";
const std::string kHyp = R"({"kind":"hyperbolic","dim":2,"k":1.0})";

int run(std::vector<std::string> args) { return finsler::cli::run(args); }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("finsler_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

}  // namespace

TEST_CASE("exit codes follow the documented contract") {
    CHECK(run({"info", "--config", kEuclid}) == 0);
    CHECK(run({"info", "--config", "/nonexistent/config.json"}) == 4);      // io error
    CHECK(run({"info", "--config", R"({"kind":"euclidean")"}) == 2);        // bad JSON
    CHECK(run({"info", "--config", R"({"kind":"nosuch","dim":2})"}) == 2);  // bad model
    CHECK(run({"info"}) == 2);                                              // missing --config
    CHECK(run({"frobnicate", "--config", kEuclid}) == 2);                   // bad subcommand
    CHECK(run({"info", "--config", kEuclid, "--bogus"}) == 2);              // bad flag
    // flat model carries no curvature pinch, so the bound harness refuses it
    CHECK(run({"ball-ratio", "--config", kEuclid, "--r-max", "2", "--steps", "2",
               "--resolution", "16"}) == 2);
    // unreachable integration time exhausts the step budget: internal error class
    CHECK(run({"geodesic", "--config", kEuclid, "--y0", "1,0", "--t", "1e9"}) == 3);
}

TEST_CASE("geodesic writes csv plus manifest, atomically") {
    TempDir tmp;
    const fs::path out = tmp.path / "geo.csv";
    CHECK(run({"geodesic", "--config", kEuclid, "--y0", "1,0", "--t", "2", "--steps", "10",
               "--out", out.string()}) == 0);
    REQUIRE(fs::exists(out));
    CHECK_FALSE(fs::exists(out.string() + ".tmp"));

    const std::string csv = slurp(out);
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "t,x0,x1,v0,v1");
    int rows = 0;
    std::string last;
    while (std::getline(lines, line)) {
        if (!line.empty()) last = line;
        ++rows;
    }
    CHECK(rows == 11);
    // straight unit-speed line: the last row is t=2, x=(2,0), v=(1,0)
    std::istringstream cells(last);
    std::vector<double> v;
    while (std::getline(cells, line, ',')) v.push_back(std::stod(line));
    REQUIRE(v.size() == 5);
    CHECK(v[0] == doctest::Approx(2.0));
    CHECK(v[1] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(std::abs(v[2]) < 1e-12);
    CHECK(v[3] == doctest::Approx(1.0).epsilon(1e-9));

    const fs::path man = out.string() + ".manifest.json";
    REQUIRE(fs::exists(man));
    const json j = json::parse(slurp(man));
    CHECK(j.at("command") == "geodesic");
    CHECK(j.at("config").at("kind") == "euclidean");
    CHECK(j.at("options").at("seed") == 12345);
    CHECK(j.at("outputs")[0] == out.string());
    CHECK(j.contains("version"));
    CHECK(j.contains("wall_clock_sec"));
}

TEST_CASE("curvature scan emits one row per sample with the disk constants") {
    TempDir tmp;
    const fs::path out = tmp.path / "scan.csv";
    CHECK(run({"curvature-scan", "--config", kHyp, "--points", "3", "--out", out.string()}) ==
          0);
    const std::string csv = slurp(out);
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "i,flag,ricci_mean,s_over_f");
    int rows = 0;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        std::istringstream cells(line);
        std::string cell;
        std::vector<double> v;
        while (std::getline(cells, cell, ',')) v.push_back(std::stod(cell));
        REQUIRE(v.size() == 4);
        CHECK(v[1] == doctest::Approx(-1.0).epsilon(1e-3));  // flag
        CHECK(v[2] == doctest::Approx(-1.0).epsilon(1e-3));  // normalized Ricci
        CHECK(std::abs(v[3]) < 1e-3);  // S/F
        ++rows;
    }
    CHECK(rows == 3);
}

TEST_CASE("verify is deterministic: identical reports for identical inputs") {
    TempDir tmp;
    const fs::path a = tmp.path / "verify_a.json";
    const fs::path b = tmp.path / "verify_b.json";
    const std::vector<std::string> base = {"verify",       "--config", kEuclid,
                                           "--resolution", "32",       "--samples", "4096"};
    auto with_out = [&](const fs::path& p) {
        auto args = base;
        args.push_back("--out");
        args.push_back(p.string());
        return args;
    };
    CHECK(run(with_out(a)) == 0);
    CHECK(run(with_out(b)) == 0);
    const std::string ra = slurp(a), rb = slurp(b);
    CHECK(ra == rb);  // byte-identical report
    const json j = json::parse(ra);
    CHECK(j.at("all_pass") == true);
    REQUIRE(j.at("checks").is_array());
    CHECK(j.at("checks").size() >= 5);
    for (const auto& ch : j.at("checks")) CHECK(ch.at("pass") == true);
}

TEST_CASE("entropy subcommand reports the disk growth rate") {
    TempDir tmp;
    const fs::path out = tmp.path / "entropy.json";
    CHECK(run({"entropy", "--config", kHyp, "--t0", "4", "--t1", "7.5", "--resolution", "48",
               "--out", out.string()}) == 0);
    const json j = json::parse(slurp(out));
    CHECK(j.at("slope").get<double>() == doctest::Approx(1.0).epsilon(0.1));
    CHECK(j.at("points").get<int>() >= 2);
    REQUIRE(j.at("window").is_array());
    CHECK(j.at("window")[0].get<double>() == doctest::Approx(4.0));
    // a flat model has no pinch to derive a default window from
    CHECK(run({"entropy", "--config", kEuclid}) == 2);
}

TEST_CASE("monte carlo oracle agrees with the co-area volume in the plane") {
    CHECK(run({"oracle-mc", "--config", kEuclid, "--r", "1.2", "--mc-samples", "50000",
               "--resolution", "24"}) == 0);
}
