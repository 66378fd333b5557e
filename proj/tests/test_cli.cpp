#include <doctest.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kCli = OBSV_CLI_PATH;
const std::string kScenarios = SCENARIO_DIR;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("obsv_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

int run(const std::string& args) {
    std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json slurp_json(const fs::path& p) { return json::parse(slurp(p)); }

}  // namespace

TEST_CASE("counterexample subcommand produces the report and manifest") {
    TempDir dir;
    int rc = run("counterexample --out " + dir.path.string());
    CHECK(rc == 0);

    auto report = slurp_json(dir.path / "counterexample_report.json");
    REQUIRE(report.is_array());
    CHECK(report.size() == 3);
    for (const auto& entry : report) {
        CHECK(entry.contains("delta"));
        CHECK(entry["gramian_min_eig"].get<double>() <= 1e-8);
        CHECK(entry["m_integral_min_eig"].get<double>() >= 1e-3);
        CHECK(entry["witness"].size() == 2);
    }
    CHECK(fs::exists(dir.path / "witness_trace.csv"));

    auto manifest = slurp_json(dir.path / "run_manifest.json");
    CHECK(manifest["subcommand"] == "counterexample");
    CHECK(manifest["tool_version"] == "0.1.0");
    CHECK(manifest.contains("input_hash"));
}

TEST_CASE("pe-check verdicts and exit codes") {
    TempDir dir;
    SUBCASE("persistently excited scenario passes") {
        int rc = run("pe-check --config " + kScenarios +
                     "/three_beacons.json --out " + dir.path.string());
        CHECK(rc == 0);
        auto report = slurp_json(dir.path / "pe_report.json");
        CHECK(report["pass"].get<bool>());
        CHECK(report["mu"].get<double>() >= 1e-3);
    }
    SUBCASE("collinear beacons with constant velocity fail") {
        int rc = run("pe-check --config " + kScenarios +
                     "/two_beacons_collinear.json --out " + dir.path.string());
        CHECK(rc == 1);
        auto report = slurp_json(dir.path / "pe_report.json");
        CHECK_FALSE(report["pass"].get<bool>());
    }
}

TEST_CASE("gramian subcommand on the builtin system and a scenario") {
    TempDir dir;
    SUBCASE("builtin counterexample is singular, M-integral is not") {
        int rc = run("gramian --config builtin:counterexample --t 0 --delta "
                     "6.283185307179586 --out " +
                     dir.path.string());
        CHECK(rc == 0);
        auto report = slurp_json(dir.path / "gramian_report.json");
        CHECK(report["min_eig"].get<double>() <= 1e-8);

        // The chain stack cannot rescue the Gramian: N_1 Phi x is the
        // derivative of C Phi x, which vanishes along the null trajectory.
        TempDir dir2;
        rc = run("gramian --config builtin:counterexample --use-m --t 0 "
                 "--delta 6.283185307179586 --out " +
                 dir2.path.string());
        CHECK(rc == 0);
        auto ext = slurp_json(dir2.path / "gramian_report.json");
        CHECK(ext["min_eig"].get<double>() <= 1e-8);
    }
    SUBCASE("lifted scenario Gramian with --use-m") {
        int rc = run("gramian --config " + kScenarios +
                     "/three_beacons.json --use-m --t 0 --out " +
                     dir.path.string());
        CHECK(rc == 0);
        auto report = slurp_json(dir.path / "gramian_report.json");
        CHECK(report["min_eig"].get<double>() >= 1e-4);
    }
}

TEST_CASE("simulate subcommand writes a trace and summary") {
    TempDir dir;
    int rc = run("simulate --config " + kScenarios +
                 "/three_beacons.json --seed 7 --out " + dir.path.string());
    CHECK(rc == 0);
    auto summary = slurp_json(dir.path / "summary.json");
    CHECK(summary["final_pos_err"].get<double>() <= 1e-3);
    CHECK_FALSE(summary["unobservable_suspected"].get<bool>());
    std::string trace = slurp(dir.path / "trace.csv");
    CHECK(trace.rfind("t,x1,", 0) == 0);
}

TEST_CASE("simulate is byte-deterministic for a fixed seed") {
    TempDir a, b;
    std::string cfg = kScenarios + "/single_beacon_circular_u.json";
    CHECK(run("simulate --config " + cfg + " --seed 11 --out " +
              a.path.string()) == 0);
    CHECK(run("simulate --config " + cfg + " --seed 11 --out " +
              b.path.string()) == 0);
    CHECK(slurp(a.path / "trace.csv") == slurp(b.path / "trace.csv"));
    CHECK(slurp(a.path / "summary.json") == slurp(b.path / "summary.json"));
}

TEST_CASE("exit codes for bad invocations") {
    TempDir dir;
    SUBCASE("unknown subcommand is a usage error") {
        CHECK(run("frobnicate") == 64);
    }
    SUBCASE("negative delta is a usage error") {
        CHECK(run("gramian --config builtin:counterexample --delta -1 --out " +
                  dir.path.string()) == 64);
    }
    SUBCASE("even Simpson node count is a usage error") {
        CHECK(run("gramian --config builtin:counterexample --nodes 200 "
                  "--out " +
                  dir.path.string()) == 64);
    }
    SUBCASE("malformed JSON config") {
        fs::path bad = dir.path / "bad.json";
        std::ofstream(bad) << "{ not json";
        CHECK(run("pe-check --config " + bad.string() + " --out " +
                  dir.path.string()) == 65);
    }
    SUBCASE("missing config file") {
        CHECK(run("pe-check --config " + dir.path.string() +
                  "/nope.json --out " + dir.path.string()) == 66);
    }
    SUBCASE("unwritable output directory") {
        // Nesting the out dir under a regular file defeats create_directories
        // even for root, unlike a mode-0555 directory.
        fs::path blocker = dir.path / "blocker";
        std::ofstream(blocker) << "x";
        CHECK(run("counterexample --out " + (blocker / "out").string()) == 2);
    }
}
