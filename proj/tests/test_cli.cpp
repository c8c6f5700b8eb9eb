#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string cli = CFWET_CLI_PATH;

int run(const std::string& args) {
    const std::string cmd = cli + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("cfwet_cli_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write_small_config(const fs::path& p) {
    std::ofstream out(p);
    out << R"({"num_aps": 2, "antennas_per_ap": 4, "num_ues": 3,)"
        << R"( "shadowing_enabled": false, "battery_capacity_j": 1e-4,)"
        << R"( "num_states": 100})";
}

}  // namespace

TEST_CASE("complexity subcommand writes its artifacts and exits cleanly") {
    TempDir dir("complexity");
    CHECK(run("complexity --out " + dir.path.string()) == 0);
    CHECK(fs::exists(dir.path / "complexity.csv"));
    CHECK(fs::exists(dir.path / "manifest.json"));
    const std::string manifest = slurp(dir.path / "manifest.json");
    CHECK(manifest.find("\"command\"") != std::string::npos);
    CHECK(manifest.find("\"config_hash\"") != std::string::npos);
}

TEST_CASE("help and error paths use distinct exit codes") {
    CHECK(run("--help") == 0);
    CHECK(run("no-such-command") == 2);
    CHECK(run("simulate --no-such-flag") == 2);
    TempDir dir("badcfg");
    std::ofstream(dir.path / "bad.json") << R"({"num_asp": 4})";
    CHECK(run("simulate --config " + (dir.path / "bad.json").string() + " --out " +
              dir.path.string()) == 1);
}

TEST_CASE("simulation artifacts are byte-reproducible for a fixed seed") {
    TempDir a("sim_a"), b("sim_b");
    const fs::path cfgp = a.path / "cfg.json";
    write_small_config(cfgp);
    const std::string base = "simulate --config " + cfgp.string() +
                             " --seed 7 --scheme ccpa --mode gamma --intervals 2000 --out ";
    REQUIRE(run(base + a.path.string()) == 0);
    REQUIRE(run(base + b.path.string()) == 0);
    for (const char* name : {"trajectory.csv", "summary.csv", "manifest.json"}) {
        CHECK(fs::exists(a.path / name));
        CHECK(slurp(a.path / name) == slurp(b.path / name));
        CHECK(!slurp(a.path / name).empty());
    }
}

TEST_CASE("statistics validation passes on a small network") {
    TempDir dir("vstats");
    const fs::path cfgp = dir.path / "cfg.json";
    write_small_config(cfgp);
    CHECK(run("validate-stats --config " + cfgp.string() +
              " --seed 3 --samples 20000 --out " + dir.path.string()) == 0);
    CHECK(fs::exists(dir.path / "validate_stats.csv"));
}

TEST_CASE("power-allocation solve emits allocation and trace") {
    TempDir dir("solvepa");
    const fs::path cfgp = dir.path / "cfg.json";
    write_small_config(cfgp);
    CHECK(run("solve-pa --config " + cfgp.string() +
              " --seed 5 --scheme opt --target 0 --trace-solver --out " +
              dir.path.string()) == 0);
    CHECK(fs::exists(dir.path / "allocation.csv"));
    CHECK(fs::exists(dir.path / "solver_trace.csv"));
    const std::string manifest = slurp(dir.path / "manifest.json");
    CHECK(manifest.find("objective_W") != std::string::npos);
}
