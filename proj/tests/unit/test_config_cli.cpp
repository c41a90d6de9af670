#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <numbers>

#include "ccsim/cli.hpp"
#include "ccsim/config.hpp"
#include "ccsim/errors.hpp"

using namespace ccsim;
namespace fs = std::filesystem;

TEST_CASE("empty config yields the baseline defaults") {
    const RunConfig cfg = parse_config("");
    CHECK(cfg.P == 2e-7);
    CHECK(cfg.Vm_scale == 1e-5);
    CHECK(cfg.KM2 == 3.5);
    CHECK(cfg.ub_bar == 140.0);
    CHECK(cfg.grid_n == 2001);
    const ModelParams p = cfg.to_params();
    CHECK(p.K1 == doctest::Approx(2.0 * std::numbers::pi * 1e-11).epsilon(1e-12));
}

TEST_CASE("values round-trip through parsing") {
    const RunConfig cfg = parse_config("[model]\nKM2 = 3.5\nP = 4.25e-7\n");
    CHECK(cfg.to_params().pump.KM2 == 3.5);
    CHECK(cfg.P == 4.25e-7);
}

TEST_CASE("parse errors carry line numbers") {
    CHECK_THROWS_WITH_AS(parse_config("[model]\nL = 2e-3\nbogus_line\n"),
                         doctest::Contains("line 3"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("[model]\nnot_a_key = 1\n"),
                         doctest::Contains("unknown key 'model.not_a_key'"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("[model\nL = 2e-3\n"), doctest::Contains("line 1"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("[model]\nL = banana\n"), doctest::Contains("line 2"),
                         ConfigError);
}

TEST_CASE("validation rejects a collapsed epithelium, naming the cross section") {
    CHECK_THROWS_WITH_AS(parse_config("[model]\nr1e = 5e-6\n"), doctest::Contains("a3"),
                         ConfigError);
}

TEST_CASE("comments and blank lines are tolerated") {
    const RunConfig cfg = parse_config("# comment\n\n[grid]\nn = 501 ; inline\n");
    CHECK(cfg.grid_n == 501);
}

TEST_CASE("manifest serialization is a parse fixed point") {
    RunConfig cfg;
    cfg.P = 3.7e-7;
    cfg.grid_n = 801;
    cfg.scheme = "implicit-exchange";
    cfg.boundary_mode = "exponential";
    cfg.mu0 = 1.2345678901234567e-3;
    cfg.eps_list = {1e9, 1e8};
    cfg.snapshot_times = {1.0, 2.5};
    cfg.flat_value = 120.0;
    const std::string once = serialize_config(cfg);
    const std::string twice = serialize_config(parse_config(once));
    CHECK(once == twice);
}

TEST_CASE("scheme and mode strings are validated") {
    CHECK_THROWS_AS(parse_config("[solver]\nscheme = verlet\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[boundary]\nmode = sawtooth\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[transient]\npreset = cold\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[sweep]\nP_spacing = cubic\n"), ConfigError);
}

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const char* name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("dispatch: steady writes profile and manifest") {
    TempDir dir("ccsim_cli_steady");
    RunConfig cfg;
    cfg.out_dir = dir.path.string();
    cfg.grid_n = 201;
    CHECK(dispatch("steady", cfg) == 0);
    CHECK(fs::exists(dir.path / "steady_profile.csv"));
    CHECK(fs::exists(dir.path / "manifest"));
    // the manifest reproduces the resolved configuration
    const RunConfig echo = load_config_file((dir.path / "manifest").string());
    CHECK(serialize_config(echo) == serialize_config(cfg));
}

TEST_CASE("dispatch: eigen writes functions and summary") {
    TempDir dir("ccsim_cli_eigen");
    RunConfig cfg;
    cfg.out_dir = dir.path.string();
    cfg.grid_n = 501;
    CHECK(dispatch("eigen", cfg) == 0);
    CHECK(fs::exists(dir.path / "eigen_functions.csv"));
    std::ifstream in(dir.path / "eigen_summary.json");
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str().find("\"lambda\"") != std::string::npos);
    CHECK(ss.str().find("\"min_ph0_minus_phi2\"") != std::string::npos);
}

TEST_CASE("dispatch: transient with steady preset starts at the floor") {
    TempDir dir("ccsim_cli_transient");
    RunConfig cfg;
    cfg.out_dir = dir.path.string();
    cfg.grid_n = 101;
    cfg.preset = "steady";
    cfg.t_end = 20.0;
    cfg.cadence = 20;
    CHECK(dispatch("transient", cfg) == 0);
    CHECK(fs::exists(dir.path / "trajectory.csv"));
    CHECK(fs::exists(dir.path / "snapshot_final.csv"));
    std::ifstream in(dir.path / "trajectory.csv");
    std::string header, first;
    std::getline(in, header);
    std::getline(in, first);
    CHECK(header == "t,M,mass_total,ub");
    CHECK(first.substr(0, 4) == "0,0,"); // t=0, M=0 for the steady preset
}

TEST_CASE("dispatch: unknown subcommand is a usage error") {
    TempDir dir("ccsim_cli_unknown");
    RunConfig cfg;
    cfg.out_dir = dir.path.string();
    CHECK(dispatch("frobnicate", cfg) == 1);
}

TEST_CASE("dispatch: verify passes on defaults at a reduced grid") {
    TempDir dir("ccsim_cli_verify");
    RunConfig cfg;
    cfg.out_dir = dir.path.string();
    cfg.grid_n = 2001;
    CHECK(dispatch("verify", cfg) == 0);
    CHECK(fs::exists(dir.path / "verify.txt"));
}
