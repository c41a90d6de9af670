#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "ccsim/experiments.hpp"
#include "oracles.hpp"

using namespace ccsim;
namespace fs = std::filesystem;

TEST_CASE("axis construction covers both spacings exactly") {
    const auto log10 = spaced_values(1e-8, 1e-5, 4, AxisSpacing::Log);
    CHECK(log10.front() == 1e-8);
    CHECK(log10.back() == 1e-5);
    CHECK(log10[1] == doctest::Approx(1e-7).epsilon(1e-12));
    const auto lin = spaced_values(1.0, 3.0, 3, AxisSpacing::Linear);
    CHECK(lin[1] == doctest::Approx(2.0));
    CHECK_THROWS_AS(spaced_values(0.0, 1.0, 5, AxisSpacing::Log), std::invalid_argument);
    CHECK_THROWS_AS(spaced_values(1.0, 1.0, 0, AxisSpacing::Log), std::invalid_argument);
}

TEST_CASE("parameter rebuilds keep the folding conventions") {
    const ModelParams base = ModelParams::table1();
    const ModelParams hi = with_permeability(base, 1e-6);
    CHECK(hi.k == doctest::Approx(2.0 * std::numbers::pi * 1e-5 * 1e-6).epsilon(1e-15));
    CHECK(hi.pump.Vm2 == base.pump.Vm2);
    const ModelParams strong = with_pump_scale(base, 1e-4);
    CHECK(strong.pump.Vm2 ==
          doctest::Approx(2.0 * std::numbers::pi * 1.5e-5 * 1e-4).epsilon(1e-15));
    CHECK(strong.k == base.k);
}

TEST_CASE("fic curve: values match the closed-form oracle and flatten") {
    SweepSpec spec;
    spec.P_values = spaced_values(1e-8, 1e-5, 12, AxisSpacing::Log);
    spec.grid = Grid1D::uniform(401, 2e-3);
    const auto curve = run_fic_curve(spec, ModelParams::table1());
    REQUIRE(curve.size() == 12);
    for (std::size_t i = 0; i < curve.size(); ++i) {
        CHECK(curve[i].fic ==
              doctest::Approx(oracles::fic_closed_form(with_permeability(ModelParams::table1(),
                                                                         curve[i].P)))
                  .epsilon(1e-7));
        if (i) CHECK(curve[i].fic >= curve[i - 1].fic);
    }
    // plateau: the last increment is smaller than the mid-range one
    const double tail = curve[11].fic - curve[10].fic;
    const double mid = curve[6].fic - curve[5].fic;
    CHECK(tail < mid);
}

TEST_CASE("fic curve: strong pump regime reaches the hundred-percent range") {
    SweepSpec spec;
    spec.P_values = spaced_values(1e-8, 1e-6, 10, AxisSpacing::Log);
    spec.grid = Grid1D::uniform(401, 2e-3);
    const auto curve = run_fic_curve(spec, ModelParams::table1(2e-7, 1e-4));
    double mx = 0.0;
    for (const auto& pt : curve) mx = std::max(mx, pt.fic);
    CHECK(mx >= 100.0);
    CHECK(mx <= 140.0);
}

TEST_CASE("fic grid: monotone along both axes with the corner minimum") {
    SweepSpec spec;
    spec.P_values = spaced_values(1e-8, 1e-5, 6, AxisSpacing::Log);
    spec.Vm_values = spaced_values(1e-5, 1e-4, 6, AxisSpacing::Log);
    spec.grid = Grid1D::uniform(201, 2e-3);
    const FicGrid g = run_fic_grid(spec, ModelParams::table1());
    CHECK(g.monotone_P);
    CHECK(g.monotone_Vm);
    CHECK(g.violations == 0);
    double mn = g.fic[0];
    for (double f : g.fic) mn = std::min(mn, f);
    CHECK(g.at(0, 0) == mn);
}

TEST_CASE("sweeps are reproducible bit-for-bit across thread counts") {
    SweepSpec spec;
    spec.P_values = spaced_values(1e-8, 1e-5, 16, AxisSpacing::Log);
    spec.grid = Grid1D::uniform(201, 2e-3);
    setenv("CCSIM_THREADS", "1", 1);
    const auto serial = run_fic_curve(spec, ModelParams::table1());
    setenv("CCSIM_THREADS", "8", 1);
    const auto parallel = run_fic_curve(spec, ModelParams::table1());
    unsetenv("CCSIM_THREADS");
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].P == parallel[i].P);
        CHECK(serial[i].fic == parallel[i].fic);
    }
}

TEST_CASE("profile emission: empty request set writes nothing") {
    const auto dir = fs::temp_directory_path() / "ccsim_test_profiles_empty";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const auto files = emit_profiles({}, Grid1D::uniform(101, 2e-3), dir.string());
    CHECK(files.empty());
    CHECK(fs::is_empty(dir));
    fs::remove_all(dir);
}

TEST_CASE("profile emission writes csv and svg; high permeability collapses curves") {
    const auto dir = fs::temp_directory_path() / "ccsim_test_profiles";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const Grid1D grid = Grid1D::uniform(401, 2e-3);
    const ModelParams base = ModelParams::table1();
    std::vector<ProfileRequest> reqs;
    reqs.push_back({"low", with_permeability(base, 2e-7)});
    reqs.push_back({"high", with_permeability(base, 2e-5)});
    const auto files = emit_profiles(reqs, grid, dir.string());
    REQUIRE(files.size() == 4);
    for (const auto& f : files) CHECK(fs::exists(f));
    std::ifstream svg(dir / "profile_low.svg");
    std::string head;
    std::getline(svg, head);
    CHECK(head.find("<svg") != std::string::npos);

    // curve spread shrinks as permeability homogenizes the compartments
    auto spread = [&](double P) {
        const SteadyProfile s = solve_steady(with_permeability(base, P), grid);
        double worst = 0.0;
        for (int i = 0; i < grid.n; ++i)
            worst = std::max(worst, (s.u0[i] - s.q2[i]) / s.u[i]);
        return worst;
    };
    CHECK(spread(2e-5) < spread(2e-7));
    fs::remove_all(dir);
}
