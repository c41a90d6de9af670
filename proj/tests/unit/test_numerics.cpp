#include <doctest.h>

#include <cmath>
#include <vector>

#include "ccsim/grid.hpp"
#include "ccsim/quadrature.hpp"
#include "ccsim/rootfind.hpp"

using namespace ccsim;

TEST_CASE("grid: endpoints exact, spacing uniform, validation") {
    const Grid1D g = Grid1D::uniform(401, 2e-3);
    CHECK(g.x(0) == 0.0);
    CHECK(g.x(400) == 2e-3);
    CHECK(g.h() == doctest::Approx(5e-6).epsilon(1e-15));
    const auto xs = g.nodes();
    REQUIRE(xs.size() == 401);
    for (int i = 1; i < 401; ++i)
        CHECK(xs[i] - xs[i - 1] == doctest::Approx(g.h()).epsilon(1e-12));
    CHECK_THROWS_AS(Grid1D::uniform(1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Grid1D::uniform(10, 0.0), std::invalid_argument);
}

TEST_CASE("quadrature: Simpson is exact on cubics, both parities") {
    // integral of x^3 on [0, 1] = 1/4
    for (int n : {5, 6, 9, 101, 102}) {
        std::vector<double> f(n);
        const double h = 1.0 / (n - 1);
        for (int i = 0; i < n; ++i) {
            const double x = i * h;
            f[i] = x * x * x;
        }
        CHECK(integrate_uniform(f, h) == doctest::Approx(0.25).epsilon(1e-13));
    }
    // two samples fall back to the trapezoid
    const std::vector<double> two{1.0, 3.0};
    CHECK(integrate_uniform(two, 0.5) == doctest::Approx(1.0));
}

TEST_CASE("quadrature: fourth-order convergence on a smooth integrand") {
    auto err = [](int n) {
        std::vector<double> f(n);
        const double h = 1.0 / (n - 1);
        for (int i = 0; i < n; ++i) f[i] = std::exp(2.0 * i * h);
        return std::abs(integrate_uniform(f, h) - (std::exp(2.0) - 1.0) / 2.0);
    };
    CHECK(std::log2(err(17) / err(33)) > 3.8);
}

TEST_CASE("compensated summation survives adversarial cancellation") {
    std::vector<double> v{1e16, 3.14, -1e16, 2.0};
    CHECK(stable_sum(v) == doctest::Approx(5.14).epsilon(1e-15));
}

TEST_CASE("newton_bisection: convergence, safeguard, iteration cap") {
    // well-behaved monotone function
    auto f = [](double x) { return x * x * x - 2.0; };
    auto df = [](double x) { return 3.0 * x * x; };
    RootOptions opt;
    opt.scale = 2.0;
    const double r = newton_bisection(f, df, 0.0, 2.0, 1.0, opt);
    CHECK(r == doctest::Approx(std::cbrt(2.0)).epsilon(1e-12));

    // flat derivative forces the bisection fallback
    auto g = [](double x) { return std::tanh(50.0 * (x - 0.7)); };
    auto dg = [](double x) {
        const double t = std::tanh(50.0 * (x - 0.7));
        return 50.0 * (1.0 - t * t);
    };
    const double r2 = newton_bisection(g, dg, 0.0, 1.0, 0.01, opt);
    CHECK(r2 == doctest::Approx(0.7).epsilon(1e-9));

    RootOptions strict;
    strict.rel_tol = 1e-30; // unreachable tolerance, but the bracket exhausts
    strict.max_iter = 3;
    CHECK_THROWS_AS(newton_bisection(f, df, 0.0, 2.0, 1.9, strict), SolverError);
}
