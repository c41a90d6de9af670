#include "ccsim/steady.hpp"

#include <algorithm>
#include <cmath>

#include "ccsim/errors.hpp"
#include "ccsim/rootfind.hpp"

namespace ccsim {

namespace {

double reduced_rhs(double y, const ModelParams& p) {
    const double G = pump_rate(y, p.pump);
    if (G == 0.0) return 0.0;
    return G / (p.geom.alpha * (1.0 + pump_derivative(y, p.pump) / p.k));
}

// RK4 over the grid for dy/dx = rhs(y).
template <class Rhs>
std::vector<double> rk4(double y0, const Grid1D& grid, Rhs&& rhs) {
    std::vector<double> out(grid.n);
    const double h = grid.h();
    double y = y0;
    out[0] = y;
    for (int i = 0; i + 1 < grid.n; ++i) {
        const double s1 = rhs(y);
        const double s2 = rhs(y + 0.5 * h * s1);
        const double s3 = rhs(y + 0.5 * h * s2);
        const double s4 = rhs(y + h * s3);
        y += h / 6.0 * (s1 + 2.0 * s2 + 2.0 * s3 + s4);
        if (!std::isfinite(y))
            throw SolverError("integrate_q2: non-finite value at node " + std::to_string(i + 1));
        out[i + 1] = y;
    }
    return out;
}

} // namespace

double solve_boundary_q2(double ub_bar, const ModelParams& p, const NewtonOptions& opt) {
    if (!(ub_bar > 0)) throw std::domain_error("solve_boundary_q2: ub_bar must be positive");
    if (p.pump.Vm2 == 0.0) return ub_bar;
    if (!(p.k > 0))
        throw std::invalid_argument("solve_boundary_q2: k must be positive when the pump is active");
    auto f = [&](double y) { return y + pump_rate(y, p.pump) / p.k - ub_bar; };
    auto df = [&](double y) { return 1.0 + pump_derivative(y, p.pump) / p.k; };
    RootOptions ro;
    ro.rel_tol = opt.rel_tol;
    ro.max_iter = opt.max_iter;
    ro.scale = ub_bar;
    // f(0) = -ub_bar < 0 and f(ub_bar) = G(ub_bar)/k >= 0: [0, ub_bar] brackets.
    return newton_bisection(f, df, 0.0, ub_bar, ub_bar, ro);
}

std::vector<double> integrate_q2(double q2_0, const ModelParams& p, const Grid1D& grid) {
    if (!(q2_0 > 0)) throw std::domain_error("integrate_q2: q2(0) must be positive");
    return rk4(q2_0, grid, [&](double y) { return reduced_rhs(y, p); });
}

SteadyProfile reconstruct(std::vector<double> q2, const ModelParams& p, const Grid1D& grid) {
    SteadyProfile s;
    s.grid = grid;
    const int n = grid.n;
    s.u.resize(n);
    s.q1.resize(n);
    s.u0.resize(n);
    for (int i = 0; i < n; ++i) {
        const double G = pump_rate(q2[i], p.pump);
        const double Gk = G == 0.0 ? 0.0 : G / p.k;
        s.u[i] = q2[i] + Gk;
        s.q1[i] = q2[i] + 2.0 * Gk;
        s.u0[i] = q2[i] + 2.0 * Gk + (G == 0.0 ? 0.0 : G / p.K1);
    }
    s.q2 = std::move(q2);
    s.q2_0 = s.q2.front();
    s.fic = 100.0 * (s.u.back() - s.u.front()) / s.u.front();
    return s;
}

SteadyProfile solve_steady(const ModelParams& p, const Grid1D& grid, const NewtonOptions& opt) {
    const double q2_0 = solve_boundary_q2(p.ub_bar, p, opt);
    return reconstruct(integrate_q2(q2_0, p, grid), p, grid);
}

double fic(const SteadyProfile& profile) {
    return 100.0 * (profile.u.back() - profile.u.front()) / profile.u.front();
}

BoundarySensitivities boundary_sensitivities(const ModelParams& p, const NewtonOptions& opt) {
    const double y = solve_boundary_q2(p.ub_bar, p, opt);
    if (p.pump.Vm2 == 0.0) {
        // G vanishes identically, so dq2(0)/dk = 0; the Vm sensitivity keeps
        // its closed form (turning the pump on moves the root).
        const double r = y / (p.pump.KM2 + y);
        return {-(r * r * r) / p.k, 0.0};
    }
    const double r = y / (p.pump.KM2 + y);
    const double denom = 1.0 + pump_derivative(y, p.pump) / p.k;
    const double dVm = -(r * r * r) / (p.k * denom);
    const double dk = pump_rate(y, p.pump) / (p.k * p.k) / denom;
    return {dVm, dk};
}

AxialGradient axial_gradient_at_origin(const SteadyProfile& s, const ModelParams& p) {
    const double h = s.grid.h();
    AxialGradient g;
    g.analytic = pump_rate(s.q2_0, p.pump) / p.geom.alpha;
    g.finite_difference = (-3.0 * s.u[0] + 4.0 * s.u[1] - s.u[2]) / (2.0 * h);
    return g;
}

LimitRegimes limit_regimes(const ModelParams& p, const Grid1D& grid) {
    LimitRegimes lr;
    // k -> inf: boundary equation collapses to q2(0) = ub_bar and the
    // reduced ODE loses its G'/k factor.
    auto rhs_inf = [&](double y) { return pump_rate(y, p.pump) / p.geom.alpha; };
    std::vector<double> q2 = rk4(p.ub_bar, grid, rhs_inf);
    SteadyProfile s;
    s.grid = grid;
    const int n = grid.n;
    s.u.resize(n);
    s.q1.resize(n);
    s.u0.resize(n);
    for (int i = 0; i < n; ++i) {
        const double G = pump_rate(q2[i], p.pump);
        s.u[i] = q2[i];
        s.q1[i] = q2[i];
        s.u0[i] = q2[i] + G / p.K1;
    }
    s.q2 = std::move(q2);
    s.q2_0 = s.q2.front();
    s.fic = 100.0 * (s.u.back() - s.u.front()) / s.u.front();
    lr.k_inf = std::move(s);

    const double y0 = solve_boundary_q2(p.ub_bar, p);
    lr.k0_q2 = y0;
    lr.k0_gradient = reduced_rhs(y0, p);
    return lr;
}

DenominatorDiagnostic reduced_denominator_diagnostic(const SteadyProfile& s,
                                                     const ModelParams& p) {
    DenominatorDiagnostic d;
    d.min_value = d.max_value = 1.0 + pump_derivative(s.q2[0], p.pump) / p.k;
    for (double q : s.q2) {
        const double v = 1.0 + pump_derivative(q, p.pump) / p.k;
        d.min_value = std::min(d.min_value, v);
        d.max_value = std::max(d.max_value, v);
    }
    d.condition = d.max_value / d.min_value;
    return d;
}

SteadyResiduals steady_residuals(const SteadyProfile& s, const ModelParams& p) {
    const int n = s.grid.n;
    const double h = s.grid.h();
    const double al = p.geom.alpha;

    auto du = [&](int i) {
        if (i == 0) return (-3.0 * s.u[0] + 4.0 * s.u[1] - s.u[2]) / (2.0 * h);
        if (i == n - 1) return (3.0 * s.u[n - 1] - 4.0 * s.u[n - 2] + s.u[n - 3]) / (2.0 * h);
        return (s.u[i + 1] - s.u[i - 1]) / (2.0 * h);
    };

    std::array<double, 5> worst{};
    std::array<double, 5> scale{};
    for (int i = 0; i < n; ++i) {
        const double G = pump_rate(s.q2[i], p.pump);
        const double d = al * du(i);
        const double r1 = d - p.k * (s.q1[i] - s.u[i]);
        const double r2 = -d - p.k * (s.q2[i] - s.u[i]);
        const double r3 = p.k * (s.u[i] - s.q1[i]) + p.K1 * (s.u0[i] - s.q1[i]);
        const double r4 = p.k * (s.u[i] - s.q2[i]) - G;
        const double r5 = p.K1 * (s.q1[i] - s.u0[i]) + G;
        const std::array<double, 5> r{r1, r2, r3, r4, r5};
        const std::array<double, 5> sc{
            std::max(std::abs(d), p.k * std::abs(s.q1[i] - s.u[i])),
            std::max(std::abs(d), p.k * std::abs(s.q2[i] - s.u[i])),
            std::max(p.k * std::abs(s.u[i] - s.q1[i]), p.K1 * std::abs(s.u0[i] - s.q1[i])),
            std::max(p.k * std::abs(s.u[i] - s.q2[i]), G),
            std::max(p.K1 * std::abs(s.q1[i] - s.u0[i]), G)};
        for (int j = 0; j < 5; ++j) {
            worst[j] = std::max(worst[j], std::abs(r[j]));
            scale[j] = std::max(scale[j], sc[j]);
        }
    }
    SteadyResiduals out;
    for (int j = 0; j < 5; ++j) {
        out.rel[j] = scale[j] > 0.0 ? worst[j] / scale[j] : 0.0;
        out.worst = std::max(out.worst, out.rel[j]);
    }
    return out;
}

} // namespace ccsim
