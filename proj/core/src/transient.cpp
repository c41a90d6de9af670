#include "ccsim/transient.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "ccsim/errors.hpp"
#include "ccsim/quadrature.hpp"

namespace ccsim {

namespace {

constexpr double kNegativityTol = 1e-12;

double pump_clamped(double q2, const PumpParams& pump) {
    return pump_rate(q2 < 0.0 ? 0.0 : q2, pump);
}

void check_admissible(const TransientState& s, const char* where) {
    for (const auto* v : {&s.u1, &s.u2, &s.q1, &s.q2, &s.u0}) {
        for (double x : *v) {
            if (!std::isfinite(x)) throw SchemeError(std::string(where) + ": non-finite value");
            if (x < -kNegativityTol)
                throw SchemeError(std::string(where) +
                                  ": negative concentration beyond tolerance: " + std::to_string(x));
        }
    }
}

// Dense 5x5 solve with partial pivoting; the implicit exchange Jacobian is
// small enough that this beats any library dispatch.
void solve5(double A[5][5], double b[5]) {
    for (int col = 0; col < 5; ++col) {
        int piv = col;
        for (int r = col + 1; r < 5; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        if (piv != col) {
            for (int c = 0; c < 5; ++c) std::swap(A[col][c], A[piv][c]);
            std::swap(b[col], b[piv]);
        }
        const double d = A[col][col];
        if (d == 0.0) throw SolverError("implicit exchange: singular Jacobian");
        for (int r = col + 1; r < 5; ++r) {
            const double f = A[r][col] / d;
            if (f == 0.0) continue;
            for (int c = col; c < 5; ++c) A[r][c] -= f * A[col][c];
            b[r] -= f * b[col];
        }
    }
    for (int r = 4; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < 5; ++c) s -= A[r][c] * b[c];
        b[r] = s / A[r][r];
    }
}

// Backward-Euler solve of the exchange block at one node, given the
// post-transport lumen values and old epithelium/interstitium values.
// Returns the converged (u1, u2, q1, q2, u0).
std::array<double, 5> implicit_exchange_node(std::array<double, 5> v, const double rhs0[5],
                                             const ModelParams& p, double dt) {
    const double c1 = dt * p.k / p.a1;
    const double c2 = dt * p.k / p.a2;
    const double c3k = dt * p.k / p.a3, c3K = dt * p.K1 / p.a3;
    const double c4 = dt * p.k / p.a4, c4g = dt / p.a4;
    const double c0K = dt * p.K1 / p.a0, c0g = dt / p.a0;

    double scale = 1.0;
    for (int i = 0; i < 5; ++i) scale = std::max(scale, std::abs(rhs0[i]));

    for (int it = 0; it < 50; ++it) {
        const double q2c = v[3] < 0.0 ? 0.0 : v[3];
        const double G = pump_rate(q2c, p.pump);
        const double Gp = pump_derivative(q2c, p.pump);
        double F[5] = {
            v[0] - rhs0[0] - c1 * (v[2] - v[0]),
            v[1] - rhs0[1] - c2 * (v[3] - v[1]),
            v[2] - rhs0[2] - c3k * (v[0] - v[2]) - c3K * (v[4] - v[2]),
            v[3] - rhs0[3] - c4 * (v[1] - v[3]) + c4g * G,
            v[4] - rhs0[4] - c0K * (v[2] - v[4]) - c0g * G,
        };
        double worst = 0.0;
        for (double f : F) worst = std::max(worst, std::abs(f));
        if (worst <= 1e-13 * scale) break;
        double J[5][5] = {
            {1.0 + c1, 0, -c1, 0, 0},
            {0, 1.0 + c2, 0, -c2, 0},
            {-c3k, 0, 1.0 + c3k + c3K, 0, -c3K},
            {0, -c4, 0, 1.0 + c4 + c4g * Gp, 0},
            {0, 0, -c0K, -c0g * Gp, 1.0 + c0K},
        };
        double step[5] = {F[0], F[1], F[2], F[3], F[4]};
        solve5(J, step);
        for (int i = 0; i < 5; ++i) v[i] -= step[i];
        if (it == 49) throw SolverError("implicit exchange: Newton did not converge");
    }
    return v;
}

} // namespace

BoundarySignal BoundarySignal::constant(double ub_bar) {
    if (!(ub_bar >= 0)) throw std::invalid_argument("BoundarySignal: ub_bar must be nonnegative");
    BoundarySignal b;
    b.mode = Mode::Constant;
    b.ub_bar = ub_bar;
    return b;
}

BoundarySignal BoundarySignal::exponential(double ub_bar, double C0, double mu0) {
    if (!(mu0 > 0)) throw std::invalid_argument("BoundarySignal: mu0 must be positive");
    if (ub_bar + std::min(C0, 0.0) < 0)
        throw std::invalid_argument("BoundarySignal: ub(t) must stay nonnegative");
    BoundarySignal b;
    b.mode = Mode::Exponential;
    b.ub_bar = ub_bar;
    b.C0 = C0;
    b.mu0 = mu0;
    return b;
}

BoundarySignal BoundarySignal::from_table(double ub_bar,
                                          std::vector<std::pair<double, double>> pts) {
    if (pts.empty()) throw std::invalid_argument("BoundarySignal: empty table");
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (pts[i].second < 0)
            throw std::invalid_argument("BoundarySignal: table value must be nonnegative");
        if (i > 0 && pts[i].first <= pts[i - 1].first)
            throw std::invalid_argument("BoundarySignal: table times must increase");
    }
    BoundarySignal b;
    b.mode = Mode::Table;
    b.ub_bar = ub_bar;
    b.table = std::move(pts);
    return b;
}

double BoundarySignal::operator()(double t) const {
    switch (mode) {
        case Mode::Constant:
            return ub_bar;
        case Mode::Exponential:
            return ub_bar + C0 * std::exp(-mu0 * t);
        case Mode::Table: {
            if (t <= table.front().first) return table.front().second;
            if (t >= table.back().first) return table.back().second;
            auto it = std::upper_bound(table.begin(), table.end(), t,
                                       [](double v, const auto& p) { return v < p.first; });
            const auto& [t1, v1] = *it;
            const auto& [t0, v0] = *(it - 1);
            return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
        }
    }
    return ub_bar;
}

TransientState initialize_flat(const ModelParams&, const Grid1D& grid, double value) {
    if (!(value >= 0) || !std::isfinite(value))
        throw std::invalid_argument("initialize_flat: value must be finite and nonnegative");
    TransientState s;
    s.grid = grid;
    s.u1.assign(grid.n, value);
    s.u2.assign(grid.n, value);
    s.q1.assign(grid.n, value);
    s.q2.assign(grid.n, value);
    s.u0.assign(grid.n, value);
    return s;
}

TransientState initialize_steady(const ModelParams& p, const Grid1D& grid) {
    const SteadyProfile st = solve_steady(p, grid);
    TransientState s;
    s.grid = grid;
    s.u1 = st.u;
    s.u2 = st.u;
    s.q1 = st.q1;
    s.q2 = st.q2;
    s.u0 = st.u0;
    return s;
}

TransientState initialize_perturbed(const ModelParams& p, const Grid1D& grid, double eps) {
    TransientState s = initialize_steady(p, grid);
    for (int i = 0; i < grid.n; ++i) {
        const double bump = eps * std::sin(std::numbers::pi * grid.x(i) / grid.length);
        for (auto* v : {&s.u1, &s.u2, &s.q1, &s.q2, &s.u0})
            (*v)[i] = std::max(0.0, (*v)[i] + bump);
    }
    return s;
}

TransientState initialize_from_fields(const Grid1D& grid, std::vector<double> u1,
                                      std::vector<double> u2, std::vector<double> q1,
                                      std::vector<double> q2, std::vector<double> u0) {
    TransientState s;
    s.grid = grid;
    s.u1 = std::move(u1);
    s.u2 = std::move(u2);
    s.q1 = std::move(q1);
    s.q2 = std::move(q2);
    s.u0 = std::move(u0);
    for (const auto* v : {&s.u1, &s.u2, &s.q1, &s.q2, &s.u0}) {
        if (static_cast<int>(v->size()) != grid.n)
            throw std::invalid_argument("initialize_from_fields: field size != grid size");
        for (double x : *v)
            if (!std::isfinite(x) || x < 0)
                throw std::invalid_argument("initialize_from_fields: fields must be finite and nonnegative");
    }
    return s;
}

double max_stable_dt(const ModelParams& p, const Grid1D& grid, Scheme scheme) {
    const double h = grid.h();
    const double transport =
        std::min(h * p.a1 / p.geom.alpha, h * p.a2 / p.geom.alpha);
    if (scheme == Scheme::ImplicitExchange) return 0.9 * transport;
    const double g = lipschitz_bound_g(p.pump);
    const double stiff = p.min_a() / (2.0 * p.k + p.K1 + g);
    return 0.9 * std::min(transport, stiff);
}

StepInfo step(TransientState& s, const ModelParams& p, const BoundarySignal& ub, double dt,
              Scheme scheme, StepWorkspace& ws) {
    const int n = s.grid.n;
    const double h = s.grid.h();
    if (!(dt > 0)) throw StepError("step: dt must be positive");
    if (dt > max_stable_dt(p, s.grid, scheme) * (1.0 + 1e-9))
        throw StepError("step: dt violates the stability contract");

    const double ubt = ub(s.t);
    if (ubt < 0) throw StepError("step: boundary value negative");
    const double nu1 = dt * p.geom.alpha / (p.a1 * h);
    const double nu2 = dt * p.geom.alpha / (p.a2 * h);
    const double u1_L = s.u1[n - 1]; // hairpin trace feeding tubule 2 this step
    const double u2_0 = s.u2[0];

    ws.J1.resize(n);
    ws.J2.resize(n);
    ws.X.resize(n);
    ws.G.resize(n);

    if (scheme == Scheme::ExplicitEuler) {
        for (int i = 0; i < n; ++i) {
            ws.J1[i] = p.k * (s.q1[i] - s.u1[i]);
            ws.J2[i] = p.k * (s.q2[i] - s.u2[i]);
            ws.X[i] = p.K1 * (s.u0[i] - s.q1[i]);
            ws.G[i] = pump_clamped(s.q2[i], p.pump);
        }
        for (int i = 0; i < n; ++i) {
            s.q1[i] += dt / p.a3 * (-ws.J1[i] + ws.X[i]);
            s.q2[i] += dt / p.a4 * (-ws.J2[i] - ws.G[i]);
            s.u0[i] += dt / p.a0 * (ws.G[i] - ws.X[i]);
        }
        for (int i = n - 1; i >= 1; --i)
            s.u1[i] += -nu1 * (s.u1[i] - s.u1[i - 1]) + dt / p.a1 * ws.J1[i];
        s.u1[0] += -nu1 * (s.u1[0] - ubt) + dt / p.a1 * ws.J1[0];
        for (int i = 0; i + 1 < n; ++i)
            s.u2[i] += nu2 * (s.u2[i + 1] - s.u2[i]) + dt / p.a2 * ws.J2[i];
        s.u2[n - 1] += nu2 * (u1_L - s.u2[n - 1]) + dt / p.a2 * ws.J2[n - 1];
    } else {
        // Transport substep (explicit upwind, no exchange).
        for (int i = n - 1; i >= 1; --i) s.u1[i] -= nu1 * (s.u1[i] - s.u1[i - 1]);
        s.u1[0] -= nu1 * (s.u1[0] - ubt);
        for (int i = 0; i + 1 < n; ++i) s.u2[i] += nu2 * (s.u2[i + 1] - s.u2[i]);
        s.u2[n - 1] += nu2 * (u1_L - s.u2[n - 1]);
        // Implicit exchange per node; commit via fluxes evaluated at the
        // converged point so the exchange ledger cancels exactly.
        for (int i = 0; i < n; ++i) {
            const double rhs0[5] = {s.u1[i], s.u2[i], s.q1[i], s.q2[i], s.u0[i]};
            const auto v = implicit_exchange_node({rhs0[0], rhs0[1], rhs0[2], rhs0[3], rhs0[4]},
                                                  rhs0, p, dt);
            ws.J1[i] = p.k * (v[2] - v[0]);
            ws.J2[i] = p.k * (v[3] - v[1]);
            ws.X[i] = p.K1 * (v[4] - v[2]);
            ws.G[i] = pump_clamped(v[3], p.pump);
        }
        for (int i = 0; i < n; ++i) {
            s.u1[i] += dt / p.a1 * ws.J1[i];
            s.u2[i] += dt / p.a2 * ws.J2[i];
            s.q1[i] += dt / p.a3 * (-ws.J1[i] + ws.X[i]);
            s.q2[i] += dt / p.a4 * (-ws.J2[i] - ws.G[i]);
            s.u0[i] += dt / p.a0 * (ws.G[i] - ws.X[i]);
        }
    }

    s.t += dt;
    check_admissible(s, "step");
    return StepInfo{dt * p.geom.alpha * (ubt - u2_0)};
}

StepInfo step(TransientState& s, const ModelParams& p, const BoundarySignal& ub, double dt,
              Scheme scheme) {
    StepWorkspace ws;
    return step(s, p, ub, dt, scheme, ws);
}

double mass_total(const TransientState& s, const ModelParams& p) {
    const int n = s.grid.n;
    std::vector<double> cells(n);
    for (int i = 0; i < n; ++i)
        cells[i] = p.a1 * s.u1[i] + p.a2 * s.u2[i] + p.a3 * s.q1[i] + p.a4 * s.q2[i] +
                   p.a0 * s.u0[i];
    return s.grid.h() * stable_sum(cells);
}

double weighted_norm(const TransientState& s, const SteadyProfile& steady, const EigenPair& pair,
                     const ModelParams& p) {
    if (!(s.grid == steady.grid) || !(s.grid == pair.grid))
        throw std::invalid_argument("weighted_norm: grid mismatch");
    const int n = s.grid.n;
    std::vector<double> f(n);
    for (int i = 0; i < n; ++i) {
        f[i] = p.a1 * std::abs(s.u1[i] - steady.u[i]) * pair.dual.ph1[i] +
               p.a2 * std::abs(s.u2[i] - steady.u[i]) * pair.dual.ph2[i] +
               p.a3 * std::abs(s.q1[i] - steady.q1[i]) * pair.dual.phi1[i] +
               p.a4 * std::abs(s.q2[i] - steady.q2[i]) * pair.dual.phi2[i] +
               p.a0 * std::abs(s.u0[i] - steady.u0[i]) * pair.dual.ph0[i];
    }
    return integrate_uniform(f, s.grid.h());
}

namespace {

void fit_decay(DecayReport& r) {
    const double M0 = r.M0();
    r.floor = std::max(*std::min_element(r.M.begin(), r.M.end()), r.M_final());
    const double cutoff =
        std::max(1e3 * std::numeric_limits<double>::epsilon() * M0, 1.05 * r.floor);

    std::vector<std::size_t> valid;
    for (std::size_t i = 0; i < r.M.size(); ++i)
        if (r.M[i] > cutoff) valid.push_back(i);

    r.bound_satisfied = true;
    for (std::size_t i : valid)
        if (r.M[i] > 1.05 * M0 * std::exp(-r.lambda_bar * r.times[i])) r.bound_satisfied = false;

    if (valid.size() < 4) {
        r.fit_valid = false;
        r.fitted_rate = 0.0;
        return;
    }
    // Least squares on log M over the final half of the valid samples.
    const std::size_t begin = valid.size() / 2;
    double st = 0, sy = 0, stt = 0, sty = 0;
    const double m = static_cast<double>(valid.size() - begin);
    for (std::size_t j = begin; j < valid.size(); ++j) {
        const double t = r.times[valid[j]];
        const double y = std::log(r.M[valid[j]]);
        st += t;
        sy += y;
        stt += t * t;
        sty += t * y;
    }
    const double denom = m * stt - st * st;
    if (denom <= 0) {
        r.fit_valid = false;
        r.fitted_rate = 0.0;
        return;
    }
    r.fitted_rate = -(m * sty - st * sy) / denom;
    r.fit_valid = true;
}

} // namespace

TransientResult solve_transient(TransientState initial, const ModelParams& p,
                                const BoundarySignal& ub, double t_end, int cadence, Scheme scheme,
                                const SteadyProfile* steady_in, const EigenPair* pair_in,
                                const std::vector<double>* snapshot_times) {
    check_admissible(initial, "solve_transient: initial state");

    SteadyProfile steady_local;
    EigenPair pair_local;
    if (!steady_in) {
        steady_local = solve_steady(p, initial.grid);
        steady_in = &steady_local;
    }
    if (!pair_in) {
        pair_local = solve_eigenpair(EigenInputs::from_params(p), initial.grid);
        pair_in = &pair_local;
    }

    DecayReport report;
    report.lambda_bar = pair_in->lambda() / p.max_a();
    if (t_end <= 0) t_end = 20.0 / report.lambda_bar;

    const double dt_max = max_stable_dt(p, initial.grid, scheme);
    const long nsteps = static_cast<long>(std::ceil(t_end / dt_max));
    const double dt = t_end / static_cast<double>(nsteps);
    const long stride = std::max(1L, nsteps / std::max(1, cadence));

    auto observe = [&](const TransientState& s) {
        report.times.push_back(s.t);
        report.M.push_back(weighted_norm(s, *steady_in, *pair_in, p));
        report.mass.push_back(mass_total(s, p));
        report.ub.push_back(ub(s.t));
    };

    std::vector<double> wanted;
    if (snapshot_times) {
        wanted = *snapshot_times;
        std::sort(wanted.begin(), wanted.end());
    }
    std::size_t next_snap = 0;
    TransientResult result;

    StepWorkspace ws;
    observe(initial);
    while (next_snap < wanted.size() && wanted[next_snap] <= 0.0) {
        result.snapshots.emplace_back(initial.t, initial);
        ++next_snap;
    }
    for (long i = 0; i < nsteps; ++i) {
        step(initial, p, ub, dt, scheme, ws);
        if ((i + 1) % stride == 0 || i + 1 == nsteps) observe(initial);
        while (next_snap < wanted.size() && initial.t >= wanted[next_snap]) {
            result.snapshots.emplace_back(initial.t, initial);
            ++next_snap;
        }
    }
    fit_decay(report);
    result.state = std::move(initial);
    result.report = std::move(report);
    return result;
}

LimitState solve_limit_system(const ModelParams& p, const Grid1D& grid, const BoundarySignal& ub,
                              double t_end) {
    const double b1 = p.a1 + p.a3, b2 = p.a2 + p.a4, b0 = p.a0;
    const double h = grid.h();
    const double g = lipschitz_bound_g(p.pump);
    const double dt_max =
        0.9 * std::min({h * b1 / p.geom.alpha, h * b2 / p.geom.alpha,
                        std::min({b1, b2, b0}) / (p.K1 + g)});
    const long nsteps = static_cast<long>(std::ceil(t_end / dt_max));
    const double dt = t_end / static_cast<double>(nsteps);
    const double m1 = dt * p.geom.alpha / (b1 * h);
    const double m2 = dt * p.geom.alpha / (b2 * h);

    LimitState s;
    s.grid = grid;
    const double v0 = ub(0.0);
    s.u1.assign(grid.n, v0);
    s.u2.assign(grid.n, v0);
    s.u0.assign(grid.n, v0);
    const int n = grid.n;
    std::vector<double> X(n), G(n);
    for (long it = 0; it < nsteps; ++it) {
        const double ubt = ub(s.t);
        const double u1_L = s.u1[n - 1];
        for (int i = 0; i < n; ++i) {
            X[i] = p.K1 * (s.u0[i] - s.u1[i]);
            G[i] = pump_clamped(s.u2[i], p.pump);
        }
        for (int i = 0; i < n; ++i) s.u0[i] += dt / b0 * (G[i] - X[i]);
        for (int i = n - 1; i >= 1; --i)
            s.u1[i] += -m1 * (s.u1[i] - s.u1[i - 1]) + dt / b1 * X[i];
        s.u1[0] += -m1 * (s.u1[0] - ubt) + dt / b1 * X[0];
        for (int i = 0; i + 1 < n; ++i)
            s.u2[i] += m2 * (s.u2[i + 1] - s.u2[i]) - dt / b2 * G[i];
        s.u2[n - 1] += m2 * (u1_L - s.u2[n - 1]) - dt / b2 * G[n - 1];
        s.t += dt;
    }
    return s;
}

std::vector<EpsilonRow> epsilon_study(const ModelParams& base, const std::vector<double>& eps_list,
                                      const Grid1D& grid, double t_end, Scheme scheme) {
    if (eps_list.empty()) throw std::invalid_argument("epsilon_study: empty eps list");
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        if (!(eps_list[i] > 0)) throw std::invalid_argument("epsilon_study: eps must be positive");
        if (i > 0 && eps_list[i] >= eps_list[i - 1])
            throw std::invalid_argument("epsilon_study: eps list must be strictly decreasing");
    }

    const BoundarySignal ub = BoundarySignal::constant(base.ub_bar);
    const LimitState lim = solve_limit_system(base, grid, ub, t_end);
    double lim_scale = 0.0;
    for (const auto* v : {&lim.u1, &lim.u2, &lim.u0})
        for (double x : *v) lim_scale = std::max(lim_scale, std::abs(x));

    std::vector<EpsilonRow> rows;
    StepWorkspace ws;
    for (double eps : eps_list) {
        const double k_target = 1.0 / eps;
        const double P = k_target / (2.0 * std::numbers::pi * base.geom.r1);
        const double Vm_scale =
            base.pump.Vm2 / (2.0 * std::numbers::pi * base.geom.r2e);
        const ModelParams p = ModelParams::make(base.geom, P, base.perms.P1e, Vm_scale,
                                                base.pump.KM2, base.ub_bar);
        TransientState s = initialize_flat(p, grid, p.ub_bar);
        const double dt_max = max_stable_dt(p, grid, scheme);
        const long nsteps = static_cast<long>(std::ceil(t_end / dt_max));
        const double dt = t_end / static_cast<double>(nsteps);
        for (long i = 0; i < nsteps; ++i) step(s, p, ub, dt, scheme, ws);

        EpsilonRow row;
        row.eps = eps;
        row.k = p.k;
        row.P = P;
        row.gap_u1_q1 = 0.0;
        row.gap_u2_q2 = 0.0;
        double dist = 0.0;
        for (int i = 0; i < grid.n; ++i) {
            row.gap_u1_q1 = std::max(row.gap_u1_q1, std::abs(s.u1[i] - s.q1[i]));
            row.gap_u2_q2 = std::max(row.gap_u2_q2, std::abs(s.u2[i] - s.q2[i]));
            dist = std::max({dist, std::abs(s.u1[i] - lim.u1[i]), std::abs(s.u2[i] - lim.u2[i]),
                             std::abs(s.u0[i] - lim.u0[i])});
        }
        row.limit_distance_rel = dist / lim_scale;
        rows.push_back(row);
    }
    return rows;
}

} // namespace ccsim
