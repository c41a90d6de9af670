// Acceptance suite: runs every acceptance criterion end to end and prints
// one PASS/FAIL line per criterion with the measured quantities. Exit code
// is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "ccsim/experiments.hpp"
#include "ccsim/transient.hpp"
#include "../unit/oracles.hpp"

using namespace ccsim;

namespace {

int g_failures = 0;
std::vector<std::string> g_only; // optional criterion filter from argv

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

bool selected(const char* id) {
    if (g_only.empty()) return true;
    for (const auto& want : g_only)
        if (want == id) return true;
    return false;
}

template <class F>
void criterion(const char* id, const char* name, F body) {
    if (!selected(id)) return;
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
        std::tie(pass, detail) = body();
    } catch (const std::exception& e) {
        pass = false;
        detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %-3s %-24s %s  [%.2fs]\n", pass ? "PASS" : "FAIL", id, name, detail.c_str(),
                secs);
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

const Grid1D kGrid2001 = Grid1D::uniform(2001, 2e-3);

double max_fic(double Vm_scale, double P_hi, int count, double* argmax = nullptr) {
    SweepSpec spec;
    spec.P_values = spaced_values(1e-8, P_hi, count, AxisSpacing::Log);
    spec.grid = kGrid2001;
    const auto curve = run_fic_curve(spec, ModelParams::table1(2e-7, Vm_scale));
    double mx = 0.0, at = 0.0;
    for (const auto& pt : curve)
        if (pt.fic > mx) {
            mx = pt.fic;
            at = pt.P;
        }
    if (argmax) *argmax = at;
    return mx;
}

} // namespace

int main(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) g_only.emplace_back(argv[i]);
    std::printf("ccsim acceptance suite\n----------------------\n");

    criterion("C1", "FIC regime, low pump", [] {
        const auto t0 = std::chrono::steady_clock::now();
        double at = 0.0;
        const double mx = max_fic(1e-5, 1e-6, 50, &at);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool pass = mx < 12.0 && secs < 5.0;
        return std::pair{pass, "max FIC = " + fmt("%.4f", mx) + "% at P = " + fmt("%.3g", at) +
                                   " (require < 12%), 50 solves at n=2001 in " +
                                   fmt("%.2f", secs) + "s (< 5s)"};
    });

    criterion("C2", "FIC regime, high pump", [] {
        const double mx = max_fic(1e-4, 1e-6, 50);
        return std::pair{mx >= 100.0 && mx <= 140.0,
                         "max FIC = " + fmt("%.2f", mx) + "% (require within [100, 140])"};
    });

    criterion("C3", "FIC double monotonicity", [] {
        SweepSpec spec;
        spec.P_values = spaced_values(1e-8, 1e-5, 20, AxisSpacing::Log);
        spec.Vm_values = spaced_values(1e-5, 1e-4, 20, AxisSpacing::Log);
        spec.grid = kGrid2001;
        const FicGrid g = run_fic_grid(spec, ModelParams::table1());
        return std::pair{g.monotone_P && g.monotone_Vm && g.violations == 0,
                         std::string("20x20 grid, monotone in P: ") +
                             (g.monotone_P ? "yes" : "NO") + ", in Vm: " +
                             (g.monotone_Vm ? "yes" : "NO") + ", violations = " +
                             std::to_string(g.violations) + " (require 0)"};
    });

    criterion("C4", "ordering chain", [] {
        double margin = 1e300;
        for (double P : spaced_values(1e-8, 1e-5, 8, AxisSpacing::Log))
            for (double Vm : spaced_values(1e-5, 1e-4, 4, AxisSpacing::Log)) {
                const SteadyProfile s = solve_steady(ModelParams::table1(P, Vm), kGrid2001);
                for (int i = 0; i < kGrid2001.n; ++i) {
                    margin = std::min(margin, (s.u[i] - s.q2[i]) / s.u[i]);
                    margin = std::min(margin, (s.q1[i] - s.u[i]) / s.u[i]);
                    margin = std::min(margin, (s.u0[i] - s.q1[i]) / s.u[i]);
                }
            }
        return std::pair{margin > 1e-9, "min margin over 32 solves x 2001 nodes = " +
                                            fmt("%.3g", margin) + " (require > 1e-9)"};
    });

    criterion("C5", "steady residuals + RK4", [] {
        double worst = 0.0;
        for (double Vm : {1e-5, 1e-4}) {
            const ModelParams p = ModelParams::table1(2e-7, Vm);
            worst = std::max(worst, steady_residuals(solve_steady(p, kGrid2001), p).worst);
        }
        const ModelParams p = ModelParams::table1();
        const SteadyProfile ref = solve_steady(p, kGrid2001);
        auto err = [&](int n) {
            const SteadyProfile s = solve_steady(p, Grid1D::uniform(n, p.geom.L));
            const int stride = 2000 / (n - 1);
            double e = 0.0;
            for (int i = 0; i < n; ++i) e = std::max(e, std::abs(s.q2[i] - ref.q2[i * stride]));
            return e;
        };
        const double order = std::log2(err(11) / err(21));
        return std::pair{worst <= 1e-8 && order >= 3.9,
                         "max residual = " + fmt("%.3g", worst) + " (<= 1e-8), RK4 order = " +
                             fmt("%.3f", order) + " (>= 3.9)"};
    });

    criterion("C6", "eigen certificates", [] {
        const auto t0 = std::chrono::steady_clock::now();
        const EigenInputs in = EigenInputs::from_params(ModelParams::table1());
        const EigenPair pair = solve_eigenpair(in, kGrid2001);
        const EigenCertificates c = verify_eigenpair(pair);
        const double F0 = eval_F(in, 0.0);
        const double F0_ref = 1.0 - std::exp(-in.g * in.L / (1.0 + in.g / in.k));
        const double f0_err = std::abs(F0 - F0_ref);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool pass = c.F_residual <= 1e-12 && c.lambda_window > 0 &&
                          c.direct_residual <= 1e-8 && c.dual_residual <= 1e-8 &&
                          c.duality_gap <= 1e-10 && c.min_ph0_minus_phi2 > 0 && f0_err <= 1e-14 &&
                          secs < 1.0;
        return std::pair{pass, "|F-1| = " + fmt("%.2g", c.F_residual) +
                                   ", residuals = " + fmt("%.2g", std::max(c.direct_residual,
                                                                           c.dual_residual)) +
                                   ", duality gap = " + fmt("%.2g", c.duality_gap) +
                                   ", min(ph0-phi2) = " + fmt("%.3g", c.min_ph0_minus_phi2) +
                                   ", |F(0)-ref| = " + fmt("%.2g", f0_err) + ", " +
                                   fmt("%.2f", secs) + "s (< 1s)"};
    });

    criterion("C7", "theorem-style decay", [] {
        const auto t0 = std::chrono::steady_clock::now();
        const ModelParams p = ModelParams::table1();
        const Grid1D grid = Grid1D::uniform(401, p.geom.L);
        const TransientResult r =
            solve_transient(initialize_flat(p, grid, p.ub_bar), p,
                            BoundarySignal::constant(p.ub_bar), 0.0 /* 20/lambda_bar */);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const double ratio = r.report.M_final() / r.report.M0();
        const bool pass = r.report.bound_satisfied && ratio < 1e-3 && secs < 30.0;
        return std::pair{pass, std::string("M <= 1.05 M(0) e^{-lambda_bar t} above floor: ") +
                                   (r.report.bound_satisfied ? "yes" : "NO") +
                                   ", M(end)/M(0) = " + fmt("%.3g", ratio) + " (< 1e-3), " +
                                   fmt("%.1f", secs) + "s (< 30s)"};
    });

    criterion("C8", "exponential boundary", [] {
        const ModelParams p = ModelParams::table1();
        const Grid1D grid = Grid1D::uniform(401, p.geom.L);
        const EigenPair pair = solve_eigenpair(EigenInputs::from_params(p), grid);
        const SteadyProfile st = solve_steady(p, grid);
        const double lambda_bar = pair.lambda() / p.max_a();
        const double mu0 = lambda_bar / 3.0;
        // run to 10/lambda_bar so the fit window stays clear of the
        // truncation floor (the criterion pins mu0 and the 20% band only)
        const TransientResult r = solve_transient(
            initialize_flat(p, grid, p.ub_bar), p,
            BoundarySignal::exponential(p.ub_bar, 10.0, mu0), 10.0 / lambda_bar, 200,
            Scheme::ExplicitEuler, &st, &pair);
        const double dev = std::abs(r.report.fitted_rate - mu0) / mu0;
        return std::pair{r.report.fit_valid && dev <= 0.20,
                         "fitted = " + fmt("%.4g", r.report.fitted_rate) + " 1/s vs mu0 = " +
                             fmt("%.4g", mu0) + " 1/s, deviation = " + fmt("%.1f", dev * 100) +
                             "% (<= 20%)"};
    });

    criterion("C9", "mass ledger", [] {
        const ModelParams p = ModelParams::table1();
        const Grid1D grid = Grid1D::uniform(401, p.geom.L);
        TransientState s = initialize_flat(p, grid, p.ub_bar);
        const BoundarySignal ub = BoundarySignal::constant(p.ub_bar);
        const double dt = max_stable_dt(p, grid, Scheme::ExplicitEuler);
        StepWorkspace ws;
        double worst = 0.0;
        for (int i = 0; i < 10'000; ++i) {
            const double before = mass_total(s, p);
            const StepInfo info = step(s, p, ub, dt, Scheme::ExplicitEuler, ws);
            worst = std::max(worst,
                             std::abs(mass_total(s, p) - before - info.boundary_flux) / before);
        }
        return std::pair{worst <= 1e-12, "max per-step imbalance over 10^4 steps = " +
                                             fmt("%.3g", worst) + " (<= 1e-12 relative)"};
    });

    criterion("C10", "large-permeability limit", [] {
        const ModelParams p = ModelParams::table1();
        const Grid1D grid = Grid1D::uniform(201, p.geom.L);
        std::vector<double> eps;
        for (double P : {1e-5, 1e-4, 1e-3, 1e-2})
            eps.push_back(1.0 / (2.0 * std::numbers::pi * p.geom.r1 * P));
        const auto rows = epsilon_study(p, eps, grid, 150.0);
        bool monotone = true;
        for (std::size_t i = 1; i < rows.size(); ++i)
            if (!(rows[i].gap_u1_q1 < rows[i - 1].gap_u1_q1)) monotone = false;
        const double dist = rows.back().limit_distance_rel;
        return std::pair{monotone && dist < 0.01,
                         std::string("gap |u1-q1| monotone in 1/eps: ") +
                             (monotone ? "yes" : "NO") + ", P=1e-2 distance to limit = " +
                             fmt("%.3g", dist) + " (< 0.01)"};
    });

    criterion("C11", "oracle equivalences", [] {
        std::string detail;
        bool pass = true;

        // boundary root vs plain bisection
        double worst_root = 0.0;
        for (double Vm : {1e-5, 1e-4})
            for (double P : {2e-7, 1e-6}) {
                const ModelParams p = ModelParams::table1(P, Vm);
                const double root = solve_boundary_q2(p.ub_bar, p);
                const double ref = oracles::bisect_increasing(
                    [&](double y) { return y + pump_rate(y, p.pump) / p.k - p.ub_bar; }, 0.0,
                    p.ub_bar);
                worst_root = std::max(worst_root, std::abs(root - ref) / ref);
            }
        pass = pass && worst_root <= 1e-10;
        detail += "boundary vs bisection = " + fmt("%.2g", worst_root) + " (<= 1e-10)";

        // sensitivities vs finite differences
        {
            const ModelParams p = ModelParams::table1();
            const BoundarySensitivities bs = boundary_sensitivities(p);
            auto root_at = [&](double Vm2, double k) {
                ModelParams q = p;
                q.pump.Vm2 = Vm2;
                q.k = k;
                return solve_boundary_q2(q.ub_bar, q);
            };
            const double hV = 1e-6 * p.pump.Vm2, hk = 1e-6 * p.k;
            const double fdV =
                (root_at(p.pump.Vm2 + hV, p.k) - root_at(p.pump.Vm2 - hV, p.k)) / (2 * hV);
            const double fdk =
                (root_at(p.pump.Vm2, p.k + hk) - root_at(p.pump.Vm2, p.k - hk)) / (2 * hk);
            const double rel = std::max(std::abs(bs.dq20_dVm - fdV) / std::abs(fdV),
                                        std::abs(bs.dq20_dk - fdk) / std::abs(fdk));
            pass = pass && rel <= 1e-4;
            detail += ", sensitivities vs FD = " + fmt("%.2g", rel) + " (<= 1e-4)";
        }

        // pump derivative vs finite differences
        {
            const PumpParams pump = ModelParams::table1().pump;
            double rel = 0.0;
            for (double q : {0.5, 3.5, 40.0, 140.0}) {
                const double fd = oracles::central_diff(
                    [&](double x) { return pump_rate(x, pump); }, q, 1e-6 * q);
                rel = std::max(rel, std::abs(pump_derivative(q, pump) - fd) / std::abs(fd));
            }
            pass = pass && rel <= 1e-6;
            detail += ", pump derivative vs FD = " + fmt("%.2g", rel) + " (<= 1e-6)";
        }

        // eigenvalue vs shooting
        {
            const EigenInputs in = EigenInputs::from_params(ModelParams::table1());
            const double mismatch = oracles::shooting_mismatch(in, solve_lambda(in), 2001);
            pass = pass && mismatch <= 1e-8;
            detail += ", shooting mismatch = " + fmt("%.2g", mismatch) + " (<= 1e-8)";
        }
        return std::pair{pass, detail};
    });

    std::printf("----------------------\n%s: %d criterion(s) failed\n",
                g_failures == 0 ? "ALL PASS" : "RESULT", g_failures);
    return g_failures;
}
