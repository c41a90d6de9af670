#include "ccsim/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>

#include "ccsim/errors.hpp"
#include "ccsim/experiments.hpp"
#include "ccsim/io.hpp"

namespace ccsim {

namespace {

namespace fs = std::filesystem;

BoundarySignal make_boundary(const RunConfig& cfg, double lambda_bar) {
    if (cfg.boundary_mode == "constant") return BoundarySignal::constant(cfg.ub_bar);
    if (cfg.boundary_mode == "exponential") {
        const double mu0 = cfg.mu0 > 0 ? cfg.mu0 : lambda_bar / 3.0;
        return BoundarySignal::exponential(cfg.ub_bar, cfg.C0, mu0);
    }
    // table: "t:v,t:v,..."
    std::vector<std::pair<double, double>> pts;
    std::stringstream ss(cfg.boundary_table);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw ConfigError("boundary.table entries must be 't:value', got '" + item + "'");
        pts.emplace_back(std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1)));
    }
    return BoundarySignal::from_table(cfg.ub_bar, pts);
}

TransientState make_initial(const RunConfig& cfg, const ModelParams& p, const Grid1D& grid) {
    if (cfg.preset == "steady") return initialize_steady(p, grid);
    if (cfg.preset == "perturbed-steady") return initialize_perturbed(p, grid, cfg.perturb_eps);
    return initialize_flat(p, grid, cfg.flat_value.value_or(cfg.ub_bar));
}

std::string tag_for(double P) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "P%g", P);
    return buf;
}

int run_steady(const RunConfig& cfg) {
    const ModelParams p = cfg.to_params();
    const Grid1D grid = cfg.to_grid();
    const SteadyProfile s = solve_steady(p, grid, {cfg.newton_tol, cfg.newton_max_iter});
    const SteadyResiduals res = steady_residuals(s, p);
    write_steady_csv(s, cfg.out_dir + "/steady_profile.csv");
    const AxialGradient ag = axial_gradient_at_origin(s, p);
    const DenominatorDiagnostic dd = reduced_denominator_diagnostic(s, p);
    std::printf("steady: n=%d  q2(0)=%.10g  FIC=%.6g %%  max residual=%.3g\n", grid.n, s.q2_0,
                s.fic, res.worst);
    std::printf("        du/dx(0): analytic=%.6g  finite-difference=%.6g\n", ag.analytic,
                ag.finite_difference);
    std::printf("        reduced-ODE denominator 1+G'/k in [%.6g, %.6g], condition %.3g\n",
                dd.min_value, dd.max_value, dd.condition);
    std::printf("        wrote %s\n", (cfg.out_dir + "/steady_profile.csv").c_str());
    return 0;
}

int run_eigen(const RunConfig& cfg) {
    const ModelParams p = cfg.to_params();
    const Grid1D grid = cfg.to_grid();
    const EigenPair pair = solve_eigenpair(EigenInputs::from_params(p), grid);
    const EigenCertificates cert = verify_eigenpair(pair);
    write_eigen_csv(pair, cfg.out_dir + "/eigen_functions.csv");
    const std::string summary = eigen_summary_json(pair, cert);
    write_text_file(cfg.out_dir + "/eigen_summary.json", summary + "\n");
    std::printf("eigen: lambda      = %s\n", fmt17(pair.root.lambda).c_str());
    std::printf("       lambda_minus= %s\n", fmt17(pair.root.lambda_minus).c_str());
    std::printf("       lambda_bar  = %s 1/s\n", fmt17(pair.root.lambda / p.max_a()).c_str());
    std::printf("       |F-1|=%.3g  direct res=%.3g  dual res=%.3g  min(ph0-phi2)=%.6g\n",
                cert.F_residual, cert.direct_residual, cert.dual_residual,
                cert.min_ph0_minus_phi2);
    std::printf("       %s\n", summary.c_str());
    validate_eigenpair(pair);
    return 0;
}

int run_transient(const RunConfig& cfg) {
    const ModelParams p = cfg.to_params();
    const Grid1D grid = cfg.to_grid();
    const SteadyProfile steady = solve_steady(p, grid, {cfg.newton_tol, cfg.newton_max_iter});
    const EigenPair pair = solve_eigenpair(EigenInputs::from_params(p), grid);
    const double lambda_bar = pair.lambda() / p.max_a();
    const BoundarySignal ub = make_boundary(cfg, lambda_bar);
    TransientState initial = make_initial(cfg, p, grid);
    const TransientResult result =
        solve_transient(std::move(initial), p, ub, cfg.t_end, cfg.cadence, cfg.to_scheme(),
                        &steady, &pair, &cfg.snapshot_times);
    write_trajectory_csv(result.report, cfg.out_dir + "/trajectory.csv");
    for (const auto& [t, snap] : result.snapshots) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "/snapshot_t%g.csv", t);
        write_snapshot_csv(snap, cfg.out_dir + buf);
    }
    write_snapshot_csv(result.state, cfg.out_dir + "/snapshot_final.csv");
    const DecayReport& r = result.report;
    std::printf("transient: steps to t=%.6g  M(0)=%.6g  M(end)=%.6g  floor=%.3g\n",
                result.state.t, r.M0(), r.M_final(), r.floor);
    std::printf("           lambda_bar=%.6g 1/s  fitted rate=%.6g 1/s (%s)  bound %s\n",
                r.lambda_bar, r.fitted_rate, r.fit_valid ? "valid" : "insufficient window",
                r.bound_satisfied ? "satisfied" : "VIOLATED");
    return 0;
}

int run_limit(const RunConfig& cfg) {
    const ModelParams p = cfg.to_params();
    const Grid1D grid = cfg.to_grid();
    const auto rows = epsilon_study(p, cfg.resolved_eps_list(), grid, cfg.limit_t_end);
    write_epsilon_csv(rows, cfg.out_dir + "/epsilon_study.csv");
    std::printf("%-12s %-12s %-12s %-12s %-12s %s\n", "eps", "k", "P", "gap|u1-q1|", "gap|u2-q2|",
                "dist-to-limit");
    for (const auto& r : rows)
        std::printf("%-12.4g %-12.4g %-12.4g %-12.4g %-12.4g %.4g\n", r.eps, r.k, r.P,
                    r.gap_u1_q1, r.gap_u2_q2, r.limit_distance_rel);
    return 0;
}

int run_sweep(const RunConfig& cfg) {
    const ModelParams p = cfg.to_params();
    const Grid1D grid = cfg.to_grid();
    const AxisSpacing spacing =
        cfg.P_spacing == "linear" ? AxisSpacing::Linear : AxisSpacing::Log;
    const bool want_curve = cfg.sweep_outputs.find("fic_curve") != std::string::npos;
    const bool want_grid = cfg.sweep_outputs.find("fic_grid") != std::string::npos;
    const bool want_profiles = cfg.sweep_outputs.find("profiles") != std::string::npos;

    if (want_curve) {
        SweepSpec spec;
        spec.P_values = spaced_values(cfg.P_min, cfg.P_max, cfg.P_count, spacing);
        spec.grid = grid;
        const auto curve = run_fic_curve(spec, p);
        write_fic_curve_csv(curve, cfg.out_dir + "/fic_curve.csv");
        const auto mx = std::max_element(curve.begin(), curve.end(),
                                         [](auto& a, auto& b) { return a.fic < b.fic; });
        std::printf("sweep: fic_curve.csv (%zu points, max FIC=%.4g%% at P=%.4g)\n", curve.size(),
                    mx->fic, mx->P);
    }
    if (want_grid) {
        SweepSpec spec;
        spec.P_values = spaced_values(cfg.P_min, cfg.P_max, cfg.P_count, spacing);
        spec.Vm_values = spaced_values(cfg.Vm_min, cfg.Vm_max, cfg.Vm_count, spacing);
        spec.grid = grid;
        const FicGrid g = run_fic_grid(spec, p);
        write_fic_grid_csv(g, cfg.out_dir + "/fic_grid.csv");
        std::printf("sweep: fic_grid.csv (%zux%zu), monotone in P: %s, in Vm: %s",
                    g.Vm_axis.size(), g.P_axis.size(), g.monotone_P ? "yes" : "NO",
                    g.monotone_Vm ? "yes" : "NO");
        if (g.violations) std::printf("  [%d violations]", g.violations);
        std::printf("\n");
    }
    if (want_profiles) {
        std::vector<ProfileRequest> reqs;
        for (double P : {2e-7, 2e-5})
            reqs.push_back(ProfileRequest{tag_for(P), with_permeability(p, P)});
        const auto files = emit_profiles(reqs, grid, cfg.out_dir);
        std::printf("sweep: wrote %zu profile files\n", files.size());
    }
    return 0;
}

int run_verify(const RunConfig& cfg) {
    const auto rows = verify_all(cfg);
    bool all = true;
    std::ostringstream table;
    for (const auto& r : rows) {
        char line[256];
        std::snprintf(line, sizeof line, "[%s] %-46s %12.4g  (%s)\n", r.pass ? " ok " : "FAIL",
                      r.name.c_str(), r.value, r.requirement.c_str());
        table << line;
        all = all && r.pass;
    }
    std::fputs(table.str().c_str(), stdout);
    std::printf("verify: %zu checks, %s\n", rows.size(), all ? "all passed" : "FAILURES present");
    write_text_file(cfg.out_dir + "/verify.txt", table.str());
    if (!all) throw VerificationError("invariant suite reported failures");
    return 0;
}

} // namespace

std::vector<CheckRow> verify_all(const RunConfig& cfg) {
    std::vector<CheckRow> rows;
    auto add = [&](const std::string& name, double value, const std::string& req, bool pass) {
        rows.push_back(CheckRow{name, value, req, pass});
    };

    const ModelParams p = cfg.to_params();
    const Grid1D grid = cfg.to_grid();

    { // flux conservation at random states
        std::mt19937_64 rng(42);
        std::uniform_real_distribution<double> dist(0.0, 200.0);
        double worst = 0.0;
        for (int i = 0; i < 1'000'000; ++i) {
            const ConcState s{dist(rng), dist(rng), dist(rng), dist(rng), dist(rng)};
            const FluxSet f = fluxes(s, p);
            const double sum = f.J1 + f.J2 + f.J3 + f.J4 + f.J0;
            const double scale = std::max({std::abs(f.J1), std::abs(f.J2), std::abs(f.J3),
                                           std::abs(f.J4), std::abs(f.J0)});
            if (scale > 0) worst = std::max(worst, std::abs(sum) / scale);
        }
        add("flux conservation (1e6 random states)", worst, "<= 1e-12", worst <= 1e-12);
    }
    { // pump properties
        const double g = lipschitz_bound_g(p.pump);
        bool monotone = true, bounded = true, deriv_ok = true;
        double prev = 0.0;
        for (int i = 0; i <= 20000; ++i) {
            const double q = 500.0 * i / 20000.0;
            const double G = pump_rate(q, p.pump);
            if (G < prev - 1e-18) monotone = false;
            if (G >= p.pump.Vm2 && p.pump.Vm2 > 0) bounded = false;
            const double Gp = pump_derivative(q, p.pump);
            if (Gp < 0 || Gp > g * (1 + 1e-12)) deriv_ok = false;
            prev = G;
        }
        add("pump rate monotone and bounded", (monotone && bounded) ? 1 : 0, "true",
            monotone && bounded);
        add("pump derivative within Lipschitz bound", deriv_ok ? 1 : 0, "true", deriv_ok);
    }
    { // boundary root: residual and independent bisection
        const double root = solve_boundary_q2(p.ub_bar, p, {cfg.newton_tol, cfg.newton_max_iter});
        const double res =
            std::abs(root + pump_rate(root, p.pump) / p.k - p.ub_bar) / p.ub_bar;
        add("boundary q2(0) residual", res, "<= 1e-12", res <= 1e-12);
        double lo = 0.0, hi = p.ub_bar;
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            (mid + pump_rate(mid, p.pump) / p.k - p.ub_bar < 0 ? lo : hi) = mid;
        }
        const double rel = std::abs(root - 0.5 * (lo + hi)) / root;
        add("boundary q2(0) vs plain bisection", rel, "<= 1e-10", rel <= 1e-10);
    }
    const SteadyProfile steady = solve_steady(p, grid, {cfg.newton_tol, cfg.newton_max_iter});
    { // steady residuals and ordering
        const SteadyResiduals res = steady_residuals(steady, p);
        add("steady equation residuals", res.worst, "<= 1e-8", res.worst <= 1e-8);
        double margin = 1e9;
        for (int i = 0; i < grid.n; ++i) {
            margin = std::min(margin, (steady.u[i] - steady.q2[i]) / steady.u[i]);
            margin = std::min(margin, (steady.q1[i] - steady.u[i]) / steady.u[i]);
            margin = std::min(margin, (steady.u0[i] - steady.q1[i]) / steady.u[i]);
        }
        add("ordering chain q2 < u < q1 < u0 margin", margin, "> 1e-9", margin > 1e-9);
    }
    { // RK4 self-convergence order
        const SteadyProfile ref = solve_steady(p, Grid1D::uniform(2001, p.geom.L));
        auto err = [&](int n) {
            const SteadyProfile s = solve_steady(p, Grid1D::uniform(n, p.geom.L));
            const std::size_t stride = 2000 / (n - 1);
            double e = 0.0;
            for (int i = 0; i < n; ++i)
                e = std::max(e, std::abs(s.q2[i] - ref.q2[i * stride]));
            return e;
        };
        const double order = std::log2(err(11) / err(21));
        add("RK4 self-convergence order", order, ">= 3.9", order >= 3.9);
    }
    { // sensitivities vs finite differences and signs
        const BoundarySensitivities bs = boundary_sensitivities(p);
        auto root_with = [&](double Vm2, double k) {
            ModelParams q = p;
            q.pump.Vm2 = Vm2;
            q.k = k;
            return solve_boundary_q2(q.ub_bar, q);
        };
        const double hV = 1e-6 * p.pump.Vm2, hk = 1e-6 * p.k;
        const double fdV = (root_with(p.pump.Vm2 + hV, p.k) - root_with(p.pump.Vm2 - hV, p.k)) /
                           (2.0 * hV);
        const double fdk = (root_with(p.pump.Vm2, p.k + hk) - root_with(p.pump.Vm2, p.k - hk)) /
                           (2.0 * hk);
        const double relV = std::abs(bs.dq20_dVm - fdV) / std::abs(fdV);
        const double relk = std::abs(bs.dq20_dk - fdk) / std::abs(fdk);
        add("dq2(0)/dVm vs finite difference", relV, "<= 1e-4", relV <= 1e-4);
        add("dq2(0)/dk vs finite difference", relk, "<= 1e-4", relk <= 1e-4);
        bool signs = true;
        for (double P : spaced_values(1e-8, 1e-5, 10, AxisSpacing::Log))
            for (double Vm : spaced_values(1e-5, 1e-4, 10, AxisSpacing::Log)) {
                const auto b =
                    boundary_sensitivities(with_pump_scale(with_permeability(p, P), Vm));
                if (!(b.dq20_dVm <= 0.0) || !(b.dq20_dk >= 0.0)) signs = false;
            }
        add("sensitivity signs on 10x10 grid", signs ? 1 : 0, "dVm<=0, dk>=0", signs);
    }
    { // axial gradient identity
        const AxialGradient ag = axial_gradient_at_origin(steady, p);
        const double rel = std::abs(ag.finite_difference - ag.analytic) / ag.analytic;
        add("axial gradient du/dx(0) = G(q2(0))/alpha", rel, "<= 1e-2", rel <= 1e-2);
    }
    { // eigen certificates
        const EigenInputs in = EigenInputs::from_params(p);
        const EigenPair pair = solve_eigenpair(in, grid);
        const EigenCertificates c = verify_eigenpair(pair);
        add("eigen |F(lambda)-1|", c.F_residual, "<= 1e-12", c.F_residual <= 1e-12);
        add("eigen lambda strictly in (0, lambda_minus)", c.lambda_window, "> 0",
            c.lambda_window > 0);
        add("eigen direct system residual", c.direct_residual, "<= 1e-8",
            c.direct_residual <= 1e-8);
        add("eigen dual system residual", c.dual_residual, "<= 1e-8", c.dual_residual <= 1e-8);
        add("eigen duality product constancy", c.duality_gap, "<= 1e-10", c.duality_gap <= 1e-10);
        add("eigen min(ph0 - phi2)", c.min_ph0_minus_phi2, "> 0", c.min_ph0_minus_phi2 > 0);
        add("eigen positivity on (0, L)", c.min_interior, "> 0", c.min_interior > 0);
        add("eigen normalization integrals", std::max(c.direct_norm_error, c.dual_norm_error),
            "<= 1e-9", std::max(c.direct_norm_error, c.dual_norm_error) <= 1e-9);
        add("eigen H(L)*k_lambda identity", c.H_identity_error, "<= 1e-10",
            c.H_identity_error <= 1e-10);
        const double F0 = eval_F(in, 0.0);
        const double F0_ref = 1.0 - std::exp(-in.g * in.L / (1.0 + in.g / in.k));
        add("eigen F(0) closed form", std::abs(F0 - F0_ref), "<= 1e-14 abs",
            std::abs(F0 - F0_ref) <= 1e-14);
        // scale invariance: (g,k,K1) *= s, L /= s leaves F invariant under lambda -> s lambda
        const double s = 1e6;
        const EigenInputs in2{in.g * s, in.k * s, in.K1 * s, in.L / s};
        const double l1 = solve_lambda(in).lambda, l2 = solve_lambda(in2).lambda;
        const double rel = std::abs(l2 - s * l1) / (s * l1);
        add("eigen lambda scale invariance", rel, "<= 1e-9", rel <= 1e-9);
    }
    { // transient ledgers + positivity
        auto ledger = [&](Scheme scheme, const ModelParams& pp, int n, int nsteps) {
            const Grid1D g2 = Grid1D::uniform(n, pp.geom.L);
            TransientState s = initialize_flat(pp, g2, pp.ub_bar);
            const BoundarySignal ub = BoundarySignal::constant(pp.ub_bar);
            const double dt = max_stable_dt(pp, g2, scheme);
            StepWorkspace ws;
            double worst = 0.0;
            double minv = 0.0;
            for (int i = 0; i < nsteps; ++i) {
                const double before = mass_total(s, pp);
                const StepInfo info = step(s, pp, ub, dt, scheme, ws);
                const double after = mass_total(s, pp);
                worst = std::max(worst, std::abs(after - before - info.boundary_flux) / before);
                for (const auto* v : {&s.u1, &s.u2, &s.q1, &s.q2, &s.u0})
                    minv = std::min(minv, *std::min_element(v->begin(), v->end()));
            }
            return std::pair{worst, minv};
        };
        const auto [we, me] = ledger(Scheme::ExplicitEuler, p, 201, 1000);
        add("mass ledger, explicit (1000 steps)", we, "<= 1e-12", we <= 1e-12);
        add("positivity, explicit", me, ">= -1e-12", me >= -1e-12);
        const auto [wi, mi] = ledger(Scheme::ImplicitExchange, with_permeability(p, 1e-3), 101, 200);
        add("mass ledger, implicit-exchange (200 steps)", wi, "<= 1e-12", wi <= 1e-12);
        add("positivity, implicit-exchange", mi, ">= -1e-12", mi >= -1e-12);
    }
    { // weighted norm homogeneity
        const EigenPair pair = solve_eigenpair(EigenInputs::from_params(p), grid);
        TransientState s1;
        s1.grid = grid;
        s1.u1 = steady.u;
        s1.u2 = steady.u;
        s1.q1 = steady.q1;
        s1.q2 = steady.q2;
        s1.u0 = steady.u0;
        TransientState s2 = s1;
        for (int i = 0; i < grid.n; ++i) {
            const double d = 1.0 + 0.01 * std::sin(7.0 * grid.x(i) / grid.length);
            s1.u1[i] += d;
            s2.u1[i] += 2 * d;
            s1.q2[i] += 0.5 * d;
            s2.q2[i] += d;
        }
        const double m1 = weighted_norm(s1, steady, pair, p);
        const double m2 = weighted_norm(s2, steady, pair, p);
        const double rel = std::abs(m2 - 2.0 * m1) / m2;
        add("weighted norm homogeneity", rel, "<= 1e-12", rel <= 1e-12);
    }
    return rows;
}

int dispatch(const std::string& subcommand, const RunConfig& cfg) {
    try {
        fs::create_directories(cfg.out_dir);
        write_text_file(cfg.out_dir + "/manifest", serialize_config(cfg));
        if (subcommand == "steady") return run_steady(cfg);
        if (subcommand == "eigen") return run_eigen(cfg);
        if (subcommand == "transient") return run_transient(cfg);
        if (subcommand == "limit") return run_limit(cfg);
        if (subcommand == "sweep") return run_sweep(cfg);
        if (subcommand == "verify") return run_verify(cfg);
        std::cerr << "unknown subcommand: " << subcommand << "\n";
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const VerificationError& e) {
        std::cerr << "verification failure: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 2;
    }
}

} // namespace ccsim
