#include "ccsim/eigenproblem.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <initializer_list>
#include <limits>

#include "ccsim/errors.hpp"
#include "ccsim/quadrature.hpp"

namespace ccsim {

namespace {

// expm1(w)/w, continuous through w = 0.
double em1_over(double w) {
    return w == 0.0 ? 1.0 : std::expm1(w) / w;
}

void check_inputs(const EigenInputs& in) {
    if (!(in.g > 0)) throw std::invalid_argument("eigen: g must be positive");
    if (!(in.k > 0) || !(in.K1 > 0)) throw std::invalid_argument("eigen: k, K1 must be positive");
    if (!(in.L > 0)) throw std::invalid_argument("eigen: L must be positive");
}

// U1/U2 in closed form: B * expm1(growth x) / growth with
// B = g k_lambda / (1 + (g - lambda)/k). Equals F at x = L.
struct RatioEval {
    double B, growth;
    double operator()(double x) const { return B * x * em1_over(growth * x); }
    double derivative(double x) const { return B * std::exp(growth * x); }
};

RatioEval make_ratio(const EigenInputs& in, double lambda, const CharCoeffs& cc) {
    const double B = in.g * cc.k_lambda / (1.0 + (in.g - lambda) / in.k);
    return RatioEval{B, cc.growth};
}

} // namespace

EigenInputs EigenInputs::from_params(const ModelParams& p) {
    return EigenInputs{lipschitz_bound_g(p.pump), p.k, p.K1, p.geom.L};
}

EigenInputs EigenInputs::from_params(const ModelParams& p, double g_override) {
    return EigenInputs{g_override, p.k, p.K1, p.geom.L};
}

PoleData PoleData::compute(double k, double K1) {
    PoleData pd;
    pd.spread = std::hypot(2.0 * K1, k);
    pd.lambda_plus = 0.5 * (2.0 * K1 + k + pd.spread);
    pd.lambda_minus = k * K1 / pd.lambda_plus;
    pd.K1_minus_lm = 0.5 * (pd.spread - k);
    return pd;
}

double lambda_minus(double k, double K1) {
    if (!(k > 0) || !(K1 > 0)) throw std::domain_error("lambda_minus: k, K1 must be positive");
    return PoleData::compute(k, K1).lambda_minus;
}

CharCoeffs char_coeffs_delta(const EigenInputs& in, double delta) {
    check_inputs(in);
    const PoleData pd = PoleData::compute(in.k, in.K1);
    if (!(delta > 0) || delta > pd.lambda_minus * (1.0 + 1e-12))
        throw std::domain_error("char_coeffs: lambda outside [0, lambda_minus)");
    const double lambda = pd.lambda_minus - delta;
    CharCoeffs cc;
    // (K1 - lambda) D = (lambda_plus - lambda)(lambda_minus - lambda); both
    // factors are additions of positive terms, so no cancellation near the pole.
    cc.D = (pd.spread + delta) * delta / (pd.K1_minus_lm + delta);
    cc.k_lambda = in.k * in.K1 / ((pd.spread + delta) * delta);
    cc.c_lambda = lambda + in.k * (in.k - cc.D) / cc.D;
    cc.eta = in.k * (in.g - lambda) / (in.k + in.g - lambda);
    cc.growth = cc.c_lambda + lambda - cc.eta;
    return cc;
}

CharCoeffs char_coeffs(const EigenInputs& in, double lambda) {
    check_inputs(in);
    const PoleData pd = PoleData::compute(in.k, in.K1);
    if (lambda < 0 || lambda >= pd.lambda_minus)
        throw std::domain_error("char_coeffs: lambda outside [0, lambda_minus)");
    return char_coeffs_delta(in, pd.lambda_minus - lambda);
}

double eval_F_delta(const EigenInputs& in, double delta) {
    const PoleData pd = PoleData::compute(in.k, in.K1);
    const CharCoeffs cc = char_coeffs_delta(in, delta);
    const double lambda = pd.lambda_minus - delta;
    const double zL = cc.growth * in.L;
    if (zL > 709.0) return std::numeric_limits<double>::infinity();
    const double B = in.g * cc.k_lambda / (1.0 + (in.g - lambda) / in.k);
    return B * in.L * em1_over(zL);
}

double eval_F(const EigenInputs& in, double lambda) {
    const PoleData pd = PoleData::compute(in.k, in.K1);
    if (lambda < 0 || lambda >= pd.lambda_minus)
        throw std::domain_error("eval_F: lambda outside [0, lambda_minus)");
    return eval_F_delta(in, pd.lambda_minus - lambda);
}

LambdaRoot solve_lambda(const EigenInputs& in, LambdaSolveMode mode) {
    check_inputs(in);
    const PoleData pd = PoleData::compute(in.k, in.K1);
    const double lm = pd.lambda_minus;

    if (eval_F_delta(in, lm) >= 1.0)
        throw SolverError("solve_lambda: F(0) >= 1, characteristic equation malformed");

    // Bracket in delta: F < 1 at delta = lambda_minus (lambda = 0) and
    // F -> +inf as delta -> 0+. Geometric descent is guaranteed to stop
    // before delta underflows.
    int iters = 0;
    double d_hi = lm; // F(d_hi) < 1
    double d_lo = 0.5 * lm;
    while (eval_F_delta(in, d_lo) < 1.0) {
        d_hi = d_lo;
        d_lo *= 0.5;
        if (++iters > 1100)
            throw SolverError("solve_lambda: bracket search exhausted");
    }

    // Log-space bisection keeps uniform relative resolution across the
    // many decades delta may span.
    double a = std::log(d_lo), b = std::log(d_hi);
    const double t_tol = (mode == LambdaSolveMode::BisectionOnly) ? 4e-16 : 1e-8;
    while (b - a > t_tol && iters < 400) {
        const double m = 0.5 * (a + b);
        (eval_F_delta(in, std::exp(m)) >= 1.0 ? a : b) = m;
        ++iters;
    }
    double t = 0.5 * (a + b);

    if (mode == LambdaSolveMode::NewtonPolish) {
        for (int i = 0; i < 40; ++i) {
            const double phi = eval_F_delta(in, std::exp(t)) - 1.0;
            ++iters;
            if (std::abs(phi) <= 1e-13) break;
            const double dtt = 1e-7;
            const double dphi =
                (eval_F_delta(in, std::exp(t + dtt)) - eval_F_delta(in, std::exp(t - dtt))) /
                (2.0 * dtt);
            double next = t - phi / dphi;
            if (!std::isfinite(next) || next <= a || next >= b) next = 0.5 * (a + b);
            if (phi > 0.0)
                a = std::max(a, t);
            else
                b = std::min(b, t);
            if (next == t) break;
            t = next;
        }
    }

    LambdaRoot root;
    root.delta = std::exp(t);
    root.lambda_minus = lm;
    root.lambda = lm - root.delta;
    root.F_residual = eval_F_delta(in, root.delta) - 1.0;
    root.iterations = iters;
    if (!(std::abs(root.F_residual) <= 1e-12))
        throw SolverError("solve_lambda: |F - 1| = " + std::to_string(root.F_residual) +
                          " above tolerance");
    return root;
}

DirectEigenfunctions direct_eigenfunctions(const EigenInputs& in, const LambdaRoot& root,
                                           const Grid1D& grid) {
    const CharCoeffs cc = char_coeffs_delta(in, root.delta);
    const double lambda = root.lambda;
    // K1 - lambda = (K1 - lambda_minus) + delta, kept in added form.
    const double K1ml = PoleData::compute(in.k, in.K1).K1_minus_lm + root.delta;
    const RatioEval ratio = make_ratio(in, lambda, cc);
    const double q2_factor = 1.0 / (1.0 + (in.g - lambda) / in.k);

    const int n = grid.n;
    DirectEigenfunctions d;
    d.U1.resize(n);
    d.U2.resize(n);
    d.Q1.resize(n);
    d.Q2.resize(n);
    d.U0.resize(n);
    for (int i = 0; i < n; ++i) {
        const double x = grid.x(i);
        const double U2 = lambda * std::exp((cc.eta - lambda) * x); // construction gauge U2(0)=lambda
        const double U1 = ratio(x) * U2;
        const double Q2 = q2_factor * U2;
        const double Q1 = (in.k * U1 + in.K1 * in.g / K1ml * Q2) / cc.D;
        const double U0 = (in.K1 * Q1 + in.g * Q2) / K1ml;
        d.U1[i] = U1;
        d.U2[i] = U2;
        d.Q1[i] = Q1;
        d.Q2[i] = Q2;
        d.U0[i] = U0;
    }
    std::vector<double> sum(n);
    for (int i = 0; i < n; ++i)
        sum[i] = d.U1[i] + d.U2[i] + d.Q1[i] + d.Q2[i] + d.U0[i];
    d.norm = integrate_uniform(sum, grid.h());
    for (auto* v : {&d.U1, &d.U2, &d.Q1, &d.Q2, &d.U0})
        for (double& x : *v) x /= d.norm;
    return d;
}

DualEigenfunctions dual_eigenfunctions(const EigenInputs& in, const LambdaRoot& root,
                                       const DirectEigenfunctions& direct, const Grid1D& grid) {
    const PoleData pd = PoleData::compute(in.k, in.K1);
    const CharCoeffs cc = char_coeffs_delta(in, root.delta);
    const double lambda = root.lambda;
    const RatioEval ratio = make_ratio(in, lambda, cc);

    const int n = grid.n;
    DualEigenfunctions d;
    d.beta = lambda * in.k * (2.0 * in.K1 - lambda) / ((pd.spread + root.delta) * root.delta);
    d.ph1.resize(n);
    d.ph2.resize(n);
    d.phi1.resize(n);
    d.phi2.resize(n);
    d.ph0.resize(n);
    for (int i = 0; i < n; ++i) {
        const double x = grid.x(i);
        const double p1 = std::exp(-(lambda + d.beta) * x); // gauge ph1(0) = 1
        const double r = ratio(x);
        d.ph1[i] = p1;
        d.ph2[i] = r * p1;
        d.phi1[i] = p1 * in.k / cc.D;
        d.phi2[i] = (in.k * r + in.g * cc.k_lambda) * p1 / (in.k - lambda + in.g);
        d.ph0[i] = cc.k_lambda * p1;
    }
    std::vector<double> prod(n);
    for (int i = 0; i < n; ++i)
        prod[i] = direct.U1[i] * d.ph1[i] + direct.U2[i] * d.ph2[i] + direct.Q1[i] * d.phi1[i] +
                  direct.Q2[i] * d.phi2[i] + direct.U0[i] * d.ph0[i];
    const double J = integrate_uniform(prod, grid.h());
    for (auto* v : {&d.ph1, &d.ph2, &d.phi1, &d.phi2, &d.ph0})
        for (double& x : *v) x /= J;
    d.ph1_0 = d.ph1.front();
    return d;
}

EigenPair solve_eigenpair(const EigenInputs& in, const Grid1D& grid, LambdaSolveMode mode) {
    EigenPair pair;
    pair.inputs = in;
    pair.grid = grid;
    pair.root = solve_lambda(in, mode);
    pair.direct = direct_eigenfunctions(in, pair.root, grid);
    pair.dual = dual_eigenfunctions(in, pair.root, pair.direct, grid);
    return pair;
}

EigenCertificates verify_eigenpair(const EigenPair& pair) {
    const EigenInputs& in = pair.inputs;
    const Grid1D& grid = pair.grid;
    const LambdaRoot& root = pair.root;
    const CharCoeffs cc = char_coeffs_delta(in, root.delta);
    const double lambda = root.lambda;
    const double g = in.g, k = in.k, K1 = in.K1;
    const RatioEval ratio = make_ratio(in, lambda, cc);
    const auto& D = pair.direct;
    const auto& P = pair.dual;
    const int n = grid.n;

    EigenCertificates cert;
    cert.F_residual = std::abs(root.F_residual);
    cert.lambda_window = std::min(lambda, root.delta);

    // Analytic derivatives of the closed forms:
    //   U2' = (eta - lambda) U2
    //   U1' = (eta - lambda) U1 + lambda B e^{c x} (scaled by the direct norm)
    //   ph1' = -(lambda + beta) ph1
    //   ph2' = ratio' ph1 + ratio ph1',   ratio' = B e^{growth x}
    const double u1_src = lambda * ratio.B / D.norm;

    std::array<double, 5> dworst{}, dscale{}, gworst{}, gscale{};
    double gap_worst = 0.0, gap_scale = 0.0;
    double min_ph0_phi2 = std::numeric_limits<double>::infinity();
    double min_ph0_phi2_rel = std::numeric_limits<double>::infinity();
    double min_interior = std::numeric_limits<double>::infinity();

    auto track = [](std::array<double, 5>& w, std::array<double, 5>& s, int j, double r,
                    std::initializer_list<double> terms) {
        double m = 0.0;
        for (double t : terms) m = std::max(m, std::abs(t));
        w[j] = std::max(w[j], std::abs(r));
        s[j] = std::max(s[j], m);
    };

    for (int i = 0; i < n; ++i) {
        const double x = grid.x(i);
        const double dU2 = (cc.eta - lambda) * D.U2[i];
        const double dU1 = (cc.eta - lambda) * D.U1[i] + u1_src * std::exp(cc.c_lambda * x);
        track(dworst, dscale, 0, dU1 - lambda * D.U1[i] - k * (D.Q1[i] - D.U1[i]),
              {dU1, lambda * D.U1[i], k * D.Q1[i], k * D.U1[i]});
        track(dworst, dscale, 1, -dU2 - lambda * D.U2[i] - k * (D.Q2[i] - D.U2[i]),
              {dU2, lambda * D.U2[i], k * D.Q2[i], k * D.U2[i]});
        track(dworst, dscale, 2, lambda * D.Q1[i] + k * (D.U1[i] - D.Q1[i]) + K1 * (D.U0[i] - D.Q1[i]),
              {lambda * D.Q1[i], k * D.U1[i], k * D.Q1[i], K1 * D.U0[i], K1 * D.Q1[i]});
        track(dworst, dscale, 3, lambda * D.Q2[i] + k * (D.U2[i] - D.Q2[i]) - g * D.Q2[i],
              {lambda * D.Q2[i], k * D.U2[i], k * D.Q2[i], g * D.Q2[i]});
        track(dworst, dscale, 4, lambda * D.U0[i] + K1 * (D.Q1[i] - D.U0[i]) + g * D.Q2[i],
              {lambda * D.U0[i], K1 * D.Q1[i], K1 * D.U0[i], g * D.Q2[i]});

        const double dph1 = -(lambda + P.beta) * P.ph1[i];
        const double dph2 = ratio.derivative(x) * P.ph1[i] + ratio(x) * dph1;
        track(gworst, gscale, 0, -dph1 - lambda * P.ph1[i] - k * (P.phi1[i] - P.ph1[i]),
              {dph1, lambda * P.ph1[i], k * P.phi1[i], k * P.ph1[i]});
        track(gworst, gscale, 1, dph2 - lambda * P.ph2[i] - k * (P.phi2[i] - P.ph2[i]),
              {dph2, lambda * P.ph2[i], k * P.phi2[i], k * P.ph2[i]});
        track(gworst, gscale, 2,
              lambda * P.phi1[i] + k * (P.ph1[i] - P.phi1[i]) + K1 * (P.ph0[i] - P.phi1[i]),
              {lambda * P.phi1[i], k * P.ph1[i], k * P.phi1[i], K1 * P.ph0[i], K1 * P.phi1[i]});
        track(gworst, gscale, 3,
              lambda * P.phi2[i] + k * (P.ph2[i] - P.phi2[i]) + g * (P.ph0[i] - P.phi2[i]),
              {lambda * P.phi2[i], k * P.ph2[i], k * P.phi2[i], g * P.ph0[i], g * P.phi2[i]});
        track(gworst, gscale, 4, lambda * P.ph0[i] + K1 * (P.phi1[i] - P.ph0[i]),
              {lambda * P.ph0[i], K1 * P.phi1[i], K1 * P.ph0[i]});

        const double prod1 = D.U1[i] * P.ph1[i];
        gap_worst = std::max(gap_worst, std::abs(prod1 - D.U2[i] * P.ph2[i]));
        gap_scale = std::max(gap_scale, std::abs(prod1));

        const double diff = P.ph0[i] - P.phi2[i];
        min_ph0_phi2 = std::min(min_ph0_phi2, diff);
        min_ph0_phi2_rel = std::min(min_ph0_phi2_rel, diff / P.ph0[i]);

        if (i > 0 && i < n - 1) {
            for (double v : {D.U1[i], D.U2[i], D.Q1[i], D.Q2[i], D.U0[i], P.ph1[i], P.ph2[i],
                             P.phi1[i], P.phi2[i], P.ph0[i]})
                min_interior = std::min(min_interior, v);
        }
    }

    for (int j = 0; j < 5; ++j) {
        cert.direct_residual = std::max(cert.direct_residual, dworst[j] / dscale[j]);
        cert.dual_residual = std::max(cert.dual_residual, gworst[j] / gscale[j]);
    }
    cert.boundary_direct = std::abs(D.U1[n - 1] - D.U2[n - 1]) / D.U2[n - 1];
    cert.boundary_dual = std::abs(P.ph1[n - 1] - P.ph2[n - 1]) / P.ph1[n - 1];
    cert.duality_gap = gap_worst / gap_scale;
    cert.min_ph0_minus_phi2 = min_ph0_phi2;
    cert.min_ph0_minus_phi2_rel = min_ph0_phi2_rel;
    cert.min_interior = min_interior;

    std::vector<double> sum(n), prod(n);
    for (int i = 0; i < n; ++i) {
        sum[i] = D.U1[i] + D.U2[i] + D.Q1[i] + D.Q2[i] + D.U0[i];
        prod[i] = D.U1[i] * P.ph1[i] + D.U2[i] * P.ph2[i] + D.Q1[i] * P.phi1[i] +
                  D.Q2[i] * P.phi2[i] + D.U0[i] * P.ph0[i];
    }
    cert.direct_norm_error = std::abs(integrate_uniform(sum, grid.h()) - 1.0);
    cert.dual_norm_error = std::abs(integrate_uniform(prod, grid.h()) - 1.0);

    // H(x) = [g / (1 + (g - lambda)/k)] (e^{growth x} - 1)/growth; the
    // boundary condition F = 1 forces H(L) = 1/k_lambda.
    cert.H_identity_error = std::abs(
        cc.k_lambda * (in.g / (1.0 + (in.g - lambda) / in.k)) * in.L * em1_over(cc.growth * in.L) -
        1.0);
    return cert;
}

std::vector<std::string> EigenCertificates::failures(const EigenThresholds& t) const {
    std::vector<std::string> out;
    auto req = [&](bool ok, const std::string& what) {
        if (!ok) out.push_back(what);
    };
    req(F_residual <= t.f_residual, "|F(lambda) - 1| = " + std::to_string(F_residual));
    req(lambda_window > 0.0, "lambda not strictly inside (0, lambda_minus)");
    req(direct_residual <= t.system_residual,
        "direct system residual = " + std::to_string(direct_residual));
    req(dual_residual <= t.system_residual,
        "dual system residual = " + std::to_string(dual_residual));
    req(boundary_direct <= t.boundary, "U1(L) != U2(L): " + std::to_string(boundary_direct));
    req(boundary_dual <= t.boundary, "ph1(L) != ph2(L): " + std::to_string(boundary_dual));
    req(duality_gap <= t.duality_gap, "U1 ph1 - U2 ph2 not constant: " + std::to_string(duality_gap));
    req(min_ph0_minus_phi2 > 0.0, "phi2 >= ph0 somewhere (min gap " +
                                      std::to_string(min_ph0_minus_phi2) + ")");
    req(min_interior > 0.0, "eigenfunction component not strictly positive on (0, L)");
    req(direct_norm_error <= t.normalization,
        "direct normalization error = " + std::to_string(direct_norm_error));
    req(dual_norm_error <= t.normalization,
        "dual normalization error = " + std::to_string(dual_norm_error));
    req(H_identity_error <= t.h_identity, "H(L) k_lambda != 1: " + std::to_string(H_identity_error));
    return out;
}

void validate_eigenpair(const EigenPair& pair, const EigenThresholds& t) {
    const auto cert = verify_eigenpair(pair);
    const auto fails = cert.failures(t);
    if (fails.empty()) return;
    std::string msg = "eigenpair verification failed:";
    for (const auto& f : fails) msg += "\n  - " + f;
    throw VerificationError(msg);
}

} // namespace ccsim
