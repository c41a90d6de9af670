#pragma once

#include <string>
#include <vector>

#include "ccsim/grid.hpp"
#include "ccsim/params.hpp"

namespace ccsim {

/// Inputs of the auxiliary linear eigen-problem.
struct EigenInputs {
    double g;  ///< pump Lipschitz constant (default: lipschitz_bound_g)
    double k;  ///< lumen <-> epithelium exchange
    double K1; ///< epithelium <-> interstitium exchange
    double L;  ///< tubule length

    static EigenInputs from_params(const ModelParams& p);
    static EigenInputs from_params(const ModelParams& p, double g_override);
};

/// Roots of lambda^2 - (2 K1 + k) lambda + k K1 (the characteristic
/// denominator times (K1 - lambda)), in cancellation-free form.
struct PoleData {
    double lambda_minus;
    double lambda_plus;
    double spread;      ///< lambda_plus - lambda_minus = sqrt(4 K1^2 + k^2)
    double K1_minus_lm; ///< K1 - lambda_minus = (spread - k) / 2

    static PoleData compute(double k, double K1);
};

/// (2 K1 + k - sqrt(4 K1^2 + k^2)) / 2, evaluated as k K1 / lambda_plus.
double lambda_minus(double k, double K1);

struct CharCoeffs {
    double k_lambda; ///< k K1 / ((lambda_plus - lambda)(lambda_minus - lambda))
    double c_lambda;
    double eta;
    double growth; ///< c_lambda + lambda - eta
    double D;      ///< k - lambda - K1 lambda / (K1 - lambda)
};

/// Characteristic coefficients evaluated from delta = lambda_minus - lambda.
/// Evaluating from delta keeps the denominators accurate arbitrarily close
/// to the pole, where the physical parameter regime places the eigenvalue.
CharCoeffs char_coeffs_delta(const EigenInputs& in, double delta);

/// Same via lambda; domain error outside [0, lambda_minus).
CharCoeffs char_coeffs(const EigenInputs& in, double lambda);

double eval_F_delta(const EigenInputs& in, double delta);
double eval_F(const EigenInputs& in, double lambda);

enum class LambdaSolveMode { BisectionOnly, NewtonPolish };

struct LambdaRoot {
    double lambda = 0.0;
    double delta = 0.0; ///< lambda_minus - lambda, the primary solver unknown
    double lambda_minus = 0.0;
    double F_residual = 0.0; ///< F(delta) - 1 at the root
    int iterations = 0;
};

/// The unique lambda in (0, lambda_minus) with F(lambda) = 1.
/// |F - 1| <= 1e-12 measured in the delta parametrization.
LambdaRoot solve_lambda(const EigenInputs& in,
                        LambdaSolveMode mode = LambdaSolveMode::NewtonPolish);

/// Direct eigenfunctions, stored with the normalization
/// int (U1+U2+Q1+Q2+U0) dx = 1. In exact arithmetic this coincides with the
/// construction gauge U2(0) = lambda (summing the system and integrating
/// gives U1(L)-U2(L)+U2(0) = lambda * int sum); `norm` is the measured
/// quadrature value of the integral in that gauge, so construction-gauge
/// values are norm * stored values.
struct DirectEigenfunctions {
    std::vector<double> U1, U2, Q1, Q2, U0;
    double norm = 1.0;
};

DirectEigenfunctions direct_eigenfunctions(const EigenInputs& in, const LambdaRoot& root,
                                           const Grid1D& grid);

/// Dual eigenfunctions, normalized so int Phi . U dx = 1.
struct DualEigenfunctions {
    std::vector<double> ph1, ph2, phi1, phi2, ph0;
    double ph1_0 = 0.0; ///< normalized ph1(0)
    double beta = 0.0;  ///< dual decay exponent; positive on (0, lambda_minus)
};

DualEigenfunctions dual_eigenfunctions(const EigenInputs& in, const LambdaRoot& root,
                                       const DirectEigenfunctions& direct, const Grid1D& grid);

struct EigenPair {
    EigenInputs inputs{};
    LambdaRoot root{};
    Grid1D grid{};
    DirectEigenfunctions direct{};
    DualEigenfunctions dual{};

    double lambda() const { return root.lambda; }
};

EigenPair solve_eigenpair(const EigenInputs& in, const Grid1D& grid,
                          LambdaSolveMode mode = LambdaSolveMode::NewtonPolish);

struct EigenThresholds {
    double f_residual = 1e-12;
    double system_residual = 1e-8;
    double boundary = 1e-10;
    double duality_gap = 1e-10;
    double normalization = 1e-9;
    double h_identity = 1e-10;
};

/// Certificate record for an assembled pair. All residuals are relative to
/// the dominant term magnitude of the corresponding equation.
struct EigenCertificates {
    double F_residual = 0.0;
    double direct_residual = 0.0; ///< worst of the five direct equations
    double dual_residual = 0.0;   ///< worst of the five dual equations
    double boundary_direct = 0.0; ///< |U1(L) - U2(L)| / U2(L)
    double boundary_dual = 0.0;   ///< |ph1(L) - ph2(L)| / ph1(L)
    double duality_gap = 0.0;     ///< max |U1 ph1 - U2 ph2| / max U1 ph1
    double min_ph0_minus_phi2 = 0.0;
    double min_ph0_minus_phi2_rel = 0.0; ///< relative to ph0
    double direct_norm_error = 0.0;      ///< |int sum U - 1|
    double dual_norm_error = 0.0;        ///< |int Phi . U - 1|
    double H_identity_error = 0.0;       ///< |k_lambda H(L) - 1|
    double lambda_window = 0.0;          ///< min(lambda, lambda_minus - lambda)
    double min_interior = 0.0;           ///< min of all ten components over (0, L)

    std::vector<std::string> failures(const EigenThresholds& t = {}) const;
    bool pass(const EigenThresholds& t = {}) const { return failures(t).empty(); }
};

EigenCertificates verify_eigenpair(const EigenPair& pair);

/// Throws VerificationError listing every failed certificate.
void validate_eigenpair(const EigenPair& pair, const EigenThresholds& t = {});

} // namespace ccsim
