#pragma once

#include <array>
#include <vector>

#include "ccsim/grid.hpp"
#include "ccsim/params.hpp"

namespace ccsim {

/// Steady-state profiles. `u` holds the common luminal concentration
/// (u1 == u2 at steady state, a consequence of constant alpha).
struct SteadyProfile {
    Grid1D grid{};
    std::vector<double> u, q1, q2, u0;
    double q2_0 = 0.0; ///< boundary value q2(0)
    double fic = 0.0;  ///< 100 * (u(L) - u(0)) / u(0)
};

struct NewtonOptions {
    double rel_tol = 1e-12;
    int max_iter = 50;
};

/// Unique positive root of y + G(y)/k = ub_bar. Newton from ub_bar with
/// bisection fallback on [0, ub_bar]; residual <= rel_tol * ub_bar.
/// Returns ub_bar directly when the pump is off or k is not finite-positive.
double solve_boundary_q2(double ub_bar, const ModelParams& p, const NewtonOptions& = {});

/// RK4 integration of dq2/dx = G(q2) / (alpha (1 + G'(q2)/k)) on the grid.
std::vector<double> integrate_q2(double q2_0, const ModelParams& p, const Grid1D& grid);

/// u = q2 + G/k, q1 = q2 + 2G/k, u0 = (1/K1 + 2/k) G + q2.
SteadyProfile reconstruct(std::vector<double> q2, const ModelParams& p, const Grid1D& grid);

/// Boundary solve + RK4 + reconstruction.
SteadyProfile solve_steady(const ModelParams& p, const Grid1D& grid, const NewtonOptions& = {});

double fic(const SteadyProfile& profile);

struct BoundarySensitivities {
    double dq20_dVm; ///< d q2(0) / d Vm2  (<= 0)
    double dq20_dk;  ///< d q2(0) / d k    (>= 0)
};
BoundarySensitivities boundary_sensitivities(const ModelParams& p, const NewtonOptions& = {});

struct AxialGradient {
    double analytic;          ///< G(q2(0)) / alpha
    double finite_difference; ///< one-sided second-order slope of u at x = 0
};
AxialGradient axial_gradient_at_origin(const SteadyProfile& profile, const ModelParams& p);

/// Large- and small-permeability regimes.
struct LimitRegimes {
    SteadyProfile k_inf; ///< k -> inf: u = q1 = q2 with q2(0) = ub, u0 = q2 + G/K1
    double k0_gradient;  ///< k -> 0: dq2/dx at the boundary value (-> 0)
    double k0_q2;        ///< the (constant) q2 level of the k -> 0 branch
};
LimitRegimes limit_regimes(const ModelParams& p, const Grid1D& grid);

/// Max relative residual of each steady equation, derivative terms by
/// second-order finite differences. Order: the two transport rows, then
/// the three algebraic exchange rows.
struct SteadyResiduals {
    std::array<double, 5> rel{};
    double worst = 0.0;
};
SteadyResiduals steady_residuals(const SteadyProfile& profile, const ModelParams& p);

/// Conditioning of the reduced-ODE denominator 1 + G'(q2)/k along a
/// profile: extremes and their ratio (diagnostic only).
struct DenominatorDiagnostic {
    double min_value = 0.0;
    double max_value = 0.0;
    double condition = 0.0; ///< max_value / min_value
};
DenominatorDiagnostic reduced_denominator_diagnostic(const SteadyProfile& profile,
                                                     const ModelParams& p);

} // namespace ccsim
