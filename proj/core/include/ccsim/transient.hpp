#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ccsim/eigenproblem.hpp"
#include "ccsim/grid.hpp"
#include "ccsim/params.hpp"
#include "ccsim/steady.hpp"

namespace ccsim {

/// Inflow concentration u_b(t). Exponential mode approaches ub_bar as
/// ub_bar + C0 exp(-mu0 t); table mode interpolates linearly and holds the
/// last value. ub(t) must stay nonnegative.
struct BoundarySignal {
    enum class Mode { Constant, Exponential, Table };

    Mode mode = Mode::Constant;
    double ub_bar = 0.0;
    double C0 = 0.0;
    double mu0 = 0.0;
    std::vector<std::pair<double, double>> table;

    static BoundarySignal constant(double ub_bar);
    static BoundarySignal exponential(double ub_bar, double C0, double mu0);
    static BoundarySignal from_table(double ub_bar, std::vector<std::pair<double, double>> pts);

    double operator()(double t) const;
};

struct TransientState {
    double t = 0.0;
    Grid1D grid{};
    std::vector<double> u1, u2, q1, q2, u0;
};

enum class Preset { Steady, Flat, PerturbedSteady };

TransientState initialize_flat(const ModelParams& p, const Grid1D& grid, double value);
TransientState initialize_steady(const ModelParams& p, const Grid1D& grid);
/// steady + eps * sin(pi x / L) added to every field, clipped at 0.
TransientState initialize_perturbed(const ModelParams& p, const Grid1D& grid, double eps);
/// Validates fields (finite, nonnegative, consistent sizes).
TransientState initialize_from_fields(const Grid1D& grid, std::vector<double> u1,
                                      std::vector<double> u2, std::vector<double> q1,
                                      std::vector<double> q2, std::vector<double> u0);

enum class Scheme { ExplicitEuler, ImplicitExchange };

/// Largest admissible step: transport CFL on both lumens plus, for the
/// explicit scheme, the linearized stiffness bound of the exchange block.
double max_stable_dt(const ModelParams& p, const Grid1D& grid, Scheme scheme);

/// Reusable scratch buffers for step().
struct StepWorkspace {
    std::vector<double> J1, J2, X, G;
};

struct StepInfo {
    double boundary_flux = 0.0; ///< dt * alpha * (ub(t) - u2(t, 0)), the exact mass change
};

/// One forward step. Boundary values enter as upwind ghost fluxes
/// (inflow u_b(t) at x=0, hairpin u1(t,L) into tubule 2); the exchange
/// terms are computed once per node and applied with shared negations so
/// they cancel exactly in the discrete total-mass ledger.
StepInfo step(TransientState& s, const ModelParams& p, const BoundarySignal& ub, double dt,
              Scheme scheme, StepWorkspace& ws);
StepInfo step(TransientState& s, const ModelParams& p, const BoundarySignal& ub, double dt,
              Scheme scheme = Scheme::ExplicitEuler);

/// h * sum_i (a1 u1 + a2 u2 + a3 q1 + a4 q2 + a0 u0), compensated summation.
double mass_total(const TransientState& s, const ModelParams& p);

/// Lyapunov functional M = int sum a_i |field - steady| (dual weight) dx.
double weighted_norm(const TransientState& s, const SteadyProfile& steady, const EigenPair& pair,
                     const ModelParams& p);

struct DecayReport {
    std::vector<double> times, M, mass, ub;
    double lambda_bar = 0.0;  ///< lambda / max a_i
    double fitted_rate = 0.0; ///< least-squares slope of log M over the fit window
    double floor = 0.0;       ///< truncation floor estimate: max(min M, final M)
    bool fit_valid = false;
    bool bound_satisfied = false; ///< M(t) <= 1.05 M(0) e^{-lambda_bar t} above the floor

    double M0() const { return M.empty() ? 0.0 : M.front(); }
    double M_final() const { return M.empty() ? 0.0 : M.back(); }
};

struct TransientResult {
    TransientState state;
    DecayReport report;
    std::vector<std::pair<double, TransientState>> snapshots; ///< requested-time captures
};

/// Advances `initial` to t_end, recording (t, M, mass, ub) at ~`cadence`
/// samples. t_end <= 0 selects the default 20 / lambda_bar. The steady
/// profile and eigen pair may be supplied to avoid recomputation. Snapshot
/// times capture the state at the first step reaching each requested time.
TransientResult solve_transient(TransientState initial, const ModelParams& p,
                                const BoundarySignal& ub, double t_end, int cadence = 200,
                                Scheme scheme = Scheme::ExplicitEuler,
                                const SteadyProfile* steady = nullptr,
                                const EigenPair* pair = nullptr,
                                const std::vector<double>* snapshot_times = nullptr);

/// Large-permeability limit system (lumen and epithelium fused):
///   (a1+a3) du1/dt + alpha dx u1 = K1 (u0 - u1)
///   (a2+a4) du2/dt - alpha dx u2 = -G(u2)
///    a0     du0/dt               = K1 (u1 - u0) + G(u2)
struct LimitState {
    double t = 0.0;
    Grid1D grid{};
    std::vector<double> u1, u2, u0;
};

LimitState solve_limit_system(const ModelParams& p, const Grid1D& grid, const BoundarySignal& ub,
                              double t_end);

struct EpsilonRow {
    double eps;                ///< 1 / k
    double k;                  ///< exchange coefficient of this run
    double P;                  ///< luminal permeability mapping to k
    double gap_u1_q1;          ///< sup |u1 - q1| at t_end
    double gap_u2_q2;          ///< sup |u2 - q2| at t_end
    double limit_distance_rel; ///< sup-norm distance to the limit system / its sup-norm
};

/// Runs the full system at k = 1/eps for each entry (flat initial data,
/// constant inflow) and compares against the limit system at t_end.
std::vector<EpsilonRow> epsilon_study(const ModelParams& base, const std::vector<double>& eps_list,
                                      const Grid1D& grid, double t_end,
                                      Scheme scheme = Scheme::ImplicitExchange);

} // namespace ccsim
