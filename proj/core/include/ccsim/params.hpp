#pragma once

#include "ccsim/errors.hpp"

namespace ccsim {

/// Tubule geometry and axial volumetric flow.
struct Geometry {
    double L;     ///< tubule length [m]
    double r1;    ///< inner radius, descending limb [m]
    double r2;    ///< inner radius, ascending limb [m]
    double r1e;   ///< outer radius incl. epithelium, descending [m]
    double r2e;   ///< outer radius incl. epithelium, ascending [m]
    double alpha; ///< axial volumetric flow [m^3/s]
};

/// Membrane permeabilities [m/s].
struct Permeabilities {
    double P1;  ///< lumen <-> epithelium, descending limb
    double P2;  ///< lumen <-> epithelium, ascending limb
    double P1e; ///< epithelium <-> interstitium, descending limb
};

/// Michaelis-Menten pump after perimeter folding:
/// G(q) = Vm2 * (q / (KM2 + q))^3.
struct PumpParams {
    double Vm2; ///< maximal pump flux, 2*pi*r2e*Vm [mol m^-1 s^-1]
    double KM2; ///< affinity [mol/m^3]
};

/// Full model parameter set with derived coefficients.
///
/// make() enforces the k1 = k2 assumption by construction: a single
/// luminal permeability P gives P1 = P and P2 = P*r1/r2, so
/// 2*pi*r1*P1 == 2*pi*r2*P2 exactly.
struct ModelParams {
    Geometry geom{};
    Permeabilities perms{};
    PumpParams pump{};
    double ub_bar = 0.0; ///< inflow concentration [mol/m^3]

    // Derived: cross sections [m^2] and exchange coefficients [m^2/s].
    double a0 = 0, a1 = 0, a2 = 0, a3 = 0, a4 = 0;
    double k = 0;  ///< 2*pi*r1*P1, lumen <-> epithelium
    double K1 = 0; ///< 2*pi*r1e*P1e, epithelium <-> interstitium

    static ModelParams make(const Geometry& geom, double P, double P1e,
                            double Vm_scale, double KM2, double ub_bar);

    /// Baseline parameter set (length 2 mm, radii 10/15 um, alpha 1e-13,
    /// KM2 = 3.5, ub = 140, K1 = 2*pi*1e-11).
    static ModelParams table1(double P = 2e-7, double Vm_scale = 1e-5);

    double max_a() const;
    double min_a() const;
};

/// Pump rate G(q2) [mol m^-1 s^-1]; value in [0, Vm2).
/// q2 below -1e-14 is a domain error; roundoff negatives clamp to 0.
double pump_rate(double q2, const PumpParams& pump);

/// Analytic derivative G'(q2) = 3*Vm2*KM2*q2^2 / (KM2+q2)^4 >= 0.
double pump_derivative(double q2, const PumpParams& pump);

/// sup G' over q2 >= 0, attained at q2 = KM2: 3*Vm2 / (16*KM2).
double lipschitz_bound_g(const PumpParams& pump);

/// Concentrations of the five compartments at one axial position.
struct ConcState {
    double u1, u2, q1, q2, u0;
};

struct FluxSet {
    double J1, J2, J3, J4, J0;
};

/// Ionic exchange fluxes; J1+J2+J3+J4+J0 = 0 in exact arithmetic.
FluxSet fluxes(const ConcState& s, const ModelParams& p);

} // namespace ccsim
