#include "ccsim/params.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

namespace ccsim {

namespace {

constexpr double kNegTol = 1e-14;

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}

std::string num(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

} // namespace

ModelParams ModelParams::make(const Geometry& geom, double P, double P1e,
                              double Vm_scale, double KM2, double ub_bar) {
    using std::numbers::pi;
    require(geom.L > 0, "L must be positive");
    require(geom.r1 > 0 && geom.r2 > 0, "tubule radii must be positive");
    require(geom.alpha > 0, "alpha must be positive");
    require(geom.r1e > geom.r1,
            "r1e (= " + num(geom.r1e) + ") must exceed r1 (= " + num(geom.r1) +
                "): epithelium cross section a3 <= 0");
    require(geom.r2e > geom.r2,
            "r2e (= " + num(geom.r2e) + ") must exceed r2 (= " + num(geom.r2) +
                "): epithelium cross section a4 <= 0");
    require(P >= 0, "P must be nonnegative");
    require(P1e > 0, "P1e must be positive");
    require(Vm_scale >= 0, "Vm_scale must be nonnegative");
    require(KM2 > 0, "KM2 must be positive");
    require(ub_bar > 0, "ub_bar must be positive");

    ModelParams p;
    p.geom = geom;
    p.perms = Permeabilities{P, P * geom.r1 / geom.r2, P1e};
    p.pump = PumpParams{2.0 * pi * geom.r2e * Vm_scale, KM2};
    p.ub_bar = ub_bar;
    p.a1 = pi * geom.r1 * geom.r1;
    p.a2 = pi * geom.r2 * geom.r2;
    p.a3 = pi * (geom.r1e * geom.r1e - geom.r1 * geom.r1);
    p.a4 = pi * (geom.r2e * geom.r2e - geom.r2 * geom.r2);
    p.a0 = pi * (geom.r1e * geom.r1e + geom.r2e * geom.r2e) / 2.0;
    p.k = 2.0 * pi * geom.r1 * p.perms.P1;
    p.K1 = 2.0 * pi * geom.r1e * P1e;
    return p;
}

ModelParams ModelParams::table1(double P, double Vm_scale) {
    const Geometry geom{2e-3, 1e-5, 1e-5, 1.5e-5, 1.5e-5, 1e-13};
    return make(geom, P, 1e-11 / 1.5e-5, Vm_scale, 3.5, 140.0);
}

double ModelParams::max_a() const {
    return std::max({a0, a1, a2, a3, a4});
}

double ModelParams::min_a() const {
    return std::min({a0, a1, a2, a3, a4});
}

double pump_rate(double q2, const PumpParams& pump) {
    if (q2 < -kNegTol)
        throw std::domain_error("pump_rate: negative concentration q2 = " + std::to_string(q2));
    const double q = std::max(q2, 0.0);
    const double r = q / (pump.KM2 + q);
    return pump.Vm2 * r * r * r;
}

double pump_derivative(double q2, const PumpParams& pump) {
    if (q2 < -kNegTol)
        throw std::domain_error("pump_derivative: negative concentration q2 = " +
                                std::to_string(q2));
    const double q = std::max(q2, 0.0);
    const double d = pump.KM2 + q;
    return 3.0 * pump.Vm2 * pump.KM2 * q * q / (d * d * d * d);
}

double lipschitz_bound_g(const PumpParams& pump) {
    return 3.0 * pump.Vm2 / (16.0 * pump.KM2);
}

FluxSet fluxes(const ConcState& s, const ModelParams& p) {
    const double G = pump_rate(s.q2, p.pump);
    FluxSet f;
    f.J1 = p.k * (s.q1 - s.u1);
    f.J2 = p.k * (s.q2 - s.u2);
    f.J3 = p.k * (s.u1 - s.q1) + p.K1 * (s.u0 - s.q1);
    f.J4 = p.k * (s.u2 - s.q2) - G;
    f.J0 = p.K1 * (s.q1 - s.u0) + G;
    return f;
}

} // namespace ccsim
