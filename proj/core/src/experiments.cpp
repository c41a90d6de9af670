#include "ccsim/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

#include "ccsim/errors.hpp"
#include "ccsim/io.hpp"

namespace ccsim {

std::vector<double> spaced_values(double lo, double hi, int count, AxisSpacing spacing) {
    if (count < 1) throw std::invalid_argument("spaced_values: count must be >= 1");
    if (!(lo > 0) || !(hi >= lo)) throw std::invalid_argument("spaced_values: need 0 < lo <= hi");
    std::vector<double> v(count);
    if (count == 1) {
        v[0] = lo;
        return v;
    }
    for (int i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / (count - 1);
        v[i] = spacing == AxisSpacing::Log ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t;
    }
    v.back() = hi;
    return v;
}

SweepSpec SweepSpec::fic_curve_default(const Grid1D& grid) {
    SweepSpec s;
    s.P_values = spaced_values(1e-8, 1e-5, 50, AxisSpacing::Log);
    s.grid = grid;
    return s;
}

SweepSpec SweepSpec::fic_grid_default(const Grid1D& grid) {
    SweepSpec s;
    s.P_values = spaced_values(1e-8, 1e-5, 20, AxisSpacing::Log);
    s.Vm_values = spaced_values(1e-5, 1e-4, 20, AxisSpacing::Log);
    s.grid = grid;
    return s;
}

void SweepSpec::validate() const {
    auto check_axis = [](const std::vector<double>& v, const char* name) {
        if (v.empty()) throw std::invalid_argument(std::string("sweep axis ") + name + " is empty");
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!(v[i] > 0))
                throw std::invalid_argument(std::string("sweep axis ") + name + " must be positive");
            if (i > 0 && v[i] <= v[i - 1])
                throw std::invalid_argument(std::string("sweep axis ") + name +
                                            " must be strictly ascending");
        }
    };
    check_axis(P_values, "P");
    if (!Vm_values.empty()) check_axis(Vm_values, "Vm");
}

ModelParams with_permeability(const ModelParams& base, double P) {
    const double Vm_scale = base.pump.Vm2 / (2.0 * std::numbers::pi * base.geom.r2e);
    return ModelParams::make(base.geom, P, base.perms.P1e, Vm_scale, base.pump.KM2, base.ub_bar);
}

ModelParams with_pump_scale(const ModelParams& base, double Vm_scale) {
    return ModelParams::make(base.geom, base.perms.P1, base.perms.P1e, Vm_scale, base.pump.KM2,
                             base.ub_bar);
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    if (count == 0) return;
    std::size_t nthreads = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("CCSIM_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) nthreads = static_cast<std::size_t>(cap);
    }
    nthreads = std::min(nthreads, count);
    if (nthreads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

std::vector<FicPoint> run_fic_curve(const SweepSpec& spec, const ModelParams& base) {
    spec.validate();
    std::vector<FicPoint> out(spec.P_values.size());
    parallel_for(out.size(), [&](std::size_t i) {
        const double P = spec.P_values[i];
        try {
            const SteadyProfile s = solve_steady(with_permeability(base, P), spec.grid);
            out[i] = FicPoint{P, s.fic};
        } catch (const std::exception& e) {
            throw SolverError("fic curve aborted at P = " + std::to_string(P) + ": " + e.what());
        }
    });
    return out;
}

FicGrid run_fic_grid(const SweepSpec& spec, const ModelParams& base) {
    spec.validate();
    if (spec.Vm_values.empty()) throw std::invalid_argument("run_fic_grid: Vm axis is empty");
    FicGrid g;
    g.P_axis = spec.P_values;
    g.Vm_axis = spec.Vm_values;
    const std::size_t nP = g.P_axis.size(), nV = g.Vm_axis.size();
    g.fic.resize(nP * nV);
    parallel_for(nP * nV, [&](std::size_t idx) {
        const std::size_t iV = idx / nP, iP = idx % nP;
        try {
            ModelParams p = with_pump_scale(with_permeability(base, g.P_axis[iP]), g.Vm_axis[iV]);
            g.fic[idx] = solve_steady(p, spec.grid).fic;
        } catch (const std::exception& e) {
            throw SolverError("fic grid aborted at P = " + std::to_string(g.P_axis[iP]) +
                              ", Vm = " + std::to_string(g.Vm_axis[iV]) + ": " + e.what());
        }
    });
    g.monotone_P = true;
    g.monotone_Vm = true;
    g.violations = 0;
    for (std::size_t iV = 0; iV < nV; ++iV)
        for (std::size_t iP = 1; iP < nP; ++iP)
            if (g.at(iV, iP) < g.at(iV, iP - 1)) {
                g.monotone_P = false;
                ++g.violations;
            }
    for (std::size_t iP = 0; iP < nP; ++iP)
        for (std::size_t iV = 1; iV < nV; ++iV)
            if (g.at(iV, iP) < g.at(iV - 1, iP)) {
                g.monotone_Vm = false;
                ++g.violations;
            }
    return g;
}

std::vector<std::string> emit_profiles(const std::vector<ProfileRequest>& requests,
                                       const Grid1D& grid, const std::string& out_dir) {
    std::vector<std::string> written;
    for (const auto& req : requests) {
        const SteadyProfile s = solve_steady(req.params, grid);
        const std::string csv = out_dir + "/profile_" + req.tag + ".csv";
        const std::string svg = out_dir + "/profile_" + req.tag + ".svg";
        write_steady_csv(s, csv);
        write_profile_svg(s, svg, req.tag);
        written.push_back(csv);
        written.push_back(svg);
    }
    return written;
}

} // namespace ccsim
