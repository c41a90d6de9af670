#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ccsim/grid.hpp"
#include "ccsim/params.hpp"
#include "ccsim/steady.hpp"

namespace ccsim {

enum class AxisSpacing { Log, Linear };

std::vector<double> spaced_values(double lo, double hi, int count, AxisSpacing spacing);

/// Sweep description: permeabilities [m/s] and pump scales (multiples of
/// 2 pi r2e, i.e. the Vm entering Vm2 = 2 pi r2e Vm).
struct SweepSpec {
    std::vector<double> P_values;
    std::vector<double> Vm_values;
    Grid1D grid{};

    static SweepSpec fic_curve_default(const Grid1D& grid);
    static SweepSpec fic_grid_default(const Grid1D& grid);
    void validate() const;
};

/// Rebuilds params with a different luminal permeability / pump scale,
/// keeping everything else.
ModelParams with_permeability(const ModelParams& base, double P);
ModelParams with_pump_scale(const ModelParams& base, double Vm_scale);

struct FicPoint {
    double P;
    double fic;
};

/// One steady solve per P at the base pump rate. A solver failure aborts
/// the sweep, naming the offending P.
std::vector<FicPoint> run_fic_curve(const SweepSpec& spec, const ModelParams& base);

struct FicGrid {
    std::vector<double> P_axis, Vm_axis;
    std::vector<double> fic; ///< row-major: fic[iVm * P_axis.size() + iP]
    bool monotone_P = false;
    bool monotone_Vm = false;
    int violations = 0;

    double at(std::size_t iVm, std::size_t iP) const { return fic[iVm * P_axis.size() + iP]; }
};

FicGrid run_fic_grid(const SweepSpec& spec, const ModelParams& base);

struct ProfileRequest {
    std::string tag;
    ModelParams params;
};

/// Solves and writes profile_<tag>.csv and profile_<tag>.svg per request;
/// returns the paths written. Empty input writes nothing.
std::vector<std::string> emit_profiles(const std::vector<ProfileRequest>& requests,
                                       const Grid1D& grid, const std::string& out_dir);

/// Deterministic parallel map: runs fn(i) for i in [0, count) on a small
/// pool (capped by the CCSIM_THREADS environment variable); results land in
/// index order regardless of scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

} // namespace ccsim
