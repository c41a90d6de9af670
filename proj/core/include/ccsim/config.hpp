#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ccsim/grid.hpp"
#include "ccsim/params.hpp"
#include "ccsim/transient.hpp"

namespace ccsim {

/// Fully resolved run configuration. Defaults reproduce the baseline
/// parameter table (P = 2e-7). parse_config rejects unknown keys with the
/// offending line number and validates all physical invariants before any
/// solver runs.
struct RunConfig {
    // [model]
    double L = 2e-3;
    double alpha = 1e-13;
    double r1 = 1e-5;
    double r2 = 1e-5;
    double r1e = 1.5e-5;
    double r2e = 1.5e-5;
    double P = 2e-7;
    double P1e = 1e-11 / 1.5e-5;
    double Vm_scale = 1e-5;
    double KM2 = 3.5;
    double ub_bar = 140.0;

    // [grid]
    int grid_n = 2001;

    // [solver]
    double newton_tol = 1e-12;
    int newton_max_iter = 50;
    std::string scheme = "explicit"; ///< "explicit" | "implicit-exchange"

    // [output]
    std::string out_dir = "out";

    // [transient]
    double t_end = 0.0; ///< <= 0: auto 20 / lambda_bar
    int cadence = 200;
    std::string preset = "flat"; ///< "flat" | "steady" | "perturbed-steady"
    std::optional<double> flat_value; ///< default: ub_bar
    double perturb_eps = 1.0;
    std::vector<double> snapshot_times;

    // [boundary]
    std::string boundary_mode = "constant"; ///< "constant" | "exponential" | "table"
    double C0 = 10.0;
    double mu0 = 0.0; ///< <= 0: auto lambda_bar / 3
    std::string boundary_table; ///< "t:v,t:v,..."

    // [sweep]
    double P_min = 1e-8;
    double P_max = 1e-5;
    int P_count = 50;
    std::string P_spacing = "log"; ///< "log" | "linear"
    double Vm_min = 1e-5;
    double Vm_max = 1e-4;
    int Vm_count = 20;
    std::string sweep_outputs = "fic_curve,fic_grid,profiles";

    // [limit]
    std::vector<double> eps_list; ///< empty: derived from P in {1e-5..1e-2}
    double limit_t_end = 150.0;

    ModelParams to_params() const;
    Grid1D to_grid() const;
    Scheme to_scheme() const;
    std::vector<double> resolved_eps_list() const;
};

/// Parses line-oriented `key = value` text with `[section]` headers.
/// Unknown keys/sections and malformed lines raise ConfigError with the
/// line number; physical invariants are checked before returning.
RunConfig parse_config(std::string_view text);

RunConfig load_config_file(const std::string& path);

/// Round-trippable manifest text: parse_config(serialize_config(c))
/// reproduces c bit-for-bit (floats at 17 significant digits).
std::string serialize_config(const RunConfig& c);

} // namespace ccsim
