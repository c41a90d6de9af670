// ccsim: counter-current sodium transport solver.
//
// Subcommands: steady | eigen | transient | limit | sweep | verify.
// Configuration comes from a key = value file (--config) with command-line
// overrides; every run writes a `manifest` echoing the resolved settings.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "ccsim/cli.hpp"
#include "ccsim/config.hpp"
#include "ccsim/errors.hpp"

namespace {

struct Overrides {
    std::optional<std::string> config_path;
    std::optional<std::string> out_dir;
    std::optional<int> grid_n;
    std::optional<double> P;
    std::optional<double> Vm_scale;
    std::optional<double> t_end;
    std::optional<std::string> eps_list;
    std::optional<std::string> preset;
    std::optional<std::string> scheme;
    std::optional<double> mu0;
    std::optional<double> C0;
    std::optional<std::string> boundary_mode;
    std::optional<int> cadence;
    std::optional<double> P_min, P_max;
    std::optional<int> P_count;
    std::optional<std::string> spacing;
    std::optional<std::string> outputs;
};

ccsim::RunConfig resolve(const Overrides& o, const std::string& subcommand) {
    ccsim::RunConfig cfg =
        o.config_path ? ccsim::load_config_file(*o.config_path) : ccsim::RunConfig{};
    if (o.out_dir) cfg.out_dir = *o.out_dir;
    if (o.grid_n) cfg.grid_n = *o.grid_n;
    if (o.P) cfg.P = *o.P;
    if (o.Vm_scale) cfg.Vm_scale = *o.Vm_scale;
    if (o.t_end) (subcommand == "limit" ? cfg.limit_t_end : cfg.t_end) = *o.t_end;
    if (o.eps_list) {
        cfg.eps_list.clear();
        std::string item;
        std::stringstream ss(*o.eps_list);
        while (std::getline(ss, item, ',')) {
            if (!item.empty()) cfg.eps_list.push_back(std::stod(item));
        }
    }
    if (o.preset) cfg.preset = *o.preset;
    if (o.scheme) cfg.scheme = *o.scheme;
    if (o.mu0) cfg.mu0 = *o.mu0;
    if (o.C0) cfg.C0 = *o.C0;
    if (o.boundary_mode) cfg.boundary_mode = *o.boundary_mode;
    if (o.cadence) cfg.cadence = *o.cadence;
    if (o.P_min) cfg.P_min = *o.P_min;
    if (o.P_max) cfg.P_max = *o.P_max;
    if (o.P_count) cfg.P_count = *o.P_count;
    if (o.spacing) cfg.P_spacing = *o.spacing;
    if (o.outputs) cfg.sweep_outputs = *o.outputs;
    // re-validate after overrides
    return ccsim::parse_config(ccsim::serialize_config(cfg));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"counter-current sodium transport solver"};
    app.require_subcommand(1);

    Overrides o;
    std::string chosen;
    for (const char* name : {"steady", "eigen", "transient", "limit", "sweep", "verify"}) {
        auto* sub = app.add_subcommand(name);
        sub->callback([&chosen, name] { chosen = name; });
        sub->add_option("--config", o.config_path, "configuration file");
        sub->add_option("--out", o.out_dir, "output directory");
        sub->add_option("--grid-n", o.grid_n, "grid node count");
        sub->add_option("--P", o.P, "luminal permeability [m/s]");
        sub->add_option("--Vm-scale", o.Vm_scale, "pump scale (Vm2 = 2 pi r2e Vm)");
        sub->add_option("--t-end", o.t_end, "end time [s] (0 = auto)");
        if (std::string(name) == "limit")
            sub->add_option("--eps-list", o.eps_list, "comma-separated eps values (eps = 1/k)");
        if (std::string(name) == "transient") {
            sub->add_option("--preset", o.preset, "initial state: flat|steady|perturbed-steady");
            sub->add_option("--scheme", o.scheme, "explicit|implicit-exchange");
            sub->add_option("--boundary", o.boundary_mode, "constant|exponential|table");
            sub->add_option("--mu0", o.mu0, "boundary decay rate (0 = auto lambda_bar/3)");
            sub->add_option("--C0", o.C0, "boundary perturbation amplitude");
            sub->add_option("--cadence", o.cadence, "observer samples");
        }
        if (std::string(name) == "sweep") {
            sub->add_option("--P-min", o.P_min, "sweep lower permeability");
            sub->add_option("--P-max", o.P_max, "sweep upper permeability");
            sub->add_option("--P-count", o.P_count, "sweep point count");
            sub->add_option("--spacing", o.spacing, "log|linear");
            sub->add_option("--outputs", o.outputs, "subset of fic_curve,fic_grid,profiles");
        }
    }

    CLI11_PARSE(app, argc, argv);

    try {
        return ccsim::dispatch(chosen, resolve(o, chosen));
    } catch (const ccsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
