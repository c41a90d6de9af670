#include "ccsim/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "ccsim/errors.hpp"
#include "ccsim/io.hpp"

namespace ccsim {

namespace {

std::string trim(std::string_view sv) {
    size_t b = 0, e = sv.size();
    while (b < e && std::isspace(static_cast<unsigned char>(sv[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(sv[e - 1]))) --e;
    return std::string(sv.substr(b, e - b));
}

double parse_double(const std::string& s, int line) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0' || !std::isfinite(v))
        throw ConfigError("line " + std::to_string(line) + ": not a number: '" + s + "'");
    return v;
}

int parse_int(const std::string& s, int line) {
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0')
        throw ConfigError("line " + std::to_string(line) + ": not an integer: '" + s + "'");
    return static_cast<int>(v);
}

std::vector<double> parse_list(const std::string& s, int line) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(item, line));
    }
    return out;
}

std::string list_to_string(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += fmt17(v[i]);
    }
    return s;
}

} // namespace

ModelParams RunConfig::to_params() const {
    try {
        return ModelParams::make(Geometry{L, r1, r2, r1e, r2e, alpha}, P, P1e, Vm_scale, KM2,
                                 ub_bar);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid model parameters: ") + e.what());
    }
}

Grid1D RunConfig::to_grid() const {
    if (grid_n < 2) throw ConfigError("grid.n must be >= 2");
    return Grid1D::uniform(grid_n, L);
}

Scheme RunConfig::to_scheme() const {
    if (scheme == "explicit") return Scheme::ExplicitEuler;
    if (scheme == "implicit-exchange") return Scheme::ImplicitExchange;
    throw ConfigError("solver.scheme must be 'explicit' or 'implicit-exchange', got '" + scheme +
                      "'");
}

std::vector<double> RunConfig::resolved_eps_list() const {
    if (!eps_list.empty()) return eps_list;
    std::vector<double> out;
    for (double Pv : {1e-5, 1e-4, 1e-3, 1e-2})
        out.push_back(1.0 / (2.0 * std::numbers::pi * r1 * Pv));
    return out;
}

RunConfig parse_config(std::string_view text) {
    RunConfig cfg;

    using Setter = std::function<void(RunConfig&, const std::string&, int)>;
    auto dbl = [](double RunConfig::* f) {
        return Setter([f](RunConfig& c, const std::string& v, int line) { c.*f = parse_double(v, line); });
    };
    auto integer = [](int RunConfig::* f) {
        return Setter([f](RunConfig& c, const std::string& v, int line) { c.*f = parse_int(v, line); });
    };
    auto str = [](std::string RunConfig::* f) {
        return Setter([f](RunConfig& c, const std::string& v, int) { c.*f = v; });
    };
    auto dlist = [](std::vector<double> RunConfig::* f) {
        return Setter([f](RunConfig& c, const std::string& v, int line) { c.*f = parse_list(v, line); });
    };

    const std::map<std::string, Setter> keys = {
        {"model.L", dbl(&RunConfig::L)},
        {"model.alpha", dbl(&RunConfig::alpha)},
        {"model.r1", dbl(&RunConfig::r1)},
        {"model.r2", dbl(&RunConfig::r2)},
        {"model.r1e", dbl(&RunConfig::r1e)},
        {"model.r2e", dbl(&RunConfig::r2e)},
        {"model.P", dbl(&RunConfig::P)},
        {"model.P1e", dbl(&RunConfig::P1e)},
        {"model.Vm_scale", dbl(&RunConfig::Vm_scale)},
        {"model.KM2", dbl(&RunConfig::KM2)},
        {"model.ub_bar", dbl(&RunConfig::ub_bar)},
        {"grid.n", integer(&RunConfig::grid_n)},
        {"solver.newton_tol", dbl(&RunConfig::newton_tol)},
        {"solver.newton_max_iter", integer(&RunConfig::newton_max_iter)},
        {"solver.scheme", str(&RunConfig::scheme)},
        {"output.dir", str(&RunConfig::out_dir)},
        {"transient.t_end", dbl(&RunConfig::t_end)},
        {"transient.cadence", integer(&RunConfig::cadence)},
        {"transient.preset", str(&RunConfig::preset)},
        {"transient.flat_value",
         Setter([](RunConfig& c, const std::string& v, int line) {
             c.flat_value = parse_double(v, line);
         })},
        {"transient.perturb_eps", dbl(&RunConfig::perturb_eps)},
        {"transient.snapshot_times", dlist(&RunConfig::snapshot_times)},
        {"boundary.mode", str(&RunConfig::boundary_mode)},
        {"boundary.C0", dbl(&RunConfig::C0)},
        {"boundary.mu0", dbl(&RunConfig::mu0)},
        {"boundary.table", str(&RunConfig::boundary_table)},
        {"sweep.P_min", dbl(&RunConfig::P_min)},
        {"sweep.P_max", dbl(&RunConfig::P_max)},
        {"sweep.P_count", integer(&RunConfig::P_count)},
        {"sweep.P_spacing", str(&RunConfig::P_spacing)},
        {"sweep.Vm_min", dbl(&RunConfig::Vm_min)},
        {"sweep.Vm_max", dbl(&RunConfig::Vm_max)},
        {"sweep.Vm_count", integer(&RunConfig::Vm_count)},
        {"sweep.outputs", str(&RunConfig::sweep_outputs)},
        {"limit.eps_list", dlist(&RunConfig::eps_list)},
        {"limit.t_end", dbl(&RunConfig::limit_t_end)},
    };

    std::string section;
    int line_no = 0;
    std::string line;
    std::istringstream is{std::string(text)};
    while (std::getline(is, line)) {
        ++line_no;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line.erase(comment);
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
            section = trim(std::string_view(t).substr(1, t.size() - 2));
            if (section.empty())
                throw ConfigError("line " + std::to_string(line_no) + ": empty section name");
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = trim(std::string_view(t).substr(0, eq));
        const std::string value = trim(std::string_view(t).substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        const std::string full = section.empty() ? key : section + "." + key;
        const auto it = keys.find(full);
        if (it == keys.end())
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + full + "'");
        it->second(cfg, value, line_no);
    }

    // Validate everything up front, before any solver touches the config.
    cfg.to_params();
    cfg.to_grid();
    cfg.to_scheme();
    if (cfg.boundary_mode != "constant" && cfg.boundary_mode != "exponential" &&
        cfg.boundary_mode != "table")
        throw ConfigError("boundary.mode must be constant|exponential|table");
    if (cfg.preset != "flat" && cfg.preset != "steady" && cfg.preset != "perturbed-steady")
        throw ConfigError("transient.preset must be flat|steady|perturbed-steady");
    if (cfg.P_spacing != "log" && cfg.P_spacing != "linear")
        throw ConfigError("sweep.P_spacing must be log|linear");
    if (cfg.newton_tol <= 0) throw ConfigError("solver.newton_tol must be positive");
    if (cfg.newton_max_iter < 1) throw ConfigError("solver.newton_max_iter must be >= 1");
    if (cfg.cadence < 1) throw ConfigError("transient.cadence must be >= 1");
    if (cfg.P_count < 1 || cfg.Vm_count < 1) throw ConfigError("sweep counts must be >= 1");
    if (!(cfg.P_min > 0) || !(cfg.P_max >= cfg.P_min))
        throw ConfigError("sweep requires 0 < P_min <= P_max");
    if (!(cfg.Vm_min > 0) || !(cfg.Vm_max >= cfg.Vm_min))
        throw ConfigError("sweep requires 0 < Vm_min <= Vm_max");
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream os;
    os << "[model]\n";
    os << "L = " << fmt17(c.L) << "\n";
    os << "alpha = " << fmt17(c.alpha) << "\n";
    os << "r1 = " << fmt17(c.r1) << "\n";
    os << "r2 = " << fmt17(c.r2) << "\n";
    os << "r1e = " << fmt17(c.r1e) << "\n";
    os << "r2e = " << fmt17(c.r2e) << "\n";
    os << "P = " << fmt17(c.P) << "\n";
    os << "P1e = " << fmt17(c.P1e) << "\n";
    os << "Vm_scale = " << fmt17(c.Vm_scale) << "\n";
    os << "KM2 = " << fmt17(c.KM2) << "\n";
    os << "ub_bar = " << fmt17(c.ub_bar) << "\n";
    os << "\n[grid]\n";
    os << "n = " << c.grid_n << "\n";
    os << "\n[solver]\n";
    os << "newton_tol = " << fmt17(c.newton_tol) << "\n";
    os << "newton_max_iter = " << c.newton_max_iter << "\n";
    os << "scheme = " << c.scheme << "\n";
    os << "\n[output]\n";
    os << "dir = " << c.out_dir << "\n";
    os << "\n[transient]\n";
    os << "t_end = " << fmt17(c.t_end) << "\n";
    os << "cadence = " << c.cadence << "\n";
    os << "preset = " << c.preset << "\n";
    if (c.flat_value) os << "flat_value = " << fmt17(*c.flat_value) << "\n";
    os << "perturb_eps = " << fmt17(c.perturb_eps) << "\n";
    if (!c.snapshot_times.empty())
        os << "snapshot_times = " << list_to_string(c.snapshot_times) << "\n";
    os << "\n[boundary]\n";
    os << "mode = " << c.boundary_mode << "\n";
    os << "C0 = " << fmt17(c.C0) << "\n";
    os << "mu0 = " << fmt17(c.mu0) << "\n";
    if (!c.boundary_table.empty()) os << "table = " << c.boundary_table << "\n";
    os << "\n[sweep]\n";
    os << "P_min = " << fmt17(c.P_min) << "\n";
    os << "P_max = " << fmt17(c.P_max) << "\n";
    os << "P_count = " << c.P_count << "\n";
    os << "P_spacing = " << c.P_spacing << "\n";
    os << "Vm_min = " << fmt17(c.Vm_min) << "\n";
    os << "Vm_max = " << fmt17(c.Vm_max) << "\n";
    os << "Vm_count = " << c.Vm_count << "\n";
    os << "outputs = " << c.sweep_outputs << "\n";
    os << "\n[limit]\n";
    if (!c.eps_list.empty()) os << "eps_list = " << list_to_string(c.eps_list) << "\n";
    os << "t_end = " << fmt17(c.limit_t_end) << "\n";
    return os.str();
}

} // namespace ccsim
