#include "capssc/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace capssc {

const char* config_env_var = "CAPSSC_CONFIG";

void run_config::validate() const {
    if (!(epsilon > 0.0) || epsilon >= 1.0)
        throw std::invalid_argument("run.epsilon must lie in (0, 1)");
    if (!(eta > 0.0) || eta >= 1.0)
        throw std::invalid_argument("run.eta must lie in (0, 1)");
    if (a_exponent <= 1.0)
        throw std::invalid_argument("run.a must exceed 1");
    if (sigma != 1.0)
        throw std::invalid_argument(
            "run.sigma is fixed to 1 by the unit-scaling convention");
    if (t_horizon < 0.0)
        throw std::invalid_argument("run.t_horizon must be non-negative");
    if (!(cfl > 0.0) || cfl > 1.0)
        throw std::invalid_argument("run.cfl must lie in (0, 1]");
    if (fixed_dt < 0.0)
        throw std::invalid_argument("run.fixed_dt must be non-negative");
    if (checkpoint_interval < 0)
        throw std::invalid_argument("run.checkpoint_interval must be >= 0");
    if (n_side < 16)
        throw std::invalid_argument("grid.n_side must be at least 16");
    if (solver_radial < 8 || solver_angular < 16)
        throw std::invalid_argument("grid solver resolution too small");
    if (solver_angular % 2 != 0)
        throw std::invalid_argument("grid.solver_angular must be even");
    profile().validate();
    if (geometry_trials < 1 || symmetric_curves < 1 || bs_points < 1 ||
        harmonic_fields < 1)
        throw std::invalid_argument("suite sizes must be positive");
}

double run_config::horizon() const {
    if (t_horizon > 0.0) return t_horizon;
    const double h = grid_spacing();
    return std::log(1.0 / (8.0 * h)) / (a_exponent * epsilon);
}

profile_spec run_config::profile() const {
    profile_spec p;
    p.eta = eta;
    p.a_exponent = a_exponent;
    p.blend_width = blend_width;
    p.band_top_width = band_top_width;
    p.boundary_gap = boundary_gap;
    p.collar_width = collar_width;
    return p;
}

disk_spec run_config::solver() const {
    disk_spec d;
    d.radius = 2.0;
    d.n_radial = solver_radial;
    d.n_angular = solver_angular;
    return d;
}

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    size_t pos = 0;
    double x;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad numeric value for " + key + ": " + v);
    }
    if (pos != v.size())
        throw std::invalid_argument("bad numeric value for " + key + ": " + v);
    return x;
}

long parse_long(const std::string& key, const std::string& v) {
    size_t pos = 0;
    long x;
    try {
        x = std::stol(v, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad integer value for " + key + ": " + v);
    }
    if (pos != v.size())
        throw std::invalid_argument("bad integer value for " + key + ": " + v);
    return x;
}

// apply a key inside a known section; returns false if the key is unknown
bool apply_in_section(run_config& c, const std::string& section,
                      const std::string& key, const std::string& value) {
    const std::string q = section + "." + key;
    if (section == "run") {
        if (key == "epsilon") return c.epsilon = parse_double(q, value), true;
        if (key == "eta") return c.eta = parse_double(q, value), true;
        if (key == "a") return c.a_exponent = parse_double(q, value), true;
        if (key == "sigma") return c.sigma = parse_double(q, value), true;
        if (key == "t_horizon")
            return c.t_horizon = parse_double(q, value), true;
        if (key == "cfl") return c.cfl = parse_double(q, value), true;
        if (key == "fixed_dt") return c.fixed_dt = parse_double(q, value), true;
        if (key == "checkpoint_interval")
            return c.checkpoint_interval = parse_long(q, value), true;
        if (key == "seed")
            return c.seed = (unsigned long)parse_long(q, value), true;
        if (key == "output_dir") return c.output_dir = value, true;
        return false;
    }
    if (section == "grid") {
        if (key == "n_side") return c.n_side = (int)parse_long(q, value), true;
        if (key == "solver_radial")
            return c.solver_radial = (int)parse_long(q, value), true;
        if (key == "solver_angular")
            return c.solver_angular = (int)parse_long(q, value), true;
        return false;
    }
    if (section == "profile") {
        if (key == "blend_width")
            return c.blend_width = parse_double(q, value), true;
        if (key == "band_top_width")
            return c.band_top_width = parse_double(q, value), true;
        if (key == "boundary_gap")
            return c.boundary_gap = parse_double(q, value), true;
        if (key == "collar_width")
            return c.collar_width = parse_double(q, value), true;
        return false;
    }
    if (section == "suites") {
        if (key == "geometry_trials")
            return c.geometry_trials = (int)parse_long(q, value), true;
        if (key == "symmetric_curves")
            return c.symmetric_curves = (int)parse_long(q, value), true;
        if (key == "bs_points")
            return c.bs_points = (int)parse_long(q, value), true;
        if (key == "harmonic_fields")
            return c.harmonic_fields = (int)parse_long(q, value), true;
        return false;
    }
    return false;
}

}  // namespace

run_config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    run_config cfg;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t cut = line.find_first_of("#;");
        if (cut != std::string::npos) line.erase(cut);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": key outside any [section]");
        if (!apply_in_section(cfg, section, key, value))
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": unknown key " + section + "." + key);
    }
    return cfg;
}

void apply_override(run_config& cfg, const std::string& assignment) {
    size_t eq = assignment.find('=');
    if (eq == std::string::npos)
        throw std::invalid_argument("override must look like section.key=value: " +
                                    assignment);
    std::string key = trim(assignment.substr(0, eq));
    std::string value = trim(assignment.substr(eq + 1));
    size_t dot = key.find('.');
    if (dot != std::string::npos) {
        std::string section = key.substr(0, dot);
        std::string name = key.substr(dot + 1);
        if (!apply_in_section(cfg, section, name, value))
            throw std::invalid_argument("unknown config key: " + key);
        return;
    }
    // bare key: try every section, require a unique match
    int hits = 0;
    run_config probe = cfg;
    for (const char* section : {"run", "grid", "profile", "suites"}) {
        run_config trial = cfg;
        if (apply_in_section(trial, section, key, value)) {
            ++hits;
            probe = trial;
        }
    }
    if (hits == 0) throw std::invalid_argument("unknown config key: " + key);
    if (hits > 1)
        throw std::invalid_argument("ambiguous config key (qualify with section.): " +
                                    key);
    cfg = probe;
}

}  // namespace capssc
