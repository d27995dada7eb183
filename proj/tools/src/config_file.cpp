#include "config_file.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace dwal::tools {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& where, const std::string& key,
                    const std::string& value) {
    try {
        size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(where + ": key '" + key + "': expected a number, got '"
                          + value + "'");
    }
}

int parse_int(const std::string& where, const std::string& key,
              const std::string& value) {
    const double v = parse_double(where, key, value);
    if (v != std::floor(v) || std::abs(v) > 1e9)
        throw ConfigError(where + ": key '" + key + "': expected an integer, got '"
                          + value + "'");
    return (int)v;
}

bool parse_bool(const std::string& where, const std::string& key,
                const std::string& value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    throw ConfigError(where + ": key '" + key + "': expected a boolean, got '"
                      + value + "'");
}

} // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin,
                            RunConfig base) {
    std::istringstream in(text);
    std::string line;
    std::set<std::string> seen;
    int lineno = 0;

    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        const std::string where = origin + ":" + std::to_string(lineno);
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(where + ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError(where + ": empty key or value");
        if (!seen.insert(key).second)
            throw ConfigError(where + ": key '" + key + "' given twice");

        auto& p = base.physical;
        auto& e = base.evolution;
        if (key == "mass_kg") p.mass_kg = parse_double(where, key, value);
        else if (key == "scattering_length_m") p.scattering_length_m = parse_double(where, key, value);
        else if (key == "omega_z_per_sec") p.omega_z = parse_double(where, key, value);
        else if (key == "lambda") p.lambda = parse_double(where, key, value);
        else if (key == "Lambda_per_sec2") p.Lambda = parse_double(where, key, value);
        else if (key == "eta") p.eta = parse_double(where, key, value);
        else if (key == "n_total") p.n_total = parse_double(where, key, value);
        else if (key == "alpha_frac") p.alpha_frac = parse_double(where, key, value);
        else if (key == "beta_frac") p.beta_frac = parse_double(where, key, value);
        else if (key == "phi0_rad") p.phi0 = parse_double(where, key, value);
        else if (key == "kappa_on") p.kappa_on = parse_bool(where, key, value);
        else if (key == "m_modes") base.m_modes = parse_int(where, key, value);
        else if (key == "omega_up_per_sec") base.omega_up = parse_double(where, key, value);
        else if (key == "t_end_sec") e.t_end = parse_double(where, key, value);
        else if (key == "dt_sec") e.dt = parse_double(where, key, value);
        else if (key == "tau_sec") e.tau = parse_double(where, key, value);
        else if (key == "sample_every_sec") e.sample_every = parse_double(where, key, value);
        else if (key == "rel_tol") e.tolerance = parse_double(where, key, value);
        else if (key == "integrator") {
            if (value == "rk4") e.integrator = IntegratorKind::FixedRk4;
            else if (value == "rk45") e.integrator = IntegratorKind::AdaptiveRk45;
            else throw ConfigError(where + ": key 'integrator': expected rk4 or rk45, got '" + value + "'");
        } else if (key == "frame") {
            if (value == "interaction") e.frame = Frame::Interaction;
            else if (value == "direct") e.frame = Frame::Direct;
            else throw ConfigError(where + ": key 'frame': expected interaction or direct, got '" + value + "'");
        } else if (key == "name") {
            base.name = value;
        } else {
            throw ConfigError(where + ": unknown key '" + key + "'");
        }
    }
    return base;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str(), path, std::move(base));
}

std::string canonical_config_text(const RunConfig& rc) {
    std::ostringstream os;
    os.precision(17);
    const auto& p = rc.physical;
    const auto& e = rc.evolution;
    os << "name = " << rc.name << "\n"
       << "mass_kg = " << p.mass_kg << "\n"
       << "scattering_length_m = " << p.scattering_length_m << "\n"
       << "omega_z_per_sec = " << p.omega_z << "\n"
       << "lambda = " << p.lambda << "\n"
       << "Lambda_per_sec2 = " << p.Lambda << "\n"
       << "eta = " << p.eta << "\n"
       << "n_total = " << p.n_total << "\n"
       << "alpha_frac = " << p.alpha_frac << "\n"
       << "beta_frac = " << p.beta_frac << "\n"
       << "phi0_rad = " << p.phi0 << "\n"
       << "kappa_on = " << (p.kappa_on ? "true" : "false") << "\n"
       << "m_modes = " << rc.m_modes << "\n"
       << "omega_up_per_sec = " << rc.omega_up << "\n"
       << "t_end_sec = " << e.t_end << "\n"
       << "dt_sec = " << e.dt << "\n"
       << "tau_sec = " << e.tau << "\n"
       << "sample_every_sec = " << e.sample_every << "\n"
       << "rel_tol = " << e.tolerance << "\n"
       << "integrator = " << (e.integrator == IntegratorKind::FixedRk4 ? "rk4" : "rk45") << "\n"
       << "frame = " << (e.frame == Frame::Interaction ? "interaction" : "direct") << "\n";
    return os.str();
}

} // namespace dwal::tools
