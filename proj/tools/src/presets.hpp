#ifndef DWAL_TOOLS_PRESETS_HPP
#define DWAL_TOOLS_PRESETS_HPP

#include <optional>
#include <string>
#include <vector>

#include "dwal/dynamics.hpp"
#include "dwal/model.hpp"

namespace dwal::tools {

// Everything one simulation needs: physics, bath discretization, stepper.
struct RunConfig {
    PhysicalConfig physical;
    int m_modes = 1500;
    double omega_up = 300.0;
    EvolutionSpec evolution;
    std::string name = "run";
};

struct Preset {
    std::string name;
    std::string figure;  // the published panel this tuple pins
    RunConfig config;
};

// Scenario presets; each tuple (Lambda, eta, tau, M, omega_up, fractions)
// is pinned to one published figure panel.
const std::vector<Preset>& preset_table();

std::optional<RunConfig> find_preset(const std::string& name);
std::vector<std::string> preset_names();

} // namespace dwal::tools

#endif
