#include "manifest.hpp"

#include <cstdint>

#include "config_file.hpp"

namespace dwal::tools {

namespace {

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : data) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)h);
    return buf;
}

} // namespace

std::string content_hash(const RunConfig& rc) {
    return fnv1a_hex(canonical_config_text(rc));
}

nlohmann::json manifest_json(const RunConfig& rc, const DerivedParams& derived,
                             const ContinuumGrid& grid) {
    nlohmann::json j;
    j["artifact"] = {{"name", "dwal"}, {"version", artifact_version}};
    j["content_hash"] = content_hash(rc);

    const auto& p = rc.physical;
    j["config"] = {
        {"name", rc.name},
        {"mass_kg", p.mass_kg},
        {"scattering_length_m", p.scattering_length_m},
        {"omega_z_per_sec", p.omega_z},
        {"lambda", p.lambda},
        {"Lambda_per_sec2", p.Lambda},
        {"eta", p.eta},
        {"n_total", p.n_total},
        {"alpha_frac", p.alpha_frac},
        {"beta_frac", p.beta_frac},
        {"phi0_rad", p.phi0},
        {"kappa_on", p.kappa_on},
        {"m_modes", rc.m_modes},
        {"omega_up_per_sec", rc.omega_up},
        {"t_end_sec", rc.evolution.t_end},
        {"dt_sec", rc.evolution.dt},
        {"tau_sec", rc.evolution.tau},
        {"sample_every_sec", rc.evolution.sample_every},
        {"integrator", rc.evolution.integrator == IntegratorKind::FixedRk4 ? "rk4" : "rk45"},
        {"frame", rc.evolution.frame == Frame::Interaction ? "interaction" : "direct"},
    };

    j["derived"] = {
        {"l_z_m", derived.l_z},
        {"l_x_m", derived.l_x},
        {"omega_o_exact_per_sec", derived.omega_o_exact},
        {"omega_o_approx_per_sec", derived.omega_o_approx},
        {"J_per_sec", derived.J},
        {"kappa_per_sec", derived.kappa},
        {"overlap", derived.overlap},
        {"n_max", derived.n_max},
        {"shift_S_per_sec", derived.S},
        {"J_eff_per_sec", derived.J - derived.S * derived.overlap},
    };

    j["validity"] = nlohmann::json::array();
    for (const auto& c : derived.checks)
        j["validity"].push_back({{"name", c.name},
                                 {"satisfied", c.satisfied},
                                 {"ratio", c.ratio},
                                 {"margin", c.margin},
                                 {"detail", c.detail}});

    j["grid"] = {
        {"m_modes", grid.m_modes},
        {"omega_up_per_sec", grid.omega_up},
        {"epsilon_per_sec", grid.epsilon},
        {"shift_S_per_sec", grid.shift_S},
        {"recurrence_time_sec", grid.recurrence_time},
    };
    return j;
}

void add_diagnostics(nlohmann::json& manifest, const Trajectory& traj,
                     double wall_time_sec) {
    manifest["diagnostics"] = {
        {"norm_drift", traj.norm_drift},
        {"steps", traj.steps},
        {"rhs_evals", traj.rhs_evals},
        {"wall_time_sec", wall_time_sec},
        {"warnings", traj.warnings},
    };
}

} // namespace dwal::tools
