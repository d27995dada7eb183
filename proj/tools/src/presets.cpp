#include "presets.hpp"

namespace dwal::tools {

namespace {

RunConfig make(const std::string& name, double Lambda, double eta, double tau,
               double t_end, int m_modes) {
    RunConfig rc;
    rc.name = name;
    rc.physical.Lambda = Lambda;
    rc.physical.eta = eta;
    rc.m_modes = m_modes;
    rc.omega_up = 300.0;
    rc.evolution.tau = tau;
    rc.evolution.t_end = t_end;
    // above Lambda = 2e3 the default step leaves too much norm drift over
    // these horizons; half it so every preset stays inside the 1e-6 guard
    rc.evolution.dt = Lambda > 2e3 ? 5e-4 : 1e-3;
    rc.evolution.sample_every = 1e-2;
    return rc;
}

std::vector<Preset> build_table() {
    std::vector<Preset> t;

    // Markovian population evolution, 10 s windows, M = 1500.
    t.push_back({"mark-P-a", "markovian populations (a)", make("mark-P-a", 1e2, 2.0, 10, 10, 1500)});
    t.push_back({"mark-P-b", "markovian populations (b)", make("mark-P-b", 1e2, 1.7, 10, 10, 1500)});
    t.push_back({"mark-P-c", "markovian populations (c)", make("mark-P-c", 1e2, 1.5, 10, 10, 1500)});
    t.push_back({"mark-P-d", "markovian populations (d)", make("mark-P-d", 2e2, 1.7, 10, 10, 1500)});

    // Same runs, spectral view at tau = 10 s.
    t.push_back({"mark-S-a", "markovian spectra (a)", make("mark-S-a", 1e2, 2.0, 10, 10, 1500)});
    t.push_back({"mark-S-b", "markovian spectra (b)", make("mark-S-b", 1e2, 1.7, 10, 10, 1500)});
    t.push_back({"mark-S-c", "markovian spectra (c)", make("mark-S-c", 1e2, 1.5, 10, 10, 1500)});
    t.push_back({"mark-S-d", "markovian spectra (d)", make("mark-S-d", 2e2, 1.7, 10, 10, 1500)});

    // Strong outcoupling at eta = 1.7, long windows for steady-state reads.
    // M = 3000 keeps the recurrence time (62.8 s) beyond the 40 s horizon.
    t.push_back({"nm-gam-a", "non-markovian populations (a)", make("nm-gam-a", 5e2, 1.7, 40, 40, 3000)});
    t.push_back({"nm-gam-b", "non-markovian populations (b)", make("nm-gam-b", 1e3, 1.7, 40, 40, 3000)});
    t.push_back({"nm-gam-c", "non-markovian populations (c)", make("nm-gam-c", 2e3, 1.7, 40, 40, 3000)});
    t.push_back({"nm-gam-d", "non-markovian populations (d)", make("nm-gam-d", 4e3, 1.7, 40, 40, 3000)});

    // Strong outcoupling across intertrap distances.
    t.push_back({"nm-eta-a", "population vs distance (a)", make("nm-eta-a", 4e3, 4.0, 10, 10, 1500)});
    t.push_back({"nm-eta-b", "population vs distance (b)", make("nm-eta-b", 4e3, 2.0, 10, 10, 1500)});
    t.push_back({"nm-eta-c", "population vs distance (c)", make("nm-eta-c", 4e3, 1.8, 10, 10, 1500)});
    t.push_back({"nm-eta-d", "population vs distance (d)", make("nm-eta-d", 4e3, 1.6, 10, 10, 1500)});

    // Spectra at tau = 10 s across distances, Lambda = 2e3.
    t.push_back({"nm-spec-eta-a", "spectra vs distance (a)", make("nm-spec-eta-a", 2e3, 4.0, 10, 10, 1500)});
    t.push_back({"nm-spec-eta-b", "spectra vs distance (b)", make("nm-spec-eta-b", 2e3, 2.0, 10, 10, 1500)});
    t.push_back({"nm-spec-eta-c", "spectra vs distance (c)", make("nm-spec-eta-c", 2e3, 1.8, 10, 10, 1500)});
    t.push_back({"nm-spec-eta-d", "spectra vs distance (d)", make("nm-spec-eta-d", 2e3, 1.6, 10, 10, 1500)});

    // Spectra at tau = 10 s across outcoupling rates, eta = 1.7.
    t.push_back({"nm-spec-gam-a", "spectra vs rate (a)", make("nm-spec-gam-a", 5e2, 1.7, 10, 10, 1500)});
    t.push_back({"nm-spec-gam-b", "spectra vs rate (b)", make("nm-spec-gam-b", 1e3, 1.7, 10, 10, 1500)});
    t.push_back({"nm-spec-gam-c", "spectra vs rate (c)", make("nm-spec-gam-c", 2e3, 1.7, 10, 10, 1500)});
    t.push_back({"nm-spec-gam-d", "spectra vs rate (d)", make("nm-spec-gam-d", 4e3, 1.7, 10, 10, 1500)});

    // Dark-line closeup window around the interference dip.
    t.push_back({"dip-closeup", "dip closeup", make("dip-closeup", 2e3, 1.7, 10, 10, 1500)});

    return t;
}

} // namespace

const std::vector<Preset>& preset_table() {
    static const std::vector<Preset> table = build_table();
    return table;
}

std::optional<RunConfig> find_preset(const std::string& name) {
    for (const auto& p : preset_table())
        if (p.name == name) return p.config;
    return std::nullopt;
}

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& p : preset_table()) names.push_back(p.name);
    return names;
}

} // namespace dwal::tools
