#include "runner.hpp"

#include <atomic>
#include <chrono>
#include <limits>
#include <stdexcept>
#include <thread>

#include "csv.hpp"
#include "dwal/propagator.hpp"

namespace dwal::tools {

RunOutput run_simulation(const RunConfig& rc, const RunOptions& opts) {
    RunOutput out;
    out.config = rc;
    out.derived = derive_params(rc.physical);
    out.grid = build_grid(rc.physical.Lambda, rc.physical.omega_z, rc.m_modes,
                          rc.omega_up);
    out.derived.S = out.grid.shift_S;

    EvolutionSpec spec = rc.evolution;
    spec.enforce_recurrence = !opts.allow_beyond_recurrence;

    const AmplitudeState y0 = init_state(rc.physical, out.grid);
    const auto t0 = std::chrono::steady_clock::now();
    out.trajectory = integrate(y0, spec, out.derived, out.grid, rc.physical.kappa_on);
    out.wall_time_sec = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t0).count();
    return out;
}

void write_run_files(const RunOutput& out, const std::filesystem::path& dir,
                     const RunOptions& opts) {
    std::filesystem::create_directories(dir);

    nlohmann::json manifest = manifest_json(out.config, out.derived, out.grid);
    add_diagnostics(manifest, out.trajectory, out.wall_time_sec);
    const std::string hash = manifest["content_hash"];

    write_file((dir / "manifest.json").string(), manifest.dump(2) + "\n");
    write_file((dir / "timeseries.csv").string(),
               timeseries_csv(out.trajectory, hash));

    const double t_spec = std::min(out.config.evolution.tau, out.config.evolution.t_end);
    const Spectrum spec = spectrum_at(out.trajectory, out.grid, t_spec);
    const double inf = std::numeric_limits<double>::infinity();
    write_file((dir / "spectrum.csv").string(), spectrum_csv(spec, hash, -inf, inf));
    write_file((dir / "spectrum_zoom.csv").string(),
               spectrum_csv(spec, hash, -inf, opts.zoom_max_omega));

    // closeup of the inter-peak window, where the dark line lives
    const SpectrumFeatures feats = find_peaks_and_dip(spec);
    if (feats.peaks.size() >= 2) {
        const double w1 = feats.peaks[0].omega, w2 = feats.peaks[1].omega;
        write_file((dir / "spectrum_closeup.csv").string(),
                   spectrum_csv(spec, hash, std::min(w1, w2), std::max(w1, w2)));
    }
}

ScanResult scan_steady(const RunConfig& base, const std::string& axis,
                       const std::vector<double>& values, const ScanOptions& opts) {
    if (axis != "Lambda" && axis != "eta")
        throw std::invalid_argument("scan axis must be Lambda or eta");
    for (size_t i = 1; i < values.size(); ++i)
        if (!(values[i] > values[i - 1]))
            throw std::invalid_argument("scan values must be strictly increasing");

    ScanResult result;
    result.axis = axis;
    result.points.resize(values.size());

    RunOptions ropts;
    ropts.allow_beyond_recurrence = opts.allow_beyond_recurrence;

    std::atomic<size_t> next{0};
    auto work = [&]() {
        while (true) {
            const size_t i = next.fetch_add(1);
            if (i >= values.size()) return;
            ScanPoint& pt = result.points[i];
            pt.axis_value = values[i];
            try {
                RunConfig rc = base;
                if (axis == "Lambda") rc.physical.Lambda = values[i];
                else rc.physical.eta = values[i];
                const RunOutput out = run_simulation(rc, ropts);
                const SteadyState st = detect_steady_state(
                    out.trajectory, opts.tail_fraction, opts.threshold_frac);
                pt.steady = st.found;
                pt.steady_value = st.value;
                pt.beat_amplitude = st.beat_amplitude;
            } catch (const std::exception& ex) {
                pt.failed = true;
                pt.error = ex.what();
            }
        }
    };

    const int nw = std::max(1, opts.workers);
    if (nw == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < nw; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    return result;
}

void write_scan_files(const ScanResult& scan, const RunConfig& base,
                      const std::vector<double>& values,
                      const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);

    for (size_t i = 0; i < values.size(); ++i) {
        RunConfig rc = base;
        if (scan.axis == "Lambda") rc.physical.Lambda = values[i];
        else rc.physical.eta = values[i];

        DerivedParams derived = derive_params(rc.physical);
        const ContinuumGrid grid = build_grid(rc.physical.Lambda, rc.physical.omega_z,
                                              rc.m_modes, rc.omega_up);
        derived.S = grid.shift_S;

        nlohmann::json manifest = manifest_json(rc, derived, grid);
        const auto& pt = scan.points[i];
        manifest["scan_point"] = {
            {"index", i},
            {"axis", scan.axis},
            {"value", pt.axis_value},
            {"status", pt.failed ? "failed" : (pt.steady ? "steady" : "no_steady_state")},
        };
        if (pt.failed) manifest["scan_point"]["error"] = pt.error;

        const auto pdir = dir / ("point-" + std::to_string(i));
        std::filesystem::create_directories(pdir);
        write_file((pdir / "manifest.json").string(), manifest.dump(2) + "\n");
    }

    // scan-level manifest: the base configuration the axis sweeps over
    DerivedParams base_derived = derive_params(base.physical);
    const ContinuumGrid base_grid = build_grid(base.physical.Lambda, base.physical.omega_z,
                                               base.m_modes, base.omega_up);
    base_derived.S = base_grid.shift_S;
    nlohmann::json manifest = manifest_json(base, base_derived, base_grid);
    manifest["scan"] = {{"axis", scan.axis}, {"points", values.size()}};
    write_file((dir / "manifest.json").string(), manifest.dump(2) + "\n");

    const std::string hash = content_hash(base);
    write_file((dir / "scan.csv").string(), scan_csv(scan, hash));
}

} // namespace dwal::tools
