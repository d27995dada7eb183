#ifndef DWAL_TOOLS_RUNNER_HPP
#define DWAL_TOOLS_RUNNER_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "dwal/observables.hpp"
#include "manifest.hpp"
#include "presets.hpp"

namespace dwal::tools {

struct RunOutput {
    RunConfig config;
    DerivedParams derived;  // S filled from the grid
    ContinuumGrid grid;
    Trajectory trajectory;
    double wall_time_sec = 0.0;
};

struct RunOptions {
    bool allow_beyond_recurrence = false;
    double zoom_max_omega = 50.0;  // low-frequency window emitted alongside spectra
};

RunOutput run_simulation(const RunConfig& rc, const RunOptions& opts = {});

// Emits timeseries.csv, spectrum.csv (+ zoom and closeup slices) and
// manifest.json under dir.
void write_run_files(const RunOutput& out, const std::filesystem::path& dir,
                     const RunOptions& opts = {});

struct ScanOptions {
    int workers = 1;
    double tail_fraction = 0.25;
    double threshold_frac = 0.05;
    bool allow_beyond_recurrence = false;
};

// Runs one simulation per axis value (axis is "Lambda" or "eta"),
// concurrently when workers > 1, and reduces each to its steady-state
// read.  A failing point is marked failed; the scan carries on.  Results
// are ordered by index, independent of the worker count.
ScanResult scan_steady(const RunConfig& base, const std::string& axis,
                       const std::vector<double>& values, const ScanOptions& opts);

// scan.csv plus one manifest per point under dir/point-<k>/.
void write_scan_files(const ScanResult& scan, const RunConfig& base,
                      const std::vector<double>& values,
                      const std::filesystem::path& dir);

} // namespace dwal::tools

#endif
