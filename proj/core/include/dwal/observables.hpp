#ifndef DWAL_OBSERVABLES_HPP
#define DWAL_OBSERVABLES_HPP

#include <optional>
#include <string>
#include <vector>

#include "dwal/dynamics.hpp"

namespace dwal {

// Outcoupled-atom distribution at a snapshot time.  `raw` is |c_j|^2 per
// mode (atoms); `density` is raw / epsilon, the spectral density that
// converges under grid refinement.
struct Spectrum {
    std::vector<double> omegas;
    std::vector<double> raw;
    std::vector<double> density;
    double t_snapshot = 0.0;
    bool nearest_used = false;  // requested time was not a stored snapshot
};

// Snapshot closest to t (warns through nearest_used if not exact).
Spectrum spectrum_at(const Trajectory& traj, const ContinuumGrid& grid, double t);

struct DecayFit {
    double gamma = 0.0;     // decay rate of N_A, 1/s
    double residual = 0.0;  // rms residual of the log-linear fit
};

// Least-squares line through log N_A(t) over [t0, t1].  Non-monotone data
// shows up as a large residual, never an exception; samples with
// non-positive population are skipped.
DecayFit fit_decay(const Trajectory& traj, double t0, double t1);

// Dominant angular frequency of N_A - N_B from the zero-crossing spacing of
// the detrended signal; empty when fewer than four extrema are present.
std::optional<double> oscillation_frequency(const Trajectory& traj);

struct SteadyState {
    bool found = false;
    double value = 0.0;           // mean N_A over the tail window when found
    double beat_amplitude = 0.0;  // peak-to-peak N_A over the tail window
};

// Mean of N_A over the trailing tail_fraction of the series if its
// peak-to-peak variation stays below threshold_frac of the tail's mean
// level; otherwise the no-steady-state marker with the beat amplitude.
// The series must cover at least 20 s.
SteadyState detect_steady_state(const Trajectory& traj,
                                double tail_fraction = 0.25,
                                double threshold_frac = 0.05);

struct Peak {
    double omega = 0.0;
    double height = 0.0;  // spectral density at the maximum
    double area = 0.0;    // atoms within +-3 half-widths
};

struct Dip {
    double omega = 0.0;
    double depth = 0.0;  // spectral density at the minimum
    double width = 0.0;  // extent of the region below twice the depth
};

struct SpectrumFeatures {
    std::vector<Peak> peaks;  // sorted by height, tallest first
    std::optional<Dip> dip;   // deepest minimum between the two tallest peaks
};

SpectrumFeatures find_peaks_and_dip(const Spectrum& spec,
                                    double prominence_frac = 0.01);

// One point of a steady-state parameter scan.
struct ScanPoint {
    double axis_value = 0.0;
    bool failed = false;
    bool steady = false;
    double steady_value = 0.0;
    double beat_amplitude = 0.0;
    std::string error;
};

struct ScanResult {
    std::string axis;  // "Lambda" or "eta"
    std::vector<ScanPoint> points;
};

} // namespace dwal

#endif
