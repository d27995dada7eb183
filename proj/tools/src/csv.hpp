#ifndef DWAL_TOOLS_CSV_HPP
#define DWAL_TOOLS_CSV_HPP

#include <string>

#include "dwal/dynamics.hpp"
#include "dwal/observables.hpp"

namespace dwal::tools {

// Shortest decimal that round-trips the exact double; keeps CSV bodies
// byte-stable across runs and worker counts.
std::string format_double(double v);

std::string timeseries_csv(const Trajectory& traj, const std::string& manifest_hash);

// omega filter [omega_lo, omega_hi] selects a sub-band (zoom / closeup
// emissions); the full band is (-inf, inf).
std::string spectrum_csv(const Spectrum& spec, const std::string& manifest_hash,
                         double omega_lo, double omega_hi);

std::string scan_csv(const ScanResult& scan, const std::string& manifest_hash);

void write_file(const std::string& path, const std::string& content);

} // namespace dwal::tools

#endif
