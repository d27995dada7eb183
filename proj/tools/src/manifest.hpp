#ifndef DWAL_TOOLS_MANIFEST_HPP
#define DWAL_TOOLS_MANIFEST_HPP

#include <json.hpp>
#include <string>

#include "dwal/dynamics.hpp"
#include "dwal/grid.hpp"
#include "dwal/model.hpp"
#include "presets.hpp"

namespace dwal::tools {

inline constexpr const char* artifact_version = "0.1.0";

// FNV-1a 64-bit over the canonical config text; every data file emitted by
// a run carries this hash so it can be traced to exactly one manifest.
std::string content_hash(const RunConfig& rc);

nlohmann::json manifest_json(const RunConfig& rc, const DerivedParams& derived,
                             const ContinuumGrid& grid);

// Adds integrator diagnostics (norm drift, step counts, wall time, warnings).
void add_diagnostics(nlohmann::json& manifest, const Trajectory& traj,
                     double wall_time_sec);

} // namespace dwal::tools

#endif
