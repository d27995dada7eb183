#ifndef DWAL_TOOLS_CONFIG_FILE_HPP
#define DWAL_TOOLS_CONFIG_FILE_HPP

#include <stdexcept>
#include <string>

#include "presets.hpp"

namespace dwal::tools {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Flat key = value text, '#' comments, units spelled in key names
// (omega_z_per_sec, tau_sec, ...).  Unknown or repeated keys are errors
// with file:line diagnostics; unit typos should fail loudly, not guess.
// Keys not present keep the values already in `base`.
RunConfig parse_config_text(const std::string& text, const std::string& origin,
                            RunConfig base = {});

RunConfig load_config_file(const std::string& path, RunConfig base = {});

// The canonical key = value rendering of a run configuration; also the
// string the manifest content hash is computed over.
std::string canonical_config_text(const RunConfig& rc);

} // namespace dwal::tools

#endif
