#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "ccabc/sim.hpp"

namespace ccabc {

// Thrown for malformed or out-of-contract run configs; the CLI maps it to
// exit code 1.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Loads and validates a JSON run config. Unknown keys are rejected, missing
// keys take the documented defaults, every violation names the key and the
// constraint.
SimConfig load_config(const std::string& path);
SimConfig parse_config(const std::string& json_text);

// Canonical JSON of the default-filled config (sorted keys), used for the
// manifest echo and the config hash.
std::string config_to_json(const SimConfig& cfg);
std::uint64_t config_hash(const SimConfig& cfg);

std::string default_config_json();

}  // namespace ccabc
