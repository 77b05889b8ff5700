#ifndef RMERTON_CONFIG_FILE_HPP
#define RMERTON_CONFIG_FILE_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "rmerton/sim_config.hpp"

namespace rmerton {

// Raised for malformed files, unknown or missing keys, bad values.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Line-oriented `key = value` text; '#' starts a comment, blank lines ignored.
// Later assignments win, which is how --set overrides are applied.
std::map<std::string, std::string> parse_key_values(const std::string& text);

std::map<std::string, std::string> read_config_file(const std::string& path);

// Builds a SimConfig from parsed keys. Every box bound and every core
// experiment field is required; only mode, out_dir, the pi grid and the
// admissibility threshold carry defaults. Unknown keys are an error.
SimConfig config_from_keys(const std::map<std::string, std::string>& keys);

// Order-independent 64-bit FNV-1a hash of the canonicalized key set.
// Embedded in every output file so results can be traced to their inputs.
std::uint64_t config_fingerprint(const SimConfig& config);

std::string fingerprint_hex(std::uint64_t fp);

// Canonical `key = value` lines for a config (sorted keys, shortest
// round-trip float formatting).
std::vector<std::string> canonical_lines(const SimConfig& config);

}  // namespace rmerton

#endif  // RMERTON_CONFIG_FILE_HPP
