#ifndef SSMON_CONFIG_HPP
#define SSMON_CONFIG_HPP

#include <filesystem>
#include <string>

#include "ssmon/simulation.hpp"

namespace ssmon {

/// Parses a JSON scenario configuration (schema in docs/config_schema.md) and
/// fully validates it. Unknown fields are rejected. Replay trace paths are
/// resolved against base_dir. Throws ConfigError carrying the dotted path of
/// the offending field.
ScenarioConfig load_config(const std::string& json_text,
                           const std::filesystem::path& base_dir = ".");

/// load_config over a file's contents; relative replay paths resolve against
/// the file's directory.
ScenarioConfig load_config_file(const std::filesystem::path& path);

}  // namespace ssmon

#endif  // SSMON_CONFIG_HPP
