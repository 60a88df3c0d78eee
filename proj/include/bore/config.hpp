#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "bore/driver.hpp"

namespace bore {

/// JSON tree <-> RunConfig. Missing keys take their defaults; unknown keys are
/// rejected so typos surface as field diagnostics.
[[nodiscard]] nlohmann::json config_to_json(const RunConfig& config);
[[nodiscard]] RunConfig config_from_json(const nlohmann::json& tree);

/// Reads and validates a config file. Throws ConfigError naming the path, the
/// line of a syntax error, or the offending field.
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);
void save_config(const RunConfig& config, const std::filesystem::path& path);

/// Parse helper shared with the suite loader: turns nlohmann parse errors into ConfigError with a line number.
[[nodiscard]] nlohmann::json parse_json_file(const std::filesystem::path& path);

}  // namespace bore
