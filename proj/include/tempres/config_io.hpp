#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

#include "tempres/information.hpp"
#include "tempres/montecarlo.hpp"

namespace tempres {

/// Everything a command reads from its JSON config file. All times are in units of sigma_t.
struct ToolConfig {
    ExperimentConfig experiment = ExperimentConfig::defaults();
    double fd_step = kDefaultFdStep;
};

/// Parses a JSON config. Every key is optional; unknown keys and type errors are
/// ConfigErrors whose message starts with "<source>:<line>:".
ToolConfig parse_config(std::string_view text, std::string_view source = "config");

/// Reads and parses a file; a missing or unreadable file is a ConfigError.
ToolConfig load_config(const std::filesystem::path& path);

/// Full echo of a config, loadable by parse_config.
nlohmann::json config_to_json(const ToolConfig& config);

} // namespace tempres
