#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "tempres/config_io.hpp"

namespace tempres {

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

struct OutputFile {
    std::string name;  // relative to the output directory
    std::string sha256;
    std::size_t bytes = 0;
};

/// What was run and what it produced; enough to regenerate every output.
struct RunManifest {
    std::string command;
    std::string tool_version;
    std::string timestamp;  // UTC, ISO 8601
    ToolConfig config;
    std::vector<OutputFile> outputs;

    nlohmann::json to_json() const;
};

std::string utc_timestamp();

} // namespace tempres
