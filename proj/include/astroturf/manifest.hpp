#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

namespace astroturf {

inline constexpr std::string_view kToolVersion = "0.1.0";

// Hex SHA-256 of a byte string, a file, or a directory (files in path order,
// each contributing its relative name and content digest).
std::string sha256_hex(std::string_view bytes);
std::string sha256_path(const std::filesystem::path& path);

struct RunManifest {
    std::string command;                          // subcommand, e.g. "eval cv"
    std::string config_digest;                    // empty when no config file was used
    std::map<std::string, std::string> input_digests;
    std::optional<std::uint64_t> seed;
    std::string tool_version{kToolVersion};
    double wall_time_seconds = 0.0;

    nlohmann::json to_json() const;
    static RunManifest from_json(const nlohmann::json& j);
};

// Each output directory holds one manifest.json with one entry per command
// that wrote into it; writing replaces the entry for the same command.
void write_manifest(const std::filesystem::path& dir, const RunManifest& manifest);
std::map<std::string, RunManifest> read_manifest(const std::filesystem::path& dir);

}  // namespace astroturf
