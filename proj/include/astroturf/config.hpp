#pragma once

#include <filesystem>
#include <string_view>

#include <json.hpp>

namespace astroturf::config {

// Reads the TOML subset used by the tool's config files: comments, [table]
// and [dotted.table] headers, bare or quoted keys, and values that are
// strings, integers, floats (incl. inf), booleans or (possibly multi-line)
// arrays of those. Tables become nested JSON objects.
nlohmann::json parse_toml(std::string_view content);
nlohmann::json load_toml(const std::filesystem::path& path);

}  // namespace astroturf::config
