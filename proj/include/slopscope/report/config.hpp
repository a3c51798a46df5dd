// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "slopscope/trajectory/trajectory.hpp"

namespace slopscope::report {

// Settings a config file may provide. Unset fields fall back to command-line
// flags or built-in defaults (flags win over the file).
struct FileConfig {
  std::optional<std::vector<std::string>> languages;
  std::optional<std::string> encoding;
  std::optional<std::vector<std::string>> exclude;
  std::optional<std::uint32_t> minified_line_threshold;
  std::optional<unsigned> threads;
  std::optional<std::uint32_t> cc_cutoff;
  std::optional<double> size_exponent;
  std::optional<std::uint32_t> min_window;
};

// Reads a structured document: `.json` files as JSON, anything else as YAML.
// Throws InputError if unreadable, UsageError if malformed.
nlohmann::json read_structured(const std::filesystem::path& path);

// Converts parsed YAML text to JSON values (plain scalars are typed, quoted
// scalars stay strings). Throws UsageError on syntax errors.
nlohmann::json yaml_to_json(std::string_view text, std::string_view origin);

// Throws UsageError on unknown keys or wrongly typed values.
FileConfig parse_config(const nlohmann::json& doc, std::string_view origin);
FileConfig load_config(const std::filesystem::path& path);

// A list of repositories, or a map with a `repos` list. Relative repo paths
// resolve against the config file's directory.
std::vector<trajectory::PanelRepoConfig> load_panel_config(const std::filesystem::path& path);

}  // namespace slopscope::report
