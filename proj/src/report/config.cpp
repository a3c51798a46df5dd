// SPDX-License-Identifier: Apache-2.0
#include "slopscope/report/config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

#include "slopscope/common/error.hpp"

namespace slopscope::report {
namespace {

using Json = nlohmann::json;

Json convert(const YAML::Node& node) {
  switch (node.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined:
      return nullptr;
    case YAML::NodeType::Sequence: {
      Json arr = Json::array();
      for (const auto& item : node) arr.push_back(convert(item));
      return arr;
    }
    case YAML::NodeType::Map: {
      Json obj = Json::object();
      for (const auto& kv : node) obj[kv.first.as<std::string>()] = convert(kv.second);
      return obj;
    }
    case YAML::NodeType::Scalar:
      break;
  }
  const std::string text = node.Scalar();
  if (node.Tag() == "!") return text;  // quoted
  if (text == "true" || text == "True" || text == "TRUE") return true;
  if (text == "false" || text == "False" || text == "FALSE") return false;
  if (text == "~" || text == "null" || text == "Null" || text == "NULL") return nullptr;
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  return text;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> strings(const Json& v, std::string_view key, std::string_view origin) {
  std::vector<std::string> out;
  if (v.is_string()) return {v.get<std::string>()};
  if (!v.is_array()) throw UsageError(std::string(origin) + ": '" + std::string(key) + "' must be a list of strings");
  for (const auto& item : v) {
    if (!item.is_string()) {
      throw UsageError(std::string(origin) + ": '" + std::string(key) + "' must be a list of strings");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

std::uint64_t unsigned_value(const Json& v, std::string_view key, std::string_view origin) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  throw UsageError(std::string(origin) + ": '" + std::string(key) + "' must be a non-negative integer");
}

}  // namespace

Json yaml_to_json(std::string_view text, std::string_view origin) {
  try {
    return convert(YAML::Load(std::string(text)));
  } catch (const YAML::Exception& e) {
    throw UsageError(std::string(origin) + ": line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
}

Json read_structured(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  if (path.extension() == ".json") {
    try {
      return Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw UsageError(path.string() + ": " + e.what());
    }
  }
  return yaml_to_json(text, path.string());
}

FileConfig parse_config(const Json& doc, std::string_view origin) {
  FileConfig cfg;
  if (doc.is_null()) return cfg;
  if (!doc.is_object()) throw UsageError(std::string(origin) + ": config must be a mapping");
  for (const auto& [key, v] : doc.items()) {
    if (key == "languages") {
      cfg.languages = strings(v, key, origin);
    } else if (key == "encoding") {
      if (!v.is_string()) throw UsageError(std::string(origin) + ": 'encoding' must be a string");
      cfg.encoding = v.get<std::string>();
    } else if (key == "exclude") {
      cfg.exclude = strings(v, key, origin);
    } else if (key == "minified_line_threshold") {
      cfg.minified_line_threshold = static_cast<std::uint32_t>(unsigned_value(v, key, origin));
    } else if (key == "threads") {
      cfg.threads = static_cast<unsigned>(unsigned_value(v, key, origin));
    } else if (key == "cc_cutoff") {
      cfg.cc_cutoff = static_cast<std::uint32_t>(unsigned_value(v, key, origin));
    } else if (key == "size_exponent") {
      if (!v.is_number()) throw UsageError(std::string(origin) + ": 'size_exponent' must be a number");
      cfg.size_exponent = v.get<double>();
    } else if (key == "min_window") {
      cfg.min_window = static_cast<std::uint32_t>(unsigned_value(v, key, origin));
    } else {
      throw UsageError(std::string(origin) + ": unknown config key '" + key + "'");
    }
  }
  return cfg;
}

FileConfig load_config(const std::filesystem::path& path) { return parse_config(read_structured(path), path.string()); }

std::vector<trajectory::PanelRepoConfig> load_panel_config(const std::filesystem::path& path) {
  const Json doc = read_structured(path);
  const std::string origin = path.string();
  const Json* list = &doc;
  if (doc.is_object()) {
    if (!doc.contains("repos")) throw UsageError(origin + ": expected a 'repos' list");
    list = &doc.at("repos");
  }
  if (!list->is_array()) throw UsageError(origin + ": expected a list of repositories");
  const std::filesystem::path base = path.parent_path();
  std::vector<trajectory::PanelRepoConfig> repos;
  std::set<std::string> ids;
  for (const auto& item : *list) {
    if (!item.is_object()) throw UsageError(origin + ": each repository must be a mapping");
    trajectory::PanelRepoConfig r;
    for (const auto& [key, v] : item.items()) {
      if (key == "repo_path") {
        if (!v.is_string()) throw UsageError(origin + ": 'repo_path' must be a string");
        r.repo_path = v.get<std::string>();
      } else if (key == "repo_id") {
        if (!v.is_string()) throw UsageError(origin + ": 'repo_id' must be a string");
        r.repo_id = v.get<std::string>();
      } else if (key == "stars") {
        r.stars = unsigned_value(v, key, origin);
      } else if (key == "max_commits") {
        r.max_commits = static_cast<std::uint32_t>(unsigned_value(v, key, origin));
      } else if (key == "seed") {
        r.seed = unsigned_value(v, key, origin);
      } else {
        throw UsageError(origin + ": unknown repository key '" + key + "'");
      }
    }
    if (r.repo_path.empty()) throw UsageError(origin + ": repository without 'repo_path'");
    if (r.repo_id.empty()) r.repo_id = r.repo_path;
    if (!ids.insert(r.repo_id).second) throw UsageError(origin + ": duplicate repo_id '" + r.repo_id + "'");
    if (std::filesystem::path(r.repo_path).is_relative()) r.repo_path = (base / r.repo_path).string();
    repos.push_back(std::move(r));
  }
  return repos;
}

}  // namespace slopscope::report
