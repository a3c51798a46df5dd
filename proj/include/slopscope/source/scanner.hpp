// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "slopscope/source/adapter.hpp"
#include "slopscope/source/model.hpp"

namespace slopscope::source {

struct ScanConfig {
  std::vector<std::string> languages{"python"};
  std::string encoding = "utf-8";
  std::vector<std::string> exclude;  // fnmatch globs over relative paths; '*' crosses '/'
  std::uint32_t minified_line_threshold = 500;
  unsigned threads = 0;  // 0: hardware concurrency
};

// Raw file content from a directory or a git tree.
struct SourceBlob {
  std::string path;  // workspace-relative, '/' separators
  std::string bytes;
};

struct AnalyzedFile {
  FileRecord record;
  std::vector<CallableRecord> callables;
  std::shared_ptr<const ParsedSource> parsed;
};

// Every analyzable file of one snapshot with its parse kept alive for the
// rule and clone passes. Files are sorted by path.
struct ParsedSnapshot {
  std::vector<AnalyzedFile> files;
  std::vector<SkippedFile> skipped;

  SourceInventory inventory() const;
};

bool is_excluded(std::string_view path, const std::vector<std::string>& globs);

// Whether a relative path maps to an enabled adapter and is not excluded.
bool is_candidate(std::string_view path, const ScanConfig& config, const AdapterRegistry& registry);

// Collects files under `root` whose extension maps to an enabled adapter.
// Throws InputError if root is missing or not a directory. Unreadable files
// are returned in `unreadable`.
std::vector<SourceBlob> read_tree(const std::filesystem::path& root, const ScanConfig& config,
                                  const AdapterRegistry& registry, std::vector<SkippedFile>* unreadable = nullptr);

// Decodes, filters and parses blobs in parallel. Blobs without an enabled
// adapter are ignored.
ParsedSnapshot parse_snapshot(std::vector<SourceBlob> blobs, const ScanConfig& config,
                              const AdapterRegistry& registry);

SourceInventory scan_tree(const std::filesystem::path& root, const ScanConfig& config,
                          const AdapterRegistry& registry = AdapterRegistry::builtin());

// Throws UsageError for unknown languages or encodings.
void validate(const ScanConfig& config, const AdapterRegistry& registry);

}  // namespace slopscope::source
