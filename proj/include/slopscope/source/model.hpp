// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace slopscope::source {

struct FileRecord {
  std::string path;  // workspace-relative, '/' separators
  std::string language;
  std::uint32_t loc = 0;         // non-blank, non-comment physical lines
  std::uint32_t line_count = 0;  // all physical lines
  bool decode_ok = true;

  bool operator==(const FileRecord&) const = default;
};

struct LineSpan {
  std::uint32_t start_line = 0;  // 1-based, inclusive
  std::uint32_t end_line = 0;

  auto operator<=>(const LineSpan&) const = default;
};

struct CallableRecord {
  std::string qualified_name;
  std::string file;
  LineSpan span;
  std::uint32_t cc = 1;
  std::uint32_t sloc = 1;

  bool operator==(const CallableRecord&) const = default;
};

struct SkippedFile {
  std::string path;
  std::string reason;  // "decode", "minified", "parse", "read"

  bool operator==(const SkippedFile&) const = default;
};

// One workspace snapshot: its analyzable files, every callable in them, and
// the files that were left out. Callables are sorted by (file, start_line).
struct SourceInventory {
  std::vector<FileRecord> files;
  std::vector<CallableRecord> callables;
  std::vector<SkippedFile> skipped;

  std::uint64_t total_loc() const;
  bool operator==(const SourceInventory&) const = default;
};

// Canonical ordering: files and skipped by path, callables by
// (file, start_line, end_line, qualified_name).
void canonicalize(SourceInventory& inventory);

// Order-independent merge of per-file (or per-shard) inventories.
SourceInventory merge(std::vector<SourceInventory> parts);

}  // namespace slopscope::source
