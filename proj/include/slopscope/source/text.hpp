// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace slopscope::source {

// 1-based line and column. Columns count Unicode code points.
struct Position {
  std::uint32_t line = 1;
  std::uint32_t col = 1;
  auto operator<=>(const Position&) const = default;
};

// Maps byte offsets in a UTF-8 buffer to line/column positions.
class LineIndex {
 public:
  LineIndex() = default;
  explicit LineIndex(std::string_view text);

  std::uint32_t line_count() const { return static_cast<std::uint32_t>(starts_.size()); }
  std::uint32_t line_of(std::uint32_t offset) const;
  Position position(std::uint32_t offset) const;
  std::uint32_t line_start(std::uint32_t line) const { return starts_[line - 1]; }

 private:
  std::string_view text_;
  std::vector<std::uint32_t> starts_;
};

bool is_valid_utf8(std::string_view bytes);

// Physical line count the way editors show it: a trailing newline does not
// open a new line; an empty buffer has zero lines.
std::uint32_t physical_line_count(std::string_view text);

// Decodes bytes in the named encoding to UTF-8. Returns false on failure.
// Supported: utf-8, ascii, latin-1 (and common aliases).
bool decode_to_utf8(std::string_view bytes, std::string_view encoding, std::string& out);
bool is_supported_encoding(std::string_view encoding);

}  // namespace slopscope::source
