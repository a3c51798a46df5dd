// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace slopscope::python {

enum class TokenKind : std::uint8_t {
  Name,
  Number,
  String,
  Op,
  Newline,  // end of a logical line
  Nl,       // non-logical line break (blank line, inside brackets)
  Comment,
  Indent,
  Dedent,
  Metavar,  // $NAME or $NAME? (pattern mode only)
  EndMarker,
};

struct Token {
  TokenKind kind;
  std::uint32_t begin;  // byte offsets into the source
  std::uint32_t end;
  std::uint32_t line;  // 1-based line of `begin`
  std::uint32_t end_line;
  std::string_view text;
};

struct LexOptions {
  // Accept `$NAME`, `$NAME?` and `$$` as used in rule patterns.
  bool pattern_mode = false;
};

// Tokenizes Python source. Throws ParseError on malformed input (unterminated
// strings, inconsistent dedent, stray characters).
std::vector<Token> tokenize(std::string_view src, LexOptions options = {});

bool is_keyword(std::string_view word);

}  // namespace slopscope::python
