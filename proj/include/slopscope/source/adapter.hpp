// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "slopscope/source/line_set.hpp"
#include "slopscope/source/model.hpp"
#include "slopscope/source/text.hpp"

namespace slopscope::source {

// A source line reduced for type-2 clone comparison: identifiers and literals
// replaced by placeholder classes, comments and layout dropped.
struct NormalizedLine {
  std::uint32_t first_line = 0;  // physical line where the line's first token starts
  std::uint32_t last_line = 0;   // last physical line touched by its tokens
  std::string text;

  bool operator==(const NormalizedLine&) const = default;
};

struct TextRange {
  Position start;
  Position end;  // immediately after the range
  auto operator<=>(const TextRange&) const = default;
};

struct Capture {
  std::string text;
  std::vector<TextRange> ranges;
};

// One structural match of a compiled pattern.
struct PatternHit {
  TextRange range;
  std::string text;
  std::map<std::string, Capture> captures;  // keyed by "$NAME"
};

// Language-specific compiled form of a rule pattern.
class CompiledPattern {
 public:
  virtual ~CompiledPattern() = default;
};

// A parsed file as seen by the metric layers.
class ParsedSource {
 public:
  virtual ~ParsedSource() = default;

  virtual std::string_view text() const = 0;
  virtual std::uint32_t line_count() const = 0;
  virtual const LineSet& code_lines() const = 0;
  virtual Position position(std::uint32_t byte_offset) const = 0;

  // Named callables; `path` fills CallableRecord::file.
  virtual std::vector<CallableRecord> callables(std::string_view path) const = 0;
  // With `abstract` false, identifiers and literals keep their spelling
  // (exact clones only).
  virtual std::vector<NormalizedLine> normalized_lines(bool abstract) const = 0;
  virtual std::vector<PatternHit> find(const CompiledPattern& pattern) const = 0;
};

// Grammar adapter contract: one per analyzed language.
class GrammarAdapter {
 public:
  virtual ~GrammarAdapter() = default;

  virtual std::string_view language() const = 0;
  virtual std::vector<std::string> extensions() const = 0;  // with leading '.'

  // Throws ParseError.
  virtual std::unique_ptr<ParsedSource> parse(std::string text) const = 0;
  // Throws ParseError if the pattern is not valid code for this language.
  virtual std::unique_ptr<CompiledPattern> compile_pattern(std::string_view pattern) const = 0;
};

class AdapterRegistry {
 public:
  // Registry holding every adapter this build ships.
  static AdapterRegistry builtin();

  // Throws UsageError when the language id or one of its extensions is
  // already claimed.
  void add(std::unique_ptr<GrammarAdapter> adapter);

  const GrammarAdapter* by_language(std::string_view language) const;
  // `extension` includes the leading '.'; matching is case-sensitive.
  const GrammarAdapter* by_extension(std::string_view extension) const;
  std::vector<std::string> languages() const;

 private:
  std::vector<std::shared_ptr<const GrammarAdapter>> adapters_;
  std::map<std::string, const GrammarAdapter*, std::less<>> by_extension_;
};

}  // namespace slopscope::source
