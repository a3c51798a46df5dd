// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "slopscope/source/adapter.hpp"
#include "slopscope/source/scanner.hpp"

namespace slopscope::verbosity {

enum class RuleKind { Pattern, Regex };

struct QualityRule {
  std::string id;
  std::vector<std::string> languages;  // empty: every registered language
  RuleKind kind = RuleKind::Pattern;
  std::string pattern;
  std::string category;
  std::string message;
  std::string regex_flags;  // subset of "ims", regex rules only
};

// A validated rule collection with patterns compiled per language.
class RuleSet {
 public:
  RuleSet() = default;

  const std::vector<QualityRule>& rules() const { return rules_; }
  std::size_t size() const { return rules_.size(); }
  bool empty() const { return rules_.empty(); }
  const QualityRule* find(std::string_view id) const;

  // Rules applying to `language`, each with its compiled matcher.
  struct Compiled;
  const std::vector<const Compiled*>& for_language(std::string_view language) const;

  // Keeps only the rule with this id. Throws UsageError if it does not exist.
  RuleSet only(std::string_view id) const;

  // Validates and compiles. Throws RuleError listing every invalid rule, or,
  // when `errors` is given, appends the problems there and keeps the valid
  // rules.
  static RuleSet build(std::vector<QualityRule> rules, const source::AdapterRegistry& registry,
                       std::vector<std::string>* errors = nullptr);

 private:
  std::vector<QualityRule> rules_;
  std::vector<std::shared_ptr<const Compiled>> compiled_;
  std::vector<std::pair<std::string, std::vector<const Compiled*>>> by_language_;
};

// Parses a YAML rule file: a sequence of rule maps, a map with a `rules`
// sequence, or a stream of one-rule documents.
std::vector<QualityRule> parse_rules(std::string_view yaml_text, std::string_view origin = "<rules>");

// Parses and builds in one step, reporting every problem in one RuleError.
RuleSet load_rules_text(std::string_view yaml_text, std::string_view origin,
                        const source::AdapterRegistry& registry = source::AdapterRegistry::builtin());

// Throws InputError if the file cannot be read, RuleError if it is invalid.
RuleSet load_rules(const std::filesystem::path& path,
                   const source::AdapterRegistry& registry = source::AdapterRegistry::builtin());

struct RuleMatch {
  std::string rule_id;
  std::string file;
  std::uint32_t first_line = 0;  // lines covered by the match, inclusive
  std::uint32_t last_line = 0;
  source::TextRange span;  // end is exclusive

  bool operator==(const RuleMatch&) const = default;
};

// Every match of every rule applicable to `language` in one parsed file,
// ordered by (start line, start col, rule id).
std::vector<RuleMatch> match_rules(std::string_view path, std::string_view language,
                                   const source::ParsedSource& parsed, const RuleSet& rules);

// Runs match_rules over a whole snapshot in parallel. Ordered by
// (file, start line, start col, rule id).
std::vector<RuleMatch> match_snapshot(const source::ParsedSnapshot& snapshot, const RuleSet& rules,
                                      unsigned threads = 0);

}  // namespace slopscope::verbosity
