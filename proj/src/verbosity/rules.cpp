// SPDX-License-Identifier: Apache-2.0
#include "slopscope/verbosity/rules.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <boost/regex.hpp>
#include <fstream>
#include <set>
#include <sstream>

#include "slopscope/common/error.hpp"
#include "slopscope/common/parallel.hpp"

namespace slopscope::verbosity {

struct RuleSet::Compiled {
  QualityRule rule;
  std::string language;
  std::shared_ptr<const source::CompiledPattern> pattern;  // kind Pattern
  boost::regex regex;                                      // kind Regex
};

namespace {

const std::set<std::string, std::less<>> kRuleKeys = {"id",       "languages", "language", "kind",       "pattern",
                                                      "category", "message",   "severity", "regex_flags"};

std::string describe(const QualityRule& rule, std::size_t index) {
  if (!rule.id.empty()) return "rule '" + rule.id + "'";
  return "rule #" + std::to_string(index + 1);
}

std::vector<std::string> string_list(const YAML::Node& node) {
  std::vector<std::string> out;
  if (node.IsScalar()) {
    out.push_back(node.as<std::string>());
  } else if (node.IsSequence()) {
    for (const auto& item : node) out.push_back(item.as<std::string>());
  } else if (!node.IsNull()) {
    throw YAML::Exception(node.Mark(), "expected a string or a list of strings");
  }
  return out;
}

QualityRule parse_one(const YAML::Node& node, std::size_t index, std::vector<std::string>& errors) {
  QualityRule rule;
  if (!node.IsMap()) {
    errors.push_back("rule #" + std::to_string(index + 1) + ": expected a mapping");
    return rule;
  }
  try {
    if (node["id"]) rule.id = node["id"].as<std::string>();
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      if (!kRuleKeys.contains(key)) errors.push_back(describe(rule, index) + ": unknown key '" + key + "'");
    }
    if (node["languages"]) rule.languages = string_list(node["languages"]);
    if (node["language"]) {
      for (auto& l : string_list(node["language"])) rule.languages.push_back(l);
    }
    const std::string kind = node["kind"] ? node["kind"].as<std::string>() : "pattern";
    if (kind == "pattern") {
      rule.kind = RuleKind::Pattern;
    } else if (kind == "regex") {
      rule.kind = RuleKind::Regex;
    } else {
      errors.push_back(describe(rule, index) + ": kind must be 'pattern' or 'regex', got '" + kind + "'");
    }
    if (node["pattern"]) rule.pattern = node["pattern"].as<std::string>();
    if (node["category"]) rule.category = node["category"].as<std::string>();
    if (node["message"]) rule.message = node["message"].as<std::string>();
    if (node["regex_flags"]) {
      for (const auto& f : string_list(node["regex_flags"])) rule.regex_flags += f;
    }
  } catch (const YAML::Exception& e) {
    errors.push_back(describe(rule, index) + ": line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  return rule;
}

std::vector<QualityRule> parse_collect(std::string_view text, std::string_view origin,
                                       std::vector<std::string>& errors) {
  std::vector<YAML::Node> docs;
  try {
    docs = YAML::LoadAll(std::string(text));
  } catch (const YAML::Exception& e) {
    errors.push_back(std::string(origin) + ": line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
    return {};
  }
  std::vector<YAML::Node> items;
  for (const auto& doc : docs) {
    if (doc.IsNull()) continue;
    if (doc.IsSequence()) {
      for (const auto& item : doc) items.push_back(item);
    } else if (doc.IsMap() && doc["rules"]) {
      const YAML::Node rules = doc["rules"];
      if (rules.IsSequence()) {
        for (const auto& item : rules) items.push_back(item);
      } else if (!rules.IsNull()) {
        errors.push_back(std::string(origin) + ": 'rules' must be a list");
      }
    } else {
      items.push_back(doc);
    }
  }
  std::vector<QualityRule> out;
  for (std::size_t i = 0; i < items.size(); ++i) out.push_back(parse_one(items[i], i, errors));
  return out;
}

[[noreturn]] void throw_errors(std::string_view origin, const std::vector<std::string>& errors) {
  std::string msg = "invalid rules in " + std::string(origin) + ":";
  for (const auto& e : errors) msg += "\n  " + e;
  throw RuleError(msg);
}

}  // namespace


const QualityRule* RuleSet::find(std::string_view id) const {
  for (const auto& r : rules_) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

const std::vector<const RuleSet::Compiled*>& RuleSet::for_language(std::string_view language) const {
  static const std::vector<const Compiled*> none;
  for (const auto& [lang, list] : by_language_) {
    if (lang == language) return list;
  }
  return none;
}

RuleSet RuleSet::only(std::string_view id) const {
  const QualityRule* rule = find(id);
  if (rule == nullptr) throw UsageError("unknown rule id '" + std::string(id) + "'");
  RuleSet out;
  out.rules_.push_back(*rule);
  for (const auto& c : compiled_) {
    if (c->rule.id == id) out.compiled_.push_back(c);
  }
  for (const auto& [lang, list] : by_language_) {
    std::vector<const Compiled*> kept;
    for (const Compiled* c : list) {
      if (c->rule.id == id) kept.push_back(c);
    }
    out.by_language_.emplace_back(lang, std::move(kept));
  }
  return out;
}

RuleSet RuleSet::build(std::vector<QualityRule> rules, const source::AdapterRegistry& registry,
                       std::vector<std::string>* error_sink) {
  std::vector<std::string> local;
  std::vector<std::string>& errors = error_sink != nullptr ? *error_sink : local;
  RuleSet set;
  std::set<std::string, std::less<>> seen;
  std::vector<std::shared_ptr<const RuleSet::Compiled>> compiled;
  const std::vector<std::string> all_languages = registry.languages();
  for (std::size_t i = 0; i < rules.size(); ++i) {
    QualityRule& rule = rules[i];
    const std::string who = describe(rule, i);
    bool ok = true;
    auto reject = [&](const std::string& why) {
      errors.push_back(who + ": " + why);
      ok = false;
    };
    if (rule.id.empty()) reject("missing id");
    if (!rule.id.empty() && !seen.insert(rule.id).second) reject("duplicate id");
    if (rule.pattern.empty()) reject("missing pattern");
    const std::vector<std::string> languages = rule.languages.empty() ? all_languages : rule.languages;
    for (const auto& lang : languages) {
      if (registry.by_language(lang) == nullptr) reject("unknown language '" + lang + "'");
    }
    if (rule.kind == RuleKind::Pattern && !rule.regex_flags.empty()) reject("regex_flags on a pattern rule");
    for (char f : rule.regex_flags) {
      if (f != 'i' && f != 'm' && f != 's') reject(std::string("unknown regex flag '") + f + "'");
    }
    if (!ok) continue;
    for (const auto& lang : languages) {
      auto c = std::make_shared<RuleSet::Compiled>();
      c->rule = rule;
      c->language = lang;
      try {
        if (rule.kind == RuleKind::Pattern) {
          c->pattern = registry.by_language(lang)->compile_pattern(rule.pattern);
        } else {
          // Perl defaults: '^'/'$' anchor the whole text and '.' skips
          // newlines unless 'm' / 's' ask otherwise.
          boost::regex::flag_type flags = boost::regex::perl;
          const auto has = [&](char f) { return rule.regex_flags.find(f) != std::string::npos; };
          if (has('i')) flags |= boost::regex::icase;
          if (!has('m')) flags |= boost::regex::no_mod_m;
          flags |= has('s') ? boost::regex::mod_s : boost::regex::no_mod_s;
          c->regex = boost::regex(rule.pattern, flags);
        }
      } catch (const ParseError& e) {
        reject("invalid " + lang + " pattern: " + e.what());
        break;
      } catch (const boost::regex_error& e) {
        reject(std::string("invalid regex: ") + e.what());
        break;
      }
      compiled.push_back(std::move(c));
    }
    if (ok) set.rules_.push_back(rule);
  }
  std::erase_if(compiled, [&](const auto& c) { return set.find(c->rule.id) == nullptr; });
  for (const auto& c : compiled) {
    auto it = std::find_if(set.by_language_.begin(), set.by_language_.end(),
                           [&](const auto& entry) { return entry.first == c->language; });
    if (it == set.by_language_.end()) {
      set.by_language_.emplace_back(c->language, std::vector<const RuleSet::Compiled*>{});
      it = std::prev(set.by_language_.end());
    }
    it->second.push_back(c.get());
  }
  set.compiled_ = std::move(compiled);
  if (error_sink == nullptr && !errors.empty()) throw_errors("rule set", errors);
  return set;
}

namespace {

RuleMatch to_match(std::string_view rule_id, std::string_view path, source::TextRange range) {
  RuleMatch m;
  m.rule_id = std::string(rule_id);
  m.file = std::string(path);
  m.span = range;
  m.first_line = range.start.line;
  m.last_line = range.end.line;
  // A range ending right after a newline does not touch the next line.
  if (range.end.col == 1 && range.end.line > range.start.line) --m.last_line;
  return m;
}

bool match_before(const RuleMatch& a, const RuleMatch& b) {
  if (a.file != b.file) return a.file < b.file;
  if (a.span.start != b.span.start) return a.span.start < b.span.start;
  if (a.rule_id != b.rule_id) return a.rule_id < b.rule_id;
  return a.span.end < b.span.end;
}

}  // namespace

std::vector<QualityRule> parse_rules(std::string_view yaml_text, std::string_view origin) {
  std::vector<std::string> errors;
  auto rules = parse_collect(yaml_text, origin, errors);
  if (!errors.empty()) throw_errors(origin, errors);
  return rules;
}

RuleSet load_rules_text(std::string_view yaml_text, std::string_view origin,
                        const source::AdapterRegistry& registry) {
  std::vector<std::string> errors;
  auto rules = parse_collect(yaml_text, origin, errors);
  RuleSet set = RuleSet::build(std::move(rules), registry, &errors);
  if (!errors.empty()) throw_errors(origin, errors);
  return set;
}

RuleSet load_rules(const std::filesystem::path& path, const source::AdapterRegistry& registry) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read rule file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_rules_text(buffer.str(), path.string(), registry);
}

std::vector<RuleMatch> match_rules(std::string_view path, std::string_view language,
                                   const source::ParsedSource& parsed, const RuleSet& rules) {
  std::vector<RuleMatch> out;
  const std::string_view text = parsed.text();
  for (const RuleSet::Compiled* c : rules.for_language(language)) {
    if (c->rule.kind == RuleKind::Pattern) {
      for (const auto& hit : parsed.find(*c->pattern)) out.push_back(to_match(c->rule.id, path, hit.range));
    } else {
      boost::cregex_iterator it(text.data(), text.data() + text.size(), c->regex);
      for (; it != boost::cregex_iterator(); ++it) {
        const auto& m = (*it)[0];
        if (m.length() == 0) continue;
        const auto begin = static_cast<std::uint32_t>(m.first - text.data());
        const auto end = static_cast<std::uint32_t>(m.second - text.data());
        out.push_back(to_match(c->rule.id, path, {parsed.position(begin), parsed.position(end)}));
      }
    }
  }
  std::sort(out.begin(), out.end(), match_before);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<RuleMatch> match_snapshot(const source::ParsedSnapshot& snapshot, const RuleSet& rules,
                                      unsigned threads) {
  std::vector<std::vector<RuleMatch>> per_file(snapshot.files.size());
  parallel_for(snapshot.files.size(), threads, [&](std::size_t i) {
    const auto& f = snapshot.files[i];
    per_file[i] = match_rules(f.record.path, f.record.language, *f.parsed, rules);
  });
  std::vector<RuleMatch> out;
  for (auto& part : per_file) std::move(part.begin(), part.end(), std::back_inserter(out));
  std::sort(out.begin(), out.end(), match_before);
  return out;
}

}  // namespace slopscope::verbosity
