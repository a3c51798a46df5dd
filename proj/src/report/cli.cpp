// SPDX-License-Identifier: Apache-2.0
#include "slopscope/report/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "slopscope/common/error.hpp"
#include "slopscope/report/config.hpp"
#include "slopscope/report/report.hpp"
#include "slopscope/source/text.hpp"

namespace slopscope::report {
namespace {

namespace fs = std::filesystem;

const std::vector<std::string> kTestGlobs = {"test_*.py", "*/test_*.py", "*_test.py", "tests/*", "*/tests/*",
                                             "test/*",    "*/test/*",    "conftest.py", "*/conftest.py"};

struct CommonOptions {
  std::string rules_path;
  bool no_rules = false;
  std::string config_path;
  std::string format = "json";
  std::string out_path;
  bool deterministic = false;
  unsigned threads = 0;
  std::uint32_t cc_cutoff = 10;
  double size_exponent = 0.5;
  std::uint32_t min_window = 6;
  bool exact_clones = false;
  std::vector<std::string> exclude;
  bool exclude_tests = false;
  std::vector<std::string> languages;
  std::string encoding = "utf-8";
  std::uint32_t minified_line_threshold = 500;

  CLI::Option* threads_opt = nullptr;
  CLI::Option* cc_cutoff_opt = nullptr;
  CLI::Option* size_exponent_opt = nullptr;
  CLI::Option* min_window_opt = nullptr;
  CLI::Option* exclude_opt = nullptr;
  CLI::Option* languages_opt = nullptr;
  CLI::Option* encoding_opt = nullptr;
  CLI::Option* minified_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_format) {
  cmd->add_option("--rules", o.rules_path, "Rule file (YAML); default $SLOPSCOPE_RULES, else the starter set");
  cmd->add_flag("--no-rules", o.no_rules, "Skip rule matching; verbosity counts clone lines only");
  cmd->add_option("--config", o.config_path, "Config file (JSON or YAML)");
  if (with_format) {
    cmd->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  }
  cmd->add_option("--out", o.out_path, "Write the report to this file instead of stdout");
  cmd->add_flag("--deterministic", o.deterministic, "Omit timestamps and absolute paths");
  o.threads_opt = cmd->add_option("--threads", o.threads, "Worker threads (0: all cores)");
  o.cc_cutoff_opt = cmd->add_option("--cc-cutoff", o.cc_cutoff, "Complexity above this is high-CC");
  o.size_exponent_opt =
      cmd->add_option("--size-exponent", o.size_exponent, "SLOC exponent in complexity mass (0, 0.5 or 1)");
  o.min_window_opt = cmd->add_option("--min-window", o.min_window, "Clone window in normalized lines");
  cmd->add_flag("--exact-clones", o.exact_clones, "Do not normalize identifiers and literals for clones");
  o.exclude_opt = cmd->add_option("--exclude", o.exclude, "Glob of relative paths to skip (repeatable)");
  cmd->add_flag("--exclude-tests", o.exclude_tests, "Skip common test-file locations");
  o.languages_opt = cmd->add_option("--language", o.languages, "Enabled language (repeatable)");
  o.encoding_opt = cmd->add_option("--encoding", o.encoding, "Source encoding");
  o.minified_opt = cmd->add_option("--minified-line-threshold", o.minified_line_threshold,
                                   "Skip files whose average line is longer than this");
}

struct Resolved {
  trajectory::MeasureConfig measure;
  std::optional<verbosity::RuleSet> rules;
  Json rules_digest = nullptr;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Resolved resolve(const CommonOptions& o, const source::AdapterRegistry& registry) {
  FileConfig file;
  if (!o.config_path.empty()) file = load_config(o.config_path);
  Resolved r;
  auto& scan = r.measure.scan;
  if (file.languages) scan.languages = *file.languages;
  if (file.encoding) scan.encoding = *file.encoding;
  if (file.exclude) scan.exclude = *file.exclude;
  if (file.minified_line_threshold) scan.minified_line_threshold = *file.minified_line_threshold;
  if (file.threads) scan.threads = *file.threads;
  if (file.cc_cutoff) r.measure.erosion.cc_cutoff = *file.cc_cutoff;
  if (file.size_exponent) r.measure.erosion.size_exponent = *file.size_exponent;
  if (file.min_window) r.measure.min_window = *file.min_window;

  if (o.languages_opt->count() > 0) scan.languages = o.languages;
  if (o.encoding_opt->count() > 0) scan.encoding = o.encoding;
  if (o.exclude_opt->count() > 0) scan.exclude = o.exclude;
  if (o.minified_opt->count() > 0) scan.minified_line_threshold = o.minified_line_threshold;
  if (o.threads_opt->count() > 0) scan.threads = o.threads;
  if (o.cc_cutoff_opt->count() > 0) r.measure.erosion.cc_cutoff = o.cc_cutoff;
  if (o.size_exponent_opt->count() > 0) r.measure.erosion.size_exponent = o.size_exponent;
  if (o.min_window_opt->count() > 0) r.measure.min_window = o.min_window;
  if (o.exclude_tests) scan.exclude.insert(scan.exclude.end(), kTestGlobs.begin(), kTestGlobs.end());
  r.measure.normalize_clones = !o.exact_clones;
  if (r.measure.min_window == 0) throw UsageError("min-window must be at least 1");
  erosion::validate(r.measure.erosion);
  source::validate(scan, registry);

  if (!o.no_rules) {
    std::string text;
    std::string origin;
    const char* env = std::getenv("SLOPSCOPE_RULES");
    if (!o.rules_path.empty()) {
      origin = o.rules_path;
    } else if (env != nullptr && *env != '\0') {
      origin = env;
    }
    if (origin.empty()) {
      text = std::string(starter_rules());
      origin = "<starter rules>";
    } else {
      text = read_file(origin);
    }
    r.rules = verbosity::load_rules_text(text, origin, registry);
    r.rules_digest = "fnv1a64:" + [&] {
      char buf[17];
      std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(verbosity::fnv1a64(text)));
      return std::string(buf);
    }();
  }
  r.measure.rules = r.rules ? &*r.rules : nullptr;
  return r;
}

Json config_json(std::string_view command, const Resolved& r) {
  const auto& scan = r.measure.scan;
  return Json{{"command", std::string(command)},
              {"languages", scan.languages},
              {"encoding", scan.encoding},
              {"exclude", scan.exclude},
              {"minified_line_threshold", scan.minified_line_threshold},
              {"cc_cutoff", r.measure.erosion.cc_cutoff},
              {"size_exponent", r.measure.erosion.size_exponent},
              {"min_window", r.measure.min_window},
              {"normalize_clones", r.measure.normalize_clones},
              {"rules", r.rules_digest}};
}

void emit(const CommonOptions& o, const std::string& text, std::ostream& out) {
  if (o.out_path.empty()) {
    out << text;
    out.flush();
    return;
  }
  std::ofstream file(o.out_path, std::ios::binary | std::ios::trunc);
  if (!file) throw InputError("cannot write " + o.out_path);
  file << text;
  if (!file.flush()) throw InputError("cannot write " + o.out_path);
}

std::string absolute_string(const fs::path& p) {
  std::error_code ec;
  fs::path abs = fs::weakly_canonical(fs::absolute(p, ec), ec);
  return abs.generic_string();
}

// ---- commands ---------------------------------------------------------------

struct ScanArgs {
  std::string root;
  std::string emit_matches;
  bool sweep = false;
};

int cmd_scan(const ScanArgs& a, const CommonOptions& o, std::ostream& out) {
  const auto registry = source::AdapterRegistry::builtin();
  Resolved r = resolve(o, registry);
  const trajectory::SnapshotMeasurement m = trajectory::measure_tree(a.root, r.measure, registry);
  ScanContext ctx;
  ctx.root = o.deterministic ? "" : absolute_string(a.root);
  ctx.rules = r.measure.rules;
  ctx.erosion = r.measure.erosion;
  ctx.min_window = r.measure.min_window;
  ctx.normalize_clones = r.measure.normalize_clones;
  ctx.sweep = a.sweep;
  Json config = config_json("scan", r);
  config["sweep"] = a.sweep;
  Json payload = scan_payload(m, ctx);
  if (!a.emit_matches.empty()) {
    std::vector<Json> records;
    records.reserve(m.matches.size());
    for (const auto& match : m.matches) records.push_back(to_json(match, ctx.rules));
    std::ofstream file(a.emit_matches, std::ios::binary | std::ios::trunc);
    if (!file) throw InputError("cannot write " + a.emit_matches);
    file << json_lines(records);
  }
  if (o.format == "csv") {
    emit(o, scan_csv(payload), out);
  } else {
    emit(o, serialize(envelope("scan", config, std::move(payload), o.deterministic)), out);
  }
  return kExitOk;
}

struct HistoryArgs {
  std::string repo;
  std::uint32_t max_commits = 30;
  std::uint64_t seed = 0;
  std::string cutoff_date = "2024-01-01";
};

int cmd_history(const HistoryArgs& a, const CommonOptions& o, std::ostream& out, std::ostream& err) {
  const auto registry = source::AdapterRegistry::builtin();
  Resolved r = resolve(o, registry);
  trajectory::HistoryOptions options;
  options.max_commits = a.max_commits;
  options.seed = a.seed;
  options.era_cutoff = trajectory::parse_date(a.cutoff_date);
  const trajectory::GitRepo repo(a.repo);
  const trajectory::History history = trajectory::measure_history(repo, r.measure, registry, options);
  if (history.series.empty()) err << "slopscope: warning: no source-modifying commits in " << a.repo << "\n";
  for (const auto& c : history.series) {
    if (!c.present) err << "slopscope: warning: checkpoint " << c.index << " (" << c.label << ") skipped: " << c.error << "\n";
  }
  HistoryContext ctx;
  ctx.repo = o.deterministic ? "" : absolute_string(a.repo);
  ctx.options = options;
  Json config = config_json("history", r);
  config["max_commits"] = options.max_commits;
  config["seed"] = options.seed;
  config["cutoff_date"] = trajectory::format_date(options.era_cutoff);
  Json payload = history_payload(history, ctx);
  if (o.format == "csv") {
    emit(o, history_csv(payload), out);
  } else {
    emit(o, serialize(envelope("history", config, std::move(payload), o.deterministic)), out);
  }
  return kExitOk;
}

struct PanelArgs {
  std::string config;
  std::optional<double> reference_verbosity;
  std::optional<double> reference_erosion;
  std::string cutoff_date = "2024-01-01";
};

int cmd_panel(const PanelArgs& a, const CommonOptions& o, std::ostream& out, std::ostream& err) {
  const auto registry = source::AdapterRegistry::builtin();
  Resolved r = resolve(o, registry);
  const std::int64_t cutoff = trajectory::parse_date(a.cutoff_date);
  const auto repos = load_panel_config(a.config);
  if (repos.empty()) throw UsageError("panel config lists no repositories");
  std::vector<trajectory::RepoPanelEntry> entries;
  for (const auto& repo : repos) {
    entries.push_back(trajectory::measure_panel_repo(repo, r.measure, registry, cutoff));
    if (!entries.back().ok) err << "slopscope: warning: " << repo.repo_id << ": " << entries.back().error << "\n";
  }
  const trajectory::PanelReport report = trajectory::panel_aggregate(entries, a.reference_verbosity, a.reference_erosion);
  Json config = config_json("panel", r);
  config["cutoff_date"] = trajectory::format_date(cutoff);
  config["reference_verbosity"] = a.reference_verbosity ? Json(*a.reference_verbosity) : Json(nullptr);
  config["reference_erosion"] = a.reference_erosion ? Json(*a.reference_erosion) : Json(nullptr);
  Json repo_configs = Json::array();
  for (const auto& repo : repos) {
    repo_configs.push_back(
        Json{{"repo_id", repo.repo_id}, {"stars", repo.stars}, {"max_commits", repo.max_commits}, {"seed", repo.seed}});
  }
  config["repos"] = std::move(repo_configs);
  Json payload = panel_payload(entries, report);
  if (o.format == "csv") {
    emit(o, panel_csv(payload), out);
  } else {
    emit(o, serialize(envelope("panel", config, std::move(payload), o.deterministic)), out);
  }
  return report.failed_count == entries.size() ? kExitInput : kExitOk;
}

int cmd_rules_list(const CommonOptions& o, std::ostream& out) {
  const auto registry = source::AdapterRegistry::builtin();
  CommonOptions opts = o;
  opts.no_rules = false;
  Resolved r = resolve(opts, registry);
  std::string text = "id\tkind\tcategory\tlanguages\n";
  for (const auto& rule : r.rules->rules()) {
    const auto langs = rule.languages.empty() ? registry.languages() : rule.languages;
    std::string joined;
    for (const auto& l : langs) joined += (joined.empty() ? "" : ",") + l;
    text += rule.id + "\t" + (rule.kind == verbosity::RuleKind::Pattern ? "pattern" : "regex") + "\t" + rule.category +
            "\t" + joined + "\n";
  }
  emit(o, text, out);
  return kExitOk;
}

int cmd_rules_test(const std::string& id, const std::string& file, const CommonOptions& o, std::ostream& out) {
  const auto registry = source::AdapterRegistry::builtin();
  CommonOptions opts = o;
  opts.no_rules = false;
  Resolved r = resolve(opts, registry);
  const verbosity::RuleSet one = r.rules->only(id);
  const verbosity::QualityRule& rule = one.rules().front();

  const fs::path path(file);
  const source::GrammarAdapter* adapter = registry.by_extension(path.extension().string());
  if (adapter == nullptr) {
    adapter = registry.by_language(rule.languages.empty() ? registry.languages().front() : rule.languages.front());
  }
  std::string text;
  if (!source::decode_to_utf8(read_file(path), r.measure.scan.encoding, text)) {
    throw InputError("cannot decode " + file + " as " + r.measure.scan.encoding);
  }
  std::unique_ptr<source::ParsedSource> parsed;
  try {
    parsed = adapter->parse(std::move(text));
  } catch (const ParseError& e) {
    throw InputError(file + ": " + e.what());
  }
  std::vector<Json> records;
  for (const auto& m : verbosity::match_rules(path.generic_string(), adapter->language(), *parsed, one)) {
    records.push_back(to_json(m, &one));
  }
  emit(o, json_lines(records), out);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Structural erosion and verbosity metrics for source trees and git histories", "slopscope"};
  app.set_version_flag("--version", std::string(tool_version()));
  app.require_subcommand(1);

  CommonOptions scan_opts, history_opts, panel_opts, rules_opts;

  ScanArgs scan_args;
  CLI::App* scan = app.add_subcommand("scan", "Measure one source tree");
  scan->add_option("root", scan_args.root, "Directory to scan")->required();
  scan->add_option("--emit-matches", scan_args.emit_matches, "Write rule matches as JSON Lines to this file");
  scan->add_flag("--sweep", scan_args.sweep, "Include the 3x3 erosion sensitivity table");
  add_common(scan, scan_opts, true);

  HistoryArgs history_args;
  CLI::App* history = app.add_subcommand("history", "Measure sampled commits of a git repository");
  history->add_option("repo", history_args.repo, "Repository path")->required();
  history->add_option("--max-commits", history_args.max_commits, "Commits to sample")->capture_default_str();
  history->add_option("--seed", history_args.seed, "Sampling seed")->capture_default_str();
  history->add_option("--cutoff-date", history_args.cutoff_date, "Era split date (YYYY-MM-DD, UTC)")
      ->capture_default_str();
  add_common(history, history_opts, true);

  PanelArgs panel_args;
  CLI::App* panel = app.add_subcommand("panel", "Aggregate metrics over a panel of repositories");
  panel->add_option("panel_config", panel_args.config, "Panel file (JSON or YAML)")->required();
  panel->add_option("--reference-mean-verbosity", panel_args.reference_verbosity,
                    "Report the fraction of repositories whose HEAD verbosity exceeds this");
  panel->add_option("--reference-mean-erosion", panel_args.reference_erosion,
                    "Report the fraction of repositories whose HEAD erosion exceeds this");
  panel->add_option("--cutoff-date", panel_args.cutoff_date, "Era split date (YYYY-MM-DD, UTC)")
      ->capture_default_str();
  add_common(panel, panel_opts, true);

  CLI::App* rules = app.add_subcommand("rules", "Inspect rule sets");
  rules->require_subcommand(1);
  CLI::App* rules_list = rules->add_subcommand("list", "List rules");
  std::string test_id, test_file;
  CLI::App* rules_test = rules->add_subcommand("test", "Run one rule on one file; matches as JSON Lines");
  rules_test->add_option("rule_id", test_id, "Rule id")->required();
  rules_test->add_option("file", test_file, "Source file")->required();
  for (CLI::App* cmd : {rules_list, rules_test}) add_common(cmd, rules_opts, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (scan->parsed()) return cmd_scan(scan_args, scan_opts, out);
    if (history->parsed()) return cmd_history(history_args, history_opts, out, err);
    if (panel->parsed()) return cmd_panel(panel_args, panel_opts, out, err);
    if (rules_list->parsed()) return cmd_rules_list(rules_opts, out);
    if (rules_test->parsed()) return cmd_rules_test(test_id, test_file, rules_opts, out);
  } catch (const UsageError& e) {
    err << "slopscope: error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InputError& e) {
    err << "slopscope: error: " << e.what() << "\n";
    return kExitInput;
  } catch (const RuleError& e) {
    err << "slopscope: error: " << e.what() << "\n";
    return kExitRules;
  } catch (const std::exception& e) {
    err << "slopscope: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace slopscope::report
