// SPDX-License-Identifier: Apache-2.0
#include "slopscope/report/report.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <map>

#include "slopscope/verbosity/clones.hpp"

#ifndef SLOPSCOPE_VERSION
#define SLOPSCOPE_VERSION "0.0.0"
#endif

namespace slopscope::report {
namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json trend_json(const trajectory::MetricTrend& t) {
  return Json{{"first", t.first},
              {"last", t.last},
              {"slope", t.slope},
              {"rising", t.rising},
              {"growth_pct", optional_number(t.growth_pct)}};
}

Json moments_json(const trajectory::Moments& m) { return Json{{"n", m.n}, {"mean", m.mean}, {"sd", m.sd}}; }

Json hotspot_json(const erosion::Hotspot& h) {
  return Json{{"qualified_name", h.callable.qualified_name},
              {"file", h.callable.file},
              {"start_line", h.callable.span.start_line},
              {"end_line", h.callable.span.end_line},
              {"cc", h.callable.cc},
              {"sloc", h.callable.sloc},
              {"mass", h.mass}};
}

// CSV ------------------------------------------------------------------------

std::string csv_cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  if (v.is_number_float()) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v.get<double>());
    return ec == std::errc() ? std::string(buf, end) : v.dump();
  }
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

std::string csv_row(const std::vector<Json>& cells) {
  std::string row;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) row += ',';
    row += csv_cell(cells[i]);
  }
  return row + "\n";
}

std::string csv_header(std::initializer_list<std::string_view> names) {
  std::string row;
  for (auto n : names) {
    if (!row.empty()) row += ',';
    row += n;
  }
  return row + "\n";
}

}  // namespace

std::string_view tool_version() { return SLOPSCOPE_VERSION; }

std::string config_digest(const Json& config) {
  return "fnv1a64:" + hex64(verbosity::fnv1a64(config.dump()));
}

Json envelope(std::string_view kind, const Json& config, Json payload, bool deterministic) {
  Json doc{{"tool_version", std::string(tool_version())},
           {"config_digest", config_digest(config)},
           {"kind", std::string(kind)},
           {"payload", std::move(payload)}};
  if (!deterministic) {
    const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
    doc["created_at"] = trajectory::format_instant(now.time_since_epoch().count());
  }
  return doc;
}

std::string serialize(const Json& document) { return document.dump(2) + "\n"; }

Json to_json(const erosion::ErosionReport& r, const erosion::ErosionParams& params) {
  Json hotspots = Json::array();
  for (const auto& h : r.hotspots) hotspots.push_back(hotspot_json(h));
  return Json{{"score", r.score},
              {"total_mass", r.total_mass},
              {"high_cc_mass", r.high_cc_mass},
              {"high_cc_count", r.high_cc_count},
              {"max_cc", r.max_cc},
              {"cc_cutoff", params.cc_cutoff},
              {"size_exponent", params.size_exponent},
              {"hotspots", std::move(hotspots)}};
}

Json to_json(const verbosity::VerbosityBreakdown& b) {
  return Json{{"score", b.score},
              {"flagged_lines", b.flagged_lines},
              {"clone_lines", b.clone_lines},
              {"union_lines", b.union_lines},
              {"loc", b.loc},
              {"violation_density", b.violation_density},
              {"clone_ratio", b.clone_ratio}};
}

Json to_json(const verbosity::RuleMatch& m, const verbosity::RuleSet* rules) {
  Json j{{"rule_id", m.rule_id},
         {"file", m.file},
         {"start_line", m.span.start.line},
         {"start_col", m.span.start.col},
         {"end_line", m.span.end.line},
         {"end_col", m.span.end.col},
         {"first_line", m.first_line},
         {"last_line", m.last_line}};
  if (rules != nullptr) {
    if (const verbosity::QualityRule* rule = rules->find(m.rule_id)) {
      j["category"] = rule->category;
      j["message"] = rule->message;
    }
  }
  return j;
}

Json to_json(const verbosity::CloneRegion& r) {
  return Json{{"clone_class_id", r.clone_class_id},
              {"file", r.file},
              {"start_line", r.span.start_line},
              {"end_line", r.span.end_line},
              {"normalized_lines", r.length},
              {"fingerprint", hex64(r.fingerprint)}};
}

Json to_json(const trajectory::CheckpointMetrics& c) {
  Json j{{"index", c.index},
         {"label", c.label},
         {"timestamp", c.timestamp ? Json(trajectory::format_instant(*c.timestamp)) : Json(nullptr)},
         {"phase", std::string(trajectory::phase_name(c.phase))},
         {"present", c.present}};
  if (!c.present) {
    j["error"] = c.error;
    return j;
  }
  Json erosion{{"score", c.erosion.score},
               {"total_mass", c.erosion.total_mass},
               {"high_cc_mass", c.erosion.high_cc_mass},
               {"high_cc_count", c.erosion.high_cc_count},
               {"max_cc", c.erosion.max_cc}};
  j["erosion"] = std::move(erosion);
  j["verbosity"] = to_json(c.verbosity);
  j["loc"] = c.loc;
  j["high_cc_count"] = c.high_cc_count;
  j["max_cc"] = c.max_cc;
  j["files"] = c.files;
  j["callables"] = c.callables;
  j["skipped"] = c.skipped;
  return j;
}

Json to_json(const trajectory::TrajectorySummary& s) {
  return Json{{"n_checkpoints", s.n_checkpoints},
              {"erosion", trend_json(s.erosion)},
              {"verbosity", trend_json(s.verbosity)},
              {"missing_checkpoints", s.missing_checkpoints}};
}

Json to_json(const trajectory::EraShift& e) {
  auto metric = [](const std::optional<trajectory::EraMetric>& m) {
    if (!m) return Json(nullptr);
    return Json{{"pre_median", m->pre_median}, {"post_median", m->post_median}, {"shift", m->shift}};
  };
  return Json{{"cutoff_date", trajectory::format_date(e.cutoff)},
              {"n_pre", e.n_pre},
              {"n_post", e.n_post},
              {"eligible", e.eligible},
              {"erosion", metric(e.erosion)},
              {"verbosity", metric(e.verbosity)}};
}

Json to_json(const trajectory::GroupStats& g) {
  return Json{{"name", g.name},
              {"repos", g.repos},
              {"head_verbosity", moments_json(g.head_verbosity)},
              {"head_erosion", moments_json(g.head_erosion)},
              {"with_trajectory", g.with_trajectory},
              {"rising_verbosity_fraction", optional_number(g.rising_verbosity_fraction)},
              {"rising_erosion_fraction", optional_number(g.rising_erosion_fraction)},
              {"slope_verbosity_mean", optional_number(g.slope_verbosity_mean)},
              {"slope_verbosity_median", optional_number(g.slope_verbosity_median)},
              {"slope_erosion_mean", optional_number(g.slope_erosion_mean)},
              {"slope_erosion_median", optional_number(g.slope_erosion_median)},
              {"era_eligible", g.era_eligible},
              {"era_shift_verbosity_median", optional_number(g.era_shift_verbosity_median)},
              {"era_shift_erosion_median", optional_number(g.era_shift_erosion_median)},
              {"exceeds_reference_verbosity", optional_number(g.exceeds_reference_verbosity)},
              {"exceeds_reference_erosion", optional_number(g.exceeds_reference_erosion)}};
}

Json to_json(const std::vector<erosion::SensitivityRow>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) {
    out.push_back(Json{{"cc_cutoff", r.cc_cutoff},
                       {"size_exponent", r.size_exponent},
                       {"size_term", std::string(erosion::size_term_name(r.size_exponent))},
                       {"score", r.score}});
  }
  return out;
}

Json scan_payload(const trajectory::SnapshotMeasurement& m, const ScanContext& context) {
  const auto& inv = m.inventory;
  Json files = Json::array();
  std::size_t mi = 0, ci = 0, ki = 0;
  for (std::size_t i = 0; i < inv.files.size(); ++i) {
    const auto& f = inv.files[i];
    std::vector<verbosity::RuleMatch> matches;
    std::vector<verbosity::CloneRegion> clones;
    std::vector<source::CallableRecord> callables;
    while (mi < m.matches.size() && m.matches[mi].file < f.path) ++mi;
    while (mi < m.matches.size() && m.matches[mi].file == f.path) matches.push_back(m.matches[mi++]);
    while (ci < m.clones.size() && m.clones[ci].file < f.path) ++ci;
    while (ci < m.clones.size() && m.clones[ci].file == f.path) clones.push_back(m.clones[ci++]);
    while (ki < inv.callables.size() && inv.callables[ki].file < f.path) ++ki;
    while (ki < inv.callables.size() && inv.callables[ki].file == f.path) callables.push_back(inv.callables[ki++]);
    erosion::ErosionParams params = context.erosion;
    params.max_hotspots = 1;
    const erosion::ErosionReport e = erosion::erosion_score(callables, params);
    const verbosity::VerbosityBreakdown v = verbosity::verbosity_score({m.lines[i]}, matches, clones);
    files.push_back(Json{{"path", f.path},
                         {"language", f.language},
                         {"line_count", f.line_count},
                         {"loc", f.loc},
                         {"callables", callables.size()},
                         {"high_cc_count", e.high_cc_count},
                         {"max_cc", e.max_cc},
                         {"erosion", e.score},
                         {"flagged_lines", v.flagged_lines},
                         {"clone_lines", v.clone_lines},
                         {"union_lines", v.union_lines},
                         {"verbosity", v.score}});
  }
  Json skipped = Json::array();
  for (const auto& s : inv.skipped) skipped.push_back(Json{{"path", s.path}, {"reason", s.reason}});

  std::map<std::string, std::uint64_t> per_rule;
  if (context.rules != nullptr) {
    for (const auto& r : context.rules->rules()) per_rule[r.id] = 0;
  }
  for (const auto& match : m.matches) ++per_rule[match.rule_id];
  Json clones = Json::array();
  std::uint32_t classes = 0;
  for (const auto& c : m.clones) {
    clones.push_back(to_json(c));
    classes = std::max(classes, c.clone_class_id);
  }

  Json verbosity = to_json(m.verbosity);
  verbosity["rule_matches"] = m.matches.size();
  verbosity["rules_loaded"] = context.rules != nullptr ? context.rules->size() : 0;
  verbosity["matches_by_rule"] = per_rule;
  verbosity["clone_classes"] = classes;
  verbosity["clone_regions"] = std::move(clones);
  verbosity["min_window"] = context.min_window;
  verbosity["normalized_clones"] = context.normalize_clones;

  Json payload{{"summary",
                Json{{"files", inv.files.size()},
                     {"callables", inv.callables.size()},
                     {"skipped", inv.skipped.size()},
                     {"loc", m.verbosity.loc}}},
               {"files", std::move(files)},
               {"skipped", std::move(skipped)},
               {"erosion", to_json(m.erosion, context.erosion)},
               {"verbosity", std::move(verbosity)}};
  if (!context.root.empty()) payload["root"] = context.root;
  if (context.sweep) payload["sensitivity"] = to_json(erosion::erosion_sensitivity(inv));
  return payload;
}

Json history_payload(const trajectory::History& h, const HistoryContext& context) {
  Json checkpoints = Json::array();
  for (const auto& c : h.series) checkpoints.push_back(to_json(c));
  Json payload{{"max_commits", context.options.max_commits},
               {"seed", context.options.seed},
               {"cutoff_date", trajectory::format_date(context.options.era_cutoff)},
               {"eligible_commits", h.eligible_commits},
               {"checkpoints", std::move(checkpoints)},
               {"summary", h.summary ? to_json(*h.summary) : Json(nullptr)},
               {"era", h.era ? to_json(*h.era) : Json(nullptr)}};
  if (!context.repo.empty()) payload["repo"] = context.repo;
  return payload;
}

Json panel_payload(const std::vector<trajectory::RepoPanelEntry>& entries, const trajectory::PanelReport& report) {
  std::vector<const trajectory::RepoPanelEntry*> sorted;
  for (const auto& e : entries) sorted.push_back(&e);
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) { return a->repo_id < b->repo_id; });
  Json repos = Json::array();
  for (const auto* e : sorted) {
    Json r{{"repo_id", e->repo_id},
           {"stars", e->stars},
           {"tier", std::string(trajectory::tier_name(e->tier))},
           {"ok", e->ok}};
    if (!e->ok) {
      r["error"] = e->error;
    } else {
      r["head"] = to_json(e->head);
      r["checkpoints"] = e->history.series.size();
      r["eligible_commits"] = e->history.eligible_commits;
      r["summary"] = e->history.summary ? to_json(*e->history.summary) : Json(nullptr);
      r["era"] = e->history.era ? to_json(*e->history.era) : Json(nullptr);
    }
    repos.push_back(std::move(r));
  }
  Json tiers = Json::array();
  for (const auto& t : report.tiers) tiers.push_back(to_json(t));
  return Json{{"repos", std::move(repos)},
              {"tiers", std::move(tiers)},
              {"overall", to_json(report.overall)},
              {"reference_verbosity", optional_number(report.reference_verbosity)},
              {"reference_erosion", optional_number(report.reference_erosion)},
              {"failed_count", report.failed_count}};
}

std::string scan_csv(const Json& payload) {
  std::string out = csv_header({"path", "language", "line_count", "loc", "callables", "high_cc_count", "max_cc",
                                "erosion", "flagged_lines", "clone_lines", "union_lines", "verbosity"});
  std::uint64_t lines = 0;
  for (const auto& f : payload.at("files")) {
    lines += f.at("line_count").get<std::uint64_t>();
    out += csv_row({f.at("path"), f.at("language"), f.at("line_count"), f.at("loc"), f.at("callables"),
                    f.at("high_cc_count"), f.at("max_cc"), f.at("erosion"), f.at("flagged_lines"),
                    f.at("clone_lines"), f.at("union_lines"), f.at("verbosity")});
  }
  const Json& e = payload.at("erosion");
  const Json& v = payload.at("verbosity");
  out += csv_row({"TOTAL", "", lines, v.at("loc"), payload.at("summary").at("callables"), e.at("high_cc_count"),
                  e.at("max_cc"), e.at("score"), v.at("flagged_lines"), v.at("clone_lines"), v.at("union_lines"),
                  v.at("score")});
  return out;
}

std::string history_csv(const Json& payload) {
  std::string out = csv_header({"index", "label", "timestamp", "phase", "present", "loc", "files", "callables",
                                "high_cc_count", "max_cc", "erosion", "verbosity", "flagged_lines", "clone_lines",
                                "union_lines"});
  for (const auto& c : payload.at("checkpoints")) {
    if (!c.at("present").get<bool>()) {
      out += csv_row({c.at("index"), c.at("label"), c.at("timestamp"), c.at("phase"), false, nullptr, nullptr,
                      nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, nullptr});
      continue;
    }
    const Json& v = c.at("verbosity");
    out += csv_row({c.at("index"), c.at("label"), c.at("timestamp"), c.at("phase"), true, c.at("loc"),
                    c.at("files"), c.at("callables"), c.at("high_cc_count"), c.at("max_cc"),
                    c.at("erosion").at("score"), v.at("score"), v.at("flagged_lines"), v.at("clone_lines"),
                    v.at("union_lines")});
  }
  return out;
}

std::string panel_csv(const Json& payload) {
  std::string out = csv_header({"repo_id", "stars", "tier", "ok", "head_verbosity", "head_erosion", "checkpoints",
                                "rising_verbosity", "rising_erosion", "slope_verbosity", "slope_erosion",
                                "era_eligible", "era_shift_verbosity", "era_shift_erosion"});
  for (const auto& r : payload.at("repos")) {
    std::vector<Json> row = {r.at("repo_id"), r.at("stars"), r.at("tier"), r.at("ok")};
    if (!r.at("ok").get<bool>()) {
      row.resize(14, nullptr);
      out += csv_row(row);
      continue;
    }
    row.push_back(r.at("head").at("verbosity").at("score"));
    row.push_back(r.at("head").at("erosion").at("score"));
    row.push_back(r.at("checkpoints"));
    const Json& s = r.at("summary");
    if (s.is_null()) {
      row.insert(row.end(), 4, nullptr);
    } else {
      row.push_back(s.at("verbosity").at("rising"));
      row.push_back(s.at("erosion").at("rising"));
      row.push_back(s.at("verbosity").at("slope"));
      row.push_back(s.at("erosion").at("slope"));
    }
    const Json& era = r.at("era");
    const bool eligible = !era.is_null() && era.at("eligible").get<bool>();
    row.push_back(eligible);
    row.push_back(eligible ? era.at("verbosity").at("shift") : Json(nullptr));
    row.push_back(eligible ? era.at("erosion").at("shift") : Json(nullptr));
    out += csv_row(row);
  }
  return out;
}

std::string json_lines(const std::vector<Json>& records) {
  std::string out;
  for (const auto& r : records) out += r.dump() + "\n";
  return out;
}

}  // namespace slopscope::report
