// SPDX-License-Identifier: Apache-2.0
//
// Report documents. Every report is a JSON envelope
//   {config_digest, created_at?, kind, payload, tool_version}
// serialized canonically: keys sorted, two-space indent, trailing newline.
// CSV views are derived from the JSON payloads.
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "slopscope/erosion/erosion.hpp"
#include "slopscope/trajectory/trajectory.hpp"
#include "slopscope/verbosity/verbosity.hpp"

namespace slopscope::report {

using Json = nlohmann::json;

std::string_view tool_version();

// "fnv1a64:<16 hex digits>" over the compact canonical dump of `config`.
std::string config_digest(const Json& config);

// created_at is omitted when `deterministic`.
Json envelope(std::string_view kind, const Json& config, Json payload, bool deterministic);

std::string serialize(const Json& document);

Json to_json(const erosion::ErosionReport& report, const erosion::ErosionParams& params);
Json to_json(const verbosity::VerbosityBreakdown& breakdown);
Json to_json(const verbosity::RuleMatch& match, const verbosity::RuleSet* rules);
Json to_json(const verbosity::CloneRegion& region);
Json to_json(const trajectory::CheckpointMetrics& checkpoint);
Json to_json(const trajectory::TrajectorySummary& summary);
Json to_json(const trajectory::EraShift& era);
Json to_json(const trajectory::GroupStats& stats);
Json to_json(const std::vector<erosion::SensitivityRow>& rows);

struct ScanContext {
  std::string root;  // empty: omitted
  const verbosity::RuleSet* rules = nullptr;
  erosion::ErosionParams erosion;
  std::uint32_t min_window = 6;
  bool normalize_clones = true;
  bool sweep = false;
};

Json scan_payload(const trajectory::SnapshotMeasurement& m, const ScanContext& context);

struct HistoryContext {
  std::string repo;  // empty: omitted
  trajectory::HistoryOptions options;
};

Json history_payload(const trajectory::History& history, const HistoryContext& context);

Json panel_payload(const std::vector<trajectory::RepoPanelEntry>& entries, const trajectory::PanelReport& report);

// One row per file and a final TOTAL row.
std::string scan_csv(const Json& payload);
// One row per checkpoint.
std::string history_csv(const Json& payload);
// One row per repository.
std::string panel_csv(const Json& payload);

// One compact JSON object per line.
std::string json_lines(const std::vector<Json>& records);

}  // namespace slopscope::report
