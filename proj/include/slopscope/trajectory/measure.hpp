// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "slopscope/erosion/erosion.hpp"
#include "slopscope/source/scanner.hpp"
#include "slopscope/verbosity/verbosity.hpp"

namespace slopscope::trajectory {

struct MeasureConfig {
  source::ScanConfig scan;
  erosion::ErosionParams erosion;
  const verbosity::RuleSet* rules = nullptr;  // null: no rule matching
  std::uint32_t min_window = 6;
  bool normalize_clones = true;
};

// Everything measured on one snapshot.
struct SnapshotMeasurement {
  source::SourceInventory inventory;
  erosion::ErosionReport erosion;
  verbosity::VerbosityBreakdown verbosity;
  std::vector<verbosity::RuleMatch> matches;
  std::vector<verbosity::CloneRegion> clones;
  std::vector<verbosity::FileLines> lines;  // code lines per file, same order as inventory.files
};

SnapshotMeasurement measure_snapshot(const source::ParsedSnapshot& snapshot, const MeasureConfig& config);

// Reads, parses and measures a directory. Throws InputError if it is not a
// readable directory.
SnapshotMeasurement measure_tree(const std::filesystem::path& root, const MeasureConfig& config,
                                 const source::AdapterRegistry& registry);

enum class Phase : std::uint8_t { Start, Early, Mid, Late, Final };

struct CheckpointMetrics {
  std::uint32_t index = 0;
  std::string label;                     // commit hash or checkpoint id
  std::optional<std::int64_t> timestamp;  // seconds since the Unix epoch, UTC
  bool present = true;                   // false: could not be measured
  std::string error;                     // why, when not present
  erosion::ErosionReport erosion;
  verbosity::VerbosityBreakdown verbosity;
  std::uint64_t loc = 0;
  std::uint32_t high_cc_count = 0;
  std::uint32_t max_cc = 0;
  std::uint32_t files = 0;
  std::uint32_t callables = 0;
  std::uint32_t skipped = 0;
  Phase phase = Phase::Start;
};

CheckpointMetrics to_checkpoint(const SnapshotMeasurement& m);

}  // namespace slopscope::trajectory
