// SPDX-License-Identifier: Apache-2.0
#include "slopscope/trajectory/measure.hpp"

namespace slopscope::trajectory {

SnapshotMeasurement measure_snapshot(const source::ParsedSnapshot& snapshot, const MeasureConfig& config) {
  SnapshotMeasurement m;
  m.inventory = snapshot.inventory();
  m.erosion = erosion::erosion_score(m.inventory, config.erosion);
  if (config.rules != nullptr) m.matches = verbosity::match_snapshot(snapshot, *config.rules, config.scan.threads);
  m.clones = verbosity::detect_clones(snapshot, config.min_window, config.normalize_clones, config.scan.threads);
  m.lines = verbosity::file_lines(snapshot);
  m.verbosity = verbosity::verbosity_score(m.lines, m.matches, m.clones);
  return m;
}

SnapshotMeasurement measure_tree(const std::filesystem::path& root, const MeasureConfig& config,
                                 const source::AdapterRegistry& registry) {
  source::validate(config.scan, registry);
  std::vector<source::SkippedFile> unreadable;
  auto blobs = source::read_tree(root, config.scan, registry, &unreadable);
  source::ParsedSnapshot snapshot = source::parse_snapshot(std::move(blobs), config.scan, registry);
  snapshot.skipped.insert(snapshot.skipped.end(), unreadable.begin(), unreadable.end());
  SnapshotMeasurement m = measure_snapshot(snapshot, config);
  return m;
}

CheckpointMetrics to_checkpoint(const SnapshotMeasurement& m) {
  CheckpointMetrics c;
  c.erosion = m.erosion;
  c.verbosity = m.verbosity;
  c.loc = m.verbosity.loc;
  c.high_cc_count = m.erosion.high_cc_count;
  c.max_cc = m.erosion.max_cc;
  c.files = static_cast<std::uint32_t>(m.inventory.files.size());
  c.callables = static_cast<std::uint32_t>(m.inventory.callables.size());
  c.skipped = static_cast<std::uint32_t>(m.inventory.skipped.size());
  return c;
}

}  // namespace slopscope::trajectory
