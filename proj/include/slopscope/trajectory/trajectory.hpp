// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "slopscope/trajectory/git.hpp"
#include "slopscope/trajectory/measure.hpp"

namespace slopscope::trajectory {

std::string_view phase_name(Phase phase);

// Start, then the interior checkpoints split into Early/Mid/Late terciles
// (interior j of m goes to tercile min(2, floor(3j/m)); a lone interior point
// is Mid), then Final. Throws UsageError for n = 0.
std::vector<Phase> bin_phases(std::size_t n);

// Least-squares slope of y against x. 0 for fewer than two points or
// constant x.
double ols_slope(const std::vector<double>& x, const std::vector<double>& y);

double median(std::vector<double> values);

struct MetricTrend {
  double first = 0.0;
  double last = 0.0;
  double slope = 0.0;                // per checkpoint index
  bool rising = false;               // last > first
  std::optional<double> growth_pct;  // nullopt when first is 0
};

struct TrajectorySummary {
  std::uint32_t n_checkpoints = 0;  // present ones
  MetricTrend erosion;
  MetricTrend verbosity;
  std::vector<std::uint32_t> missing_checkpoints;
};

// Fits over present checkpoints only, with x = checkpoint index. Throws
// UsageError when no checkpoint is present.
TrajectorySummary trajectory_summary(const std::vector<CheckpointMetrics>& series);

// 2024-01-01T00:00:00Z.
inline constexpr std::int64_t kDefaultEraCutoff = 1704067200;

struct EraMetric {
  double pre_median = 0.0;
  double post_median = 0.0;
  double shift = 0.0;  // post - pre
};

struct EraShift {
  std::int64_t cutoff = kDefaultEraCutoff;
  std::uint32_t n_pre = 0;   // strictly before the cutoff
  std::uint32_t n_post = 0;  // at or after
  bool eligible = false;     // n_pre >= 3 and n_post >= 3
  std::optional<EraMetric> erosion;
  std::optional<EraMetric> verbosity;
};

// Within-trajectory era comparison over present checkpoints. Throws
// UsageError naming the checkpoints without a timestamp.
EraShift era_split(const std::vector<CheckpointMetrics>& series, std::int64_t cutoff = kDefaultEraCutoff);

// "YYYY-MM-DD" (midnight UTC) to seconds since the epoch. Throws UsageError.
std::int64_t parse_date(std::string_view date);
std::string format_date(std::int64_t seconds);  // "YYYY-MM-DD"
std::string format_instant(std::int64_t seconds);  // "YYYY-MM-DDTHH:MM:SSZ"

struct HistoryOptions {
  std::uint32_t max_commits = 30;
  std::uint64_t seed = 0;
  std::int64_t era_cutoff = kDefaultEraCutoff;
};

struct History {
  std::vector<CheckpointMetrics> series;  // one per sampled commit, oldest first
  std::optional<TrajectorySummary> summary;
  std::optional<EraShift> era;
  std::uint32_t eligible_commits = 0;
};

// Samples source-modifying commits and measures each one's tree.
History measure_history(const GitRepo& repo, const MeasureConfig& config, const source::AdapterRegistry& registry,
                        const HistoryOptions& options);

// Measures a single commit's tree.
SnapshotMeasurement measure_commit(const GitRepo& repo, const std::string& commit, const MeasureConfig& config,
                                   const source::AdapterRegistry& registry);

// One materialized workspace state of an iterative run.
struct CheckpointDir {
  std::filesystem::path path;
  std::string label;                      // empty: the directory name
  std::optional<std::int64_t> timestamp;  // era split runs only when every present checkpoint has one
};

// Measures explicit checkpoint directories in the given order. A directory
// that cannot be read becomes a missing checkpoint.
History measure_checkpoints(const std::vector<CheckpointDir>& checkpoints, const MeasureConfig& config,
                            const source::AdapterRegistry& registry, std::int64_t era_cutoff = kDefaultEraCutoff);

enum class StarTier : std::uint8_t { Hobby, Niche, Established, Major };

std::string_view tier_name(StarTier tier);
// <100, 100-999, 1000-9999, >=10000.
StarTier tier_for(std::uint64_t stars);

struct RepoPanelEntry {
  std::string repo_id;
  std::uint64_t stars = 0;
  StarTier tier = StarTier::Hobby;
  bool ok = true;
  std::string error;  // when !ok
  CheckpointMetrics head;
  History history;
};

struct Moments {
  std::uint32_t n = 0;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation; 0 when n < 2
};

struct GroupStats {
  std::string name;  // tier name or "all"
  std::uint32_t repos = 0;
  Moments head_verbosity;
  Moments head_erosion;
  std::uint32_t with_trajectory = 0;
  std::optional<double> rising_verbosity_fraction;
  std::optional<double> rising_erosion_fraction;
  std::optional<double> slope_verbosity_mean;
  std::optional<double> slope_verbosity_median;
  std::optional<double> slope_erosion_mean;
  std::optional<double> slope_erosion_median;
  std::uint32_t era_eligible = 0;
  std::optional<double> era_shift_verbosity_median;
  std::optional<double> era_shift_erosion_median;
  std::optional<double> exceeds_reference_verbosity;  // fraction with HEAD value > reference
  std::optional<double> exceeds_reference_erosion;
};

struct PanelReport {
  std::vector<GroupStats> tiers;  // Hobby, Niche, Established, Major (empty tiers omitted)
  GroupStats overall;
  std::optional<double> reference_verbosity;
  std::optional<double> reference_erosion;
  std::uint32_t failed_count = 0;
};

// Aggregates successful entries; permutation-invariant in `entries`.
PanelReport panel_aggregate(const std::vector<RepoPanelEntry>& entries,
                            std::optional<double> reference_verbosity = std::nullopt,
                            std::optional<double> reference_erosion = std::nullopt);

struct PanelRepoConfig {
  std::string repo_path;
  std::string repo_id;
  std::uint64_t stars = 0;
  std::uint32_t max_commits = 30;
  std::uint64_t seed = 0;
};

// Measures one panel repository; failures are captured in the entry.
RepoPanelEntry measure_panel_repo(const PanelRepoConfig& repo, const MeasureConfig& config,
                                  const source::AdapterRegistry& registry, std::int64_t era_cutoff);

}  // namespace slopscope::trajectory
