// SPDX-License-Identifier: Apache-2.0
#include "slopscope/trajectory/trajectory.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "slopscope/common/error.hpp"

namespace slopscope::trajectory {
namespace {

// Order-independent sum: the same multiset always adds up the same way.
double stable_sum(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

double mean_of(const std::vector<double>& values) { return stable_sum(values) / static_cast<double>(values.size()); }

Moments moments(const std::vector<double>& values) {
  Moments m;
  m.n = static_cast<std::uint32_t>(values.size());
  if (values.empty()) return m;
  m.mean = mean_of(values);
  if (values.size() >= 2) {
    std::vector<double> sq;
    sq.reserve(values.size());
    for (double v : values) sq.push_back((v - m.mean) * (v - m.mean));
    m.sd = std::sqrt(stable_sum(std::move(sq)) / static_cast<double>(values.size() - 1));
  }
  return m;
}

MetricTrend trend(const std::vector<double>& x, const std::vector<double>& y) {
  MetricTrend t;
  t.first = y.front();
  t.last = y.back();
  t.slope = ols_slope(x, y);
  t.rising = t.last > t.first;
  if (y.size() == 1) {
    t.growth_pct = 0.0;
  } else if (t.first != 0.0) {
    t.growth_pct = (t.last - t.first) / t.first * 100.0;
  }
  return t;
}

std::optional<double> fraction(std::uint32_t count, std::uint32_t total) {
  if (total == 0) return std::nullopt;
  return static_cast<double>(count) / static_cast<double>(total);
}

std::optional<double> maybe_mean(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  return mean_of(v);
}

std::optional<double> maybe_median(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  return median(v);
}

GroupStats group_stats(std::string name, const std::vector<const RepoPanelEntry*>& entries,
                       std::optional<double> ref_verbosity, std::optional<double> ref_erosion) {
  GroupStats g;
  g.name = std::move(name);
  g.repos = static_cast<std::uint32_t>(entries.size());
  std::vector<double> head_v, head_e, slope_v, slope_e, shift_v, shift_e;
  std::uint32_t rising_v = 0, rising_e = 0, above_v = 0, above_e = 0;
  for (const RepoPanelEntry* e : entries) {
    head_v.push_back(e->head.verbosity.score);
    head_e.push_back(e->head.erosion.score);
    if (ref_verbosity && e->head.verbosity.score > *ref_verbosity) ++above_v;
    if (ref_erosion && e->head.erosion.score > *ref_erosion) ++above_e;
    if (const auto& s = e->history.summary) {
      ++g.with_trajectory;
      rising_v += s->verbosity.rising ? 1 : 0;
      rising_e += s->erosion.rising ? 1 : 0;
      slope_v.push_back(s->verbosity.slope);
      slope_e.push_back(s->erosion.slope);
    }
    if (const auto& era = e->history.era; era && era->eligible) {
      ++g.era_eligible;
      shift_v.push_back(era->verbosity->shift);
      shift_e.push_back(era->erosion->shift);
    }
  }
  g.head_verbosity = moments(head_v);
  g.head_erosion = moments(head_e);
  g.rising_verbosity_fraction = fraction(rising_v, g.with_trajectory);
  g.rising_erosion_fraction = fraction(rising_e, g.with_trajectory);
  g.slope_verbosity_mean = maybe_mean(slope_v);
  g.slope_verbosity_median = maybe_median(slope_v);
  g.slope_erosion_mean = maybe_mean(slope_e);
  g.slope_erosion_median = maybe_median(slope_e);
  g.era_shift_verbosity_median = maybe_median(shift_v);
  g.era_shift_erosion_median = maybe_median(shift_e);
  if (ref_verbosity) g.exceeds_reference_verbosity = fraction(above_v, g.repos);
  if (ref_erosion) g.exceeds_reference_erosion = fraction(above_e, g.repos);
  return g;
}

}  // namespace

std::string_view phase_name(Phase phase) {
  switch (phase) {
    case Phase::Start:
      return "Start";
    case Phase::Early:
      return "Early";
    case Phase::Mid:
      return "Mid";
    case Phase::Late:
      return "Late";
    case Phase::Final:
      return "Final";
  }
  return "Start";
}

std::vector<Phase> bin_phases(std::size_t n) {
  if (n == 0) throw UsageError("cannot bin an empty trajectory");
  std::vector<Phase> phases(n, Phase::Start);
  if (n == 1) return phases;
  phases.back() = Phase::Final;
  const std::size_t m = n - 2;
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t tercile = m == 1 ? 1 : std::min<std::size_t>(2, 3 * j / m);
    phases[j + 1] = static_cast<Phase>(static_cast<std::uint8_t>(Phase::Early) + tercile);
  }
  return phases;
}

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() < 2) return 0.0;
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

double median(std::vector<double> values) {
  if (values.empty()) throw UsageError("median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t k = values.size() / 2;
  return values.size() % 2 == 1 ? values[k] : (values[k - 1] + values[k]) / 2.0;
}

TrajectorySummary trajectory_summary(const std::vector<CheckpointMetrics>& series) {
  TrajectorySummary s;
  std::vector<double> x, erosion, verbosity;
  for (const auto& c : series) {
    if (!c.present) {
      s.missing_checkpoints.push_back(c.index);
      continue;
    }
    x.push_back(static_cast<double>(c.index));
    erosion.push_back(c.erosion.score);
    verbosity.push_back(c.verbosity.score);
  }
  if (x.empty()) throw UsageError("trajectory has no measured checkpoint");
  s.n_checkpoints = static_cast<std::uint32_t>(x.size());
  s.erosion = trend(x, erosion);
  s.verbosity = trend(x, verbosity);
  return s;
}

EraShift era_split(const std::vector<CheckpointMetrics>& series, std::int64_t cutoff) {
  std::string missing;
  for (const auto& c : series) {
    if (c.present && !c.timestamp) missing += (missing.empty() ? "" : ", ") + std::to_string(c.index);
  }
  if (!missing.empty()) throw UsageError("checkpoints without a timestamp: " + missing);
  EraShift era;
  era.cutoff = cutoff;
  std::vector<double> pre_e, pre_v, post_e, post_v;
  for (const auto& c : series) {
    if (!c.present) continue;
    const bool pre = *c.timestamp < cutoff;
    (pre ? pre_e : post_e).push_back(c.erosion.score);
    (pre ? pre_v : post_v).push_back(c.verbosity.score);
  }
  era.n_pre = static_cast<std::uint32_t>(pre_e.size());
  era.n_post = static_cast<std::uint32_t>(post_e.size());
  era.eligible = era.n_pre >= 3 && era.n_post >= 3;
  if (era.eligible) {
    auto metric = [](const std::vector<double>& pre, const std::vector<double>& post) {
      EraMetric m;
      m.pre_median = median(pre);
      m.post_median = median(post);
      m.shift = m.post_median - m.pre_median;
      return m;
    };
    era.erosion = metric(pre_e, post_e);
    era.verbosity = metric(pre_v, post_v);
  }
  return era;
}

std::int64_t parse_date(std::string_view date) {
  int y = 0;
  unsigned m = 0, d = 0;
  char tail = 0;
  const std::string s(date);
  if (s.size() != 10 || std::sscanf(s.c_str(), "%4d-%2u-%2u%c", &y, &m, &d, &tail) != 3) {
    throw UsageError("invalid date '" + s + "', expected YYYY-MM-DD");
  }
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!ymd.ok()) throw UsageError("invalid date '" + s + "'");
  return std::chrono::sys_days{ymd}.time_since_epoch().count() * 86400LL;
}

std::string format_date(std::int64_t seconds) { return format_instant(seconds).substr(0, 10); }

std::string format_instant(std::int64_t seconds) {
  const auto tp = std::chrono::sys_seconds{std::chrono::seconds{seconds}};
  const auto days = std::chrono::floor<std::chrono::days>(tp);
  const std::chrono::year_month_day ymd{days};
  const std::chrono::hh_mm_ss hms{tp - days};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

SnapshotMeasurement measure_commit(const GitRepo& repo, const std::string& commit, const MeasureConfig& config,
                                   const source::AdapterRegistry& registry) {
  auto keep = [&](const std::string& path) { return source::is_candidate(path, config.scan, registry); };
  source::ParsedSnapshot snapshot =
      source::parse_snapshot(repo.snapshot(commit, keep), config.scan, registry);
  return measure_snapshot(snapshot, config);
}

History measure_history(const GitRepo& repo, const MeasureConfig& config, const source::AdapterRegistry& registry,
                        const HistoryOptions& options) {
  source::validate(config.scan, registry);
  auto is_source = [&](const std::string& path) { return source::is_candidate(path, config.scan, registry); };
  const std::vector<Commit> commits = repo.commits();
  History h;
  for (const auto& c : commits) {
    if (std::any_of(c.changed.begin(), c.changed.end(), is_source)) ++h.eligible_commits;
  }
  const std::vector<Commit> sample = sample_commits(commits, {options.max_commits, options.seed, is_source});
  for (std::size_t i = 0; i < sample.size(); ++i) {
    CheckpointMetrics cp;
    try {
      cp = to_checkpoint(measure_commit(repo, sample[i].hash, config, registry));
    } catch (const Error& e) {
      cp = CheckpointMetrics{};
      cp.present = false;
      cp.error = e.what();
    }
    cp.index = static_cast<std::uint32_t>(i);
    cp.label = sample[i].hash;
    cp.timestamp = sample[i].time;
    h.series.push_back(std::move(cp));
  }
  if (h.series.empty()) return h;
  const std::vector<Phase> phases = bin_phases(h.series.size());
  for (std::size_t i = 0; i < phases.size(); ++i) h.series[i].phase = phases[i];
  if (std::any_of(h.series.begin(), h.series.end(), [](const CheckpointMetrics& c) { return c.present; })) {
    h.summary = trajectory_summary(h.series);
    h.era = era_split(h.series, options.era_cutoff);
  }
  return h;
}

History measure_checkpoints(const std::vector<CheckpointDir>& checkpoints, const MeasureConfig& config,
                            const source::AdapterRegistry& registry, std::int64_t era_cutoff) {
  source::validate(config.scan, registry);
  History h;
  h.eligible_commits = static_cast<std::uint32_t>(checkpoints.size());
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    CheckpointMetrics cp;
    try {
      cp = to_checkpoint(measure_tree(checkpoints[i].path, config, registry));
    } catch (const Error& e) {
      cp = CheckpointMetrics{};
      cp.present = false;
      cp.error = e.what();
    }
    cp.index = static_cast<std::uint32_t>(i);
    cp.label = checkpoints[i].label.empty() ? checkpoints[i].path.filename().string() : checkpoints[i].label;
    cp.timestamp = checkpoints[i].timestamp;
    h.series.push_back(std::move(cp));
  }
  if (h.series.empty()) return h;
  const std::vector<Phase> phases = bin_phases(h.series.size());
  for (std::size_t i = 0; i < phases.size(); ++i) h.series[i].phase = phases[i];
  const auto present = [](const CheckpointMetrics& c) { return c.present; };
  if (std::any_of(h.series.begin(), h.series.end(), present)) {
    h.summary = trajectory_summary(h.series);
    const bool timed = std::all_of(h.series.begin(), h.series.end(),
                                   [](const CheckpointMetrics& c) { return !c.present || c.timestamp.has_value(); });
    if (timed) h.era = era_split(h.series, era_cutoff);
  }
  return h;
}

std::string_view tier_name(StarTier tier) {
  switch (tier) {
    case StarTier::Hobby:
      return "Hobby";
    case StarTier::Niche:
      return "Niche";
    case StarTier::Established:
      return "Established";
    case StarTier::Major:
      return "Major";
  }
  return "Hobby";
}

StarTier tier_for(std::uint64_t stars) {
  if (stars < 100) return StarTier::Hobby;
  if (stars < 1000) return StarTier::Niche;
  if (stars < 10000) return StarTier::Established;
  return StarTier::Major;
}

PanelReport panel_aggregate(const std::vector<RepoPanelEntry>& entries, std::optional<double> reference_verbosity,
                            std::optional<double> reference_erosion) {
  PanelReport report;
  report.reference_verbosity = reference_verbosity;
  report.reference_erosion = reference_erosion;
  std::vector<const RepoPanelEntry*> ok;
  for (const auto& e : entries) {
    if (e.ok) {
      ok.push_back(&e);
    } else {
      ++report.failed_count;
    }
  }
  for (StarTier tier : {StarTier::Hobby, StarTier::Niche, StarTier::Established, StarTier::Major}) {
    std::vector<const RepoPanelEntry*> members;
    for (const RepoPanelEntry* e : ok) {
      if (e->tier == tier) members.push_back(e);
    }
    if (!members.empty()) {
      report.tiers.push_back(group_stats(std::string(tier_name(tier)), members, reference_verbosity, reference_erosion));
    }
  }
  report.overall = group_stats("all", ok, reference_verbosity, reference_erosion);
  return report;
}

RepoPanelEntry measure_panel_repo(const PanelRepoConfig& repo, const MeasureConfig& config,
                                  const source::AdapterRegistry& registry, std::int64_t era_cutoff) {
  RepoPanelEntry entry;
  entry.repo_id = repo.repo_id;
  entry.stars = repo.stars;
  entry.tier = tier_for(repo.stars);
  try {
    const GitRepo git(repo.repo_path);
    const std::optional<Commit> head = git.head();
    if (!head) throw InputError("repository has no commits: " + repo.repo_path);
    entry.head = to_checkpoint(measure_commit(git, head->hash, config, registry));
    entry.head.label = head->hash;
    entry.head.timestamp = head->time;
    entry.head.phase = Phase::Final;
    entry.history = measure_history(git, config, registry, {repo.max_commits, repo.seed, era_cutoff});
  } catch (const Error& e) {
    entry.ok = false;
    entry.error = e.what();
  }
  return entry;
}

}  // namespace slopscope::trajectory
