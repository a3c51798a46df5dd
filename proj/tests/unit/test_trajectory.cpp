// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "slopscope/common/error.hpp"
#include "slopscope/trajectory/trajectory.hpp"
#include "unit/helpers.hpp"

using namespace slopscope;
using namespace slopscope::trajectory;

namespace {

CheckpointMetrics point(std::uint32_t index, double erosion, double verbosity,
                        std::optional<std::int64_t> ts = std::nullopt) {
  CheckpointMetrics c;
  c.index = index;
  c.label = "c" + std::to_string(index);
  c.timestamp = ts;
  c.erosion.score = erosion;
  c.verbosity.score = verbosity;
  return c;
}

RepoPanelEntry entry(std::string id, std::uint64_t stars, double v, double e, std::vector<double> vs = {}) {
  RepoPanelEntry r;
  r.repo_id = std::move(id);
  r.stars = stars;
  r.tier = tier_for(stars);
  r.head = point(0, e, v);
  for (std::size_t i = 0; i < vs.size(); ++i) {
    r.history.series.push_back(point(static_cast<std::uint32_t>(i), vs[i] / 2, vs[i], 1700000000 + i * 1000000));
  }
  if (!r.history.series.empty()) {
    r.history.summary = trajectory_summary(r.history.series);
    r.history.era = era_split(r.history.series);
  }
  return r;
}

}  // namespace

TEST_SUITE("trajectory") {

TEST_CASE("phase bins") {
  using P = Phase;
  CHECK(bin_phases(1) == std::vector{P::Start});
  CHECK(bin_phases(2) == std::vector{P::Start, P::Final});
  CHECK(bin_phases(3) == std::vector{P::Start, P::Mid, P::Final});
  CHECK(bin_phases(5) == std::vector{P::Start, P::Early, P::Mid, P::Late, P::Final});
  CHECK(bin_phases(8) == std::vector{P::Start, P::Early, P::Early, P::Mid, P::Mid, P::Late, P::Late, P::Final});
  CHECK_THROWS_AS(bin_phases(0), UsageError);
  for (std::size_t n = 2; n <= 60; ++n) {
    const auto b = bin_phases(n);
    CHECK(b.front() == P::Start);
    CHECK(b.back() == P::Final);
    CHECK(std::is_sorted(b.begin(), b.end()));
  }
  CHECK(phase_name(P::Late) == "Late");
}

TEST_CASE("ordinary least squares") {
  CHECK(ols_slope({0, 1, 2, 3}, {1, 3, 5, 7}) == doctest::Approx(2.0));
  CHECK(ols_slope({0}, {4}) == 0.0);
  CHECK(ols_slope({2, 2}, {1, 5}) == 0.0);
  // Hand-computed: x mean 1.5, y mean 1.5, Sxy = 2.5, Sxx = 5.
  CHECK(ols_slope({0, 1, 2, 3}, {1, 0, 2, 3}) == doctest::Approx(0.8));
  CHECK(median({3, 1, 2}) == 2.0);
  CHECK(median({4, 1, 2, 3}) == 2.5);
}

TEST_CASE("summary over linear series") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int round = 0; round < 200; ++round) {
    const double a = u(rng), d = u(rng) / 10;
    std::vector<CheckpointMetrics> s;
    const int n = 2 + rng() % 30;
    for (int i = 0; i < n; ++i) s.push_back(point(i, a + d * i, a - d * i));
    const auto t = trajectory_summary(s);
    CHECK(std::abs(t.erosion.slope - d) <= 1e-9);
    CHECK(std::abs(t.verbosity.slope + d) <= 1e-9);
    CHECK(t.erosion.rising == (s.back().erosion.score > s.front().erosion.score));
  }
}

TEST_CASE("rising is a strict endpoint comparison; growth needs a nonzero start") {
  auto t = trajectory_summary({point(0, 0.2, 0.0), point(1, 0.9, 0.5), point(2, 0.2, 0.5)});
  CHECK_FALSE(t.erosion.rising);
  CHECK(t.verbosity.rising);
  CHECK(t.erosion.growth_pct == 0.0);
  CHECK_FALSE(t.verbosity.growth_pct.has_value());
  t = trajectory_summary({point(0, 0.4, 0.1)});
  CHECK(t.n_checkpoints == 1);
  CHECK(t.erosion.slope == 0.0);
  CHECK_FALSE(t.erosion.rising);
}

TEST_CASE("documented trend examples") {
  auto series = [](std::vector<double> v) {
    std::vector<CheckpointMetrics> s;
    for (std::size_t i = 0; i < v.size(); ++i) s.push_back(point(static_cast<std::uint32_t>(i), 0.0, v[i]));
    return s;
  };
  CHECK(trajectory_summary(series({0.2, 0.3, 0.4})).verbosity.slope == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(trajectory_summary(series({0.10, 0.05, 0.12})).verbosity.rising);
  const auto flat = trajectory_summary(series({0.3, 0.3, 0.3, 0.3}));
  CHECK(flat.verbosity.slope == 0.0);
  CHECK_FALSE(flat.verbosity.rising);
  CHECK(flat.verbosity.growth_pct == 0.0);

  std::vector<CheckpointMetrics> era;
  for (int i = 0; i < 6; ++i) {
    era.push_back(point(i, 0.5, i < 3 ? 0.10 : 0.12, kDefaultEraCutoff + (i < 3 ? -86400 : 86400) * (i + 1)));
  }
  const auto shift = era_split(era);
  REQUIRE(shift.eligible);
  CHECK(shift.verbosity->shift == doctest::Approx(0.02).epsilon(1e-12));
  CHECK(shift.erosion->shift == 0.0);
  era.erase(era.begin());
  CHECK_FALSE(era_split(era).eligible);
}

TEST_CASE("missing checkpoints are excluded, not imputed") {
  std::vector<CheckpointMetrics> s{point(0, 0.1, 0.3), point(1, 0.2, 0.1), point(2, 0.5, 0.4), point(3, 0.3, 0.2)};
  const auto base = trajectory_summary(s);
  std::mt19937_64 rng(8);
  for (int round = 0; round < 50; ++round) {
    auto holes = s;
    auto gap = point(99, 7.0, 7.0);
    gap.present = false;
    holes.insert(holes.begin() + static_cast<long>(rng() % (holes.size() + 1)), gap);
    const auto t = trajectory_summary(holes);
    CHECK(t.erosion.slope == base.erosion.slope);
    CHECK(t.verbosity.first == base.verbosity.first);
    CHECK(t.verbosity.last == base.verbosity.last);
    CHECK(t.missing_checkpoints == std::vector<std::uint32_t>{99});
  }
  auto none = point(0, 0, 0);
  none.present = false;
  CHECK_THROWS_AS(trajectory_summary({none}), UsageError);
}

TEST_CASE("era split eligibility over random timestamps") {
  std::mt19937_64 rng(10000);
  const std::int64_t cutoff = kDefaultEraCutoff;
  for (int round = 0; round < 10000; ++round) {
    std::vector<CheckpointMetrics> s;
    const int n = 1 + rng() % 10;
    int pre = 0, post = 0;
    for (int i = 0; i < n; ++i) {
      const std::int64_t ts = cutoff - 5 + static_cast<std::int64_t>(rng() % 10);
      auto c = point(i, 0.1 * i, 0.05 * i, ts);
      c.present = rng() % 5 != 0;
      if (c.present) (ts < cutoff ? pre : post) += 1;
      s.push_back(c);
    }
    const auto era = era_split(s, cutoff);
    CHECK(era.n_pre == static_cast<std::uint32_t>(pre));
    CHECK(era.n_post == static_cast<std::uint32_t>(post));
    CHECK(era.eligible == (pre >= 3 && post >= 3));
    CHECK(era.erosion.has_value() == era.eligible);
  }
}

TEST_CASE("era medians and missing timestamps") {
  std::vector<CheckpointMetrics> s;
  const double v[] = {0.1, 0.3, 0.2, 0.6, 0.5, 0.9, 0.7};
  for (int i = 0; i < 7; ++i) s.push_back(point(i, v[i], v[i] * 2, kDefaultEraCutoff + (i - 3) * 86400));
  const auto era = era_split(s);
  REQUIRE(era.eligible);
  CHECK(era.n_pre == 3);
  CHECK(era.erosion->pre_median == 0.2);
  CHECK(era.erosion->post_median == doctest::Approx(0.65));
  CHECK(era.erosion->shift == doctest::Approx(0.45));
  s[2].timestamp.reset();
  try {
    era_split(s);
    FAIL("expected UsageError");
  } catch (const UsageError& e) {
    CHECK(std::string(e.what()).ends_with(": 2"));
  }
}

TEST_CASE("dates") {
  CHECK(parse_date("2024-01-01") == kDefaultEraCutoff);
  CHECK(parse_date("1970-01-01") == 0);
  CHECK(format_date(kDefaultEraCutoff) == "2024-01-01");
  CHECK(format_instant(kDefaultEraCutoff + 3661) == "2024-01-01T01:01:01Z");
  CHECK_THROWS_AS(parse_date("2024-13-01"), UsageError);
  CHECK_THROWS_AS(parse_date("yesterday"), UsageError);
}

TEST_CASE("star tiers") {
  CHECK(tier_for(0) == StarTier::Hobby);
  CHECK(tier_for(99) == StarTier::Hobby);
  CHECK(tier_for(100) == StarTier::Niche);
  CHECK(tier_for(9999) == StarTier::Established);
  CHECK(tier_for(10000) == StarTier::Major);
}

TEST_CASE("panel aggregation") {
  std::vector<RepoPanelEntry> entries{
      entry("a", 10, 0.2, 0.1, {0.1, 0.2, 0.3}), entry("b", 50, 0.4, 0.3, {0.5, 0.4}),
      entry("c", 5000, 0.6, 0.5), entry("d", 20000, 0.1, 0.9, {0.1, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7})};
  auto failed = entry("e", 10, 0, 0);
  failed.ok = false;
  entries.push_back(failed);

  const auto r = panel_aggregate(entries, 0.3, 0.4);
  CHECK(r.failed_count == 1);
  REQUIRE(r.tiers.size() == 3);
  CHECK(r.tiers[0].name == "Hobby");
  CHECK(r.tiers[0].repos == 2);
  CHECK(r.tiers[1].name == "Established");
  CHECK(r.overall.name == "all");
  CHECK(r.overall.repos == 4);
  CHECK(r.overall.head_verbosity.mean == doctest::Approx(0.325));
  // Sample sd of {0.2, 0.4, 0.6, 0.1}.
  CHECK(r.overall.head_verbosity.sd == doctest::Approx(std::sqrt(0.0491666666666667)));
  CHECK(r.tiers[1].head_verbosity.sd == 0.0);
  CHECK(r.overall.with_trajectory == 3);
  CHECK(*r.overall.rising_verbosity_fraction == doctest::Approx(2.0 / 3.0));
  CHECK(*r.overall.exceeds_reference_verbosity == 0.5);
  CHECK(*r.overall.exceeds_reference_erosion == 0.5);
  CHECK(r.overall.era_eligible == 1);

  std::mt19937_64 rng(1);
  for (int round = 0; round < 50; ++round) {
    auto shuffled = entries;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto p = panel_aggregate(shuffled, 0.3, 0.4);
    CHECK(p.overall.head_verbosity.mean == r.overall.head_verbosity.mean);
    CHECK(p.overall.head_verbosity.sd == r.overall.head_verbosity.sd);
    CHECK(p.overall.slope_verbosity_mean == r.overall.slope_verbosity_mean);
    CHECK(p.overall.slope_verbosity_median == r.overall.slope_verbosity_median);
    CHECK(p.tiers.size() == r.tiers.size());
  }
}

TEST_CASE("panel aggregates match an independent recomputation") {
  // Six repositories with hand-picked HEAD values and trajectories.
  struct Row {
    const char* id;
    std::uint64_t stars;
    double v, e;
    std::vector<double> series;
  };
  const std::vector<Row> rows{{"r1", 12, 0.30, 0.50, {0.2, 0.25, 0.3}},
                              {"r2", 40, 0.10, 0.20, {0.3, 0.2, 0.1}},
                              {"r3", 450, 0.50, 0.70, {0.1, 0.4}},
                              {"r4", 800, 0.45, 0.40, {}},
                              {"r5", 3000, 0.20, 0.90, {0.2, 0.2, 0.2, 0.2, 0.3, 0.4, 0.5}},
                              {"r6", 50000, 0.60, 0.10, {0.4}}};
  std::vector<RepoPanelEntry> entries;
  for (const auto& r : rows) entries.push_back(entry(r.id, r.stars, r.v, r.e, r.series));
  const auto report = panel_aggregate(entries, 0.44, 0.68);

  double mean = 0;
  for (const auto& r : rows) mean += r.v;
  mean /= 6;
  double ss = 0;
  for (const auto& r : rows) ss += (r.v - mean) * (r.v - mean);
  CHECK(report.overall.head_verbosity.mean == doctest::Approx(mean).epsilon(1e-12));
  CHECK(report.overall.head_verbosity.sd == doctest::Approx(std::sqrt(ss / 5)).epsilon(1e-12));

  // Slopes by closed form: mean of (x - xbar)(y - ybar) over mean of (x - xbar)^2.
  std::vector<double> slopes;
  int rising = 0, with = 0;
  for (const auto& r : rows) {
    if (r.series.empty()) continue;
    ++with;
    rising += r.series.back() > r.series.front() ? 1 : 0;
    const double n = static_cast<double>(r.series.size());
    double xb = (n - 1) / 2, yb = 0, sxy = 0, sxx = 0;
    for (double y : r.series) yb += y / n;
    for (std::size_t i = 0; i < r.series.size(); ++i) {
      sxy += (static_cast<double>(i) - xb) * (r.series[i] - yb);
      sxx += (static_cast<double>(i) - xb) * (static_cast<double>(i) - xb);
    }
    slopes.push_back(sxx == 0 ? 0.0 : sxy / sxx);
  }
  std::sort(slopes.begin(), slopes.end());
  double slope_mean = 0;
  for (double s : slopes) slope_mean += s / static_cast<double>(slopes.size());
  CHECK(report.overall.with_trajectory == static_cast<std::uint32_t>(with));
  CHECK(*report.overall.rising_verbosity_fraction == doctest::Approx(static_cast<double>(rising) / with));
  CHECK(*report.overall.slope_verbosity_mean == doctest::Approx(slope_mean).epsilon(1e-12));
  CHECK(*report.overall.slope_verbosity_median == doctest::Approx(slopes[2]).epsilon(1e-12));
  CHECK(*report.overall.exceeds_reference_verbosity == doctest::Approx(3.0 / 6.0));
  CHECK(*report.overall.exceeds_reference_erosion == doctest::Approx(2.0 / 6.0));
  REQUIRE(report.tiers.size() == 4);
  CHECK(report.tiers[0].repos == 2);
  CHECK(report.tiers[1].head_erosion.mean == doctest::Approx(0.55));
  CHECK(report.tiers[3].head_verbosity.sd == 0.0);

  const auto one = panel_aggregate({entries[0]});
  CHECK(one.overall.head_verbosity.mean == 0.30);
  CHECK(one.overall.head_verbosity.sd == 0.0);
  const auto two = panel_aggregate({entry("x", 1, 0.1, 0, {}), entry("y", 1, 0.3, 0, {})});
  CHECK(two.overall.head_verbosity.mean == doctest::Approx(0.2));
}

TEST_CASE("measured checkpoints") {
  test::TempDir dir;
  std::filesystem::create_directories(dir / "empty");
  test::write_text(dir / "one/f.py",
                   "def f(a, b, c):\n"
                   "    for x in a:\n"
                   "        if x and b or c:\n"
                   "            while b:\n"
                   "                b -= 1\n"
                   "        elif x:\n"
                   "            pass\n"
                   "    try:\n"
                   "        return [y for y in a if y if not y]\n"
                   "    except ValueError:\n"
                   "        return 1 if c else 2\n"
                   "    except KeyError:\n"
                   "        return None\n");
  MeasureConfig config;
  const auto empty = to_checkpoint(measure_tree(dir / "empty", config, test::registry()));
  CHECK(empty.erosion.score == 0.0);
  CHECK(empty.verbosity.score == 0.0);
  CHECK(empty.loc == 0);
  const auto one = measure_tree(dir / "one", config, test::registry());
  REQUIRE(one.inventory.callables.size() == 1);
  CHECK(one.inventory.callables[0].cc == 13);
  CHECK(one.erosion.score == 1.0);

  const auto h = measure_checkpoints({{dir / "empty", "", std::nullopt},
                                      {dir / "missing", "gone", std::nullopt},
                                      {dir / "one", "", std::nullopt}},
                                     config, test::registry());
  REQUIRE(h.series.size() == 3);
  CHECK(h.series[0].label == "empty");
  CHECK_FALSE(h.series[1].present);
  CHECK(h.series[1].label == "gone");
  CHECK(h.series[2].phase == Phase::Final);
  REQUIRE(h.summary.has_value());
  CHECK(h.summary->missing_checkpoints == std::vector<std::uint32_t>{1});
  CHECK(h.summary->erosion.rising);
  CHECK_FALSE(h.era.has_value());
}

}  // TEST_SUITE
