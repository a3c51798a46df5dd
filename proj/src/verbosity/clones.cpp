// SPDX-License-Identifier: Apache-2.0
#include "slopscope/verbosity/clones.hpp"

#include <algorithm>
#include <limits>
#include <span>
#include <string_view>
#include <unordered_map>

#include "slopscope/common/parallel.hpp"

namespace slopscope::verbosity {
namespace {

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

struct Occurrence {
  std::uint32_t file;
  std::uint32_t pos;
};

struct WindowKey {
  std::span<const std::uint32_t> ids;
  bool operator==(const WindowKey& o) const { return std::equal(ids.begin(), ids.end(), o.ids.begin(), o.ids.end()); }
};

struct WindowHash {
  std::size_t operator()(const WindowKey& k) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (std::uint32_t id : k.ids) {
      h ^= id + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h *= 0xff51afd7ed558ccdULL;
    }
    return static_cast<std::size_t>(h ^ (h >> 33));
  }
};

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<CloneRegion> detect_clones(const std::vector<CloneInput>& files, std::uint32_t min_window) {
  const std::uint32_t w = std::max<std::uint32_t>(min_window, 1);

  // Intern normalized lines.
  std::unordered_map<std::string_view, std::uint32_t> intern;
  std::vector<std::vector<std::uint32_t>> seq(files.size());
  for (std::size_t f = 0; f < files.size(); ++f) {
    seq[f].reserve(files[f].lines.size());
    for (const auto& line : files[f].lines) {
      auto [it, _] = intern.try_emplace(line.text, static_cast<std::uint32_t>(intern.size()));
      seq[f].push_back(it->second);
    }
  }

  // Group windows by content.
  std::unordered_map<WindowKey, std::uint32_t, WindowHash> index;
  std::vector<std::vector<Occurrence>> groups;
  std::vector<std::vector<std::uint32_t>> group_at(files.size());
  for (std::size_t f = 0; f < files.size(); ++f) {
    const auto& s = seq[f];
    if (s.size() < w) continue;
    group_at[f].assign(s.size() - w + 1, kNone);
    for (std::uint32_t p = 0; p + w <= s.size(); ++p) {
      const WindowKey key{std::span<const std::uint32_t>(s.data() + p, w)};
      auto [it, inserted] = index.try_emplace(key, static_cast<std::uint32_t>(groups.size()));
      if (inserted) groups.emplace_back();
      groups[it->second].push_back({static_cast<std::uint32_t>(f), p});
      group_at[f][p] = it->second;
    }
  }
  auto duplicated = [&](std::uint32_t g) { return g != kNone && groups[g].size() >= 2; };

  // Link each duplicated window group to the group whose occurrences sit
  // exactly one line earlier, when that correspondence is one-to-one.
  std::vector<std::uint32_t> pred(groups.size(), kNone);
  std::vector<std::uint32_t> succ(groups.size(), kNone);
  for (std::uint32_t g = 0; g < groups.size(); ++g) {
    if (!duplicated(g)) continue;
    const Occurrence first = groups[g].front();
    if (first.pos == 0) continue;
    const std::uint32_t prev = group_at[first.file][first.pos - 1];
    if (prev == g || !duplicated(prev) || groups[prev].size() != groups[g].size()) continue;
    const bool shifted = std::all_of(groups[g].begin(), groups[g].end(), [&](const Occurrence& o) {
      return o.pos > 0 && group_at[o.file][o.pos - 1] == prev;
    });
    if (!shifted) continue;
    pred[g] = prev;
    succ[prev] = g;
  }

  struct Class {
    std::vector<CloneRegion> regions;
  };
  std::vector<Class> classes;
  for (std::uint32_t g = 0; g < groups.size(); ++g) {
    if (!duplicated(g) || pred[g] != kNone) continue;
    std::uint32_t chain = 1;
    for (std::uint32_t t = succ[g]; t != kNone; t = succ[t]) ++chain;
    const std::uint32_t length = chain + w - 1;
    Class cls;
    for (const Occurrence& o : groups[g]) {
      const auto& lines = files[o.file].lines;
      CloneRegion r;
      r.file = files[o.file].path;
      r.first_index = o.pos;
      r.length = length;
      r.span = {lines[o.pos].first_line, lines[o.pos + length - 1].last_line};
      for (std::uint32_t i = 0; i < length; ++i) r.span.end_line = std::max(r.span.end_line, lines[o.pos + i].last_line);
      cls.regions.push_back(std::move(r));
    }
    const Occurrence o = groups[g].front();
    std::uint64_t fp = 0xcbf29ce484222325ULL;
    for (std::uint32_t i = 0; i < length; ++i) {
      fp = fnv1a64(files[o.file].lines[o.pos + i].text, fp);
      fp = fnv1a64("\n", fp);
    }
    for (auto& r : cls.regions) r.fingerprint = fp;
    auto region_before = [](const CloneRegion& a, const CloneRegion& b) {
      if (a.file != b.file) return a.file < b.file;
      if (a.span != b.span) return a.span < b.span;
      return a.first_index < b.first_index;
    };
    std::sort(cls.regions.begin(), cls.regions.end(), region_before);
    classes.push_back(std::move(cls));
  }

  std::sort(classes.begin(), classes.end(), [](const Class& a, const Class& b) {
    const CloneRegion& x = a.regions.front();
    const CloneRegion& y = b.regions.front();
    if (x.file != y.file) return x.file < y.file;
    if (x.span != y.span) return x.span < y.span;
    if (x.first_index != y.first_index) return x.first_index < y.first_index;
    return x.length < y.length;
  });
  std::vector<CloneRegion> out;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    for (auto& r : classes[c].regions) {
      r.clone_class_id = static_cast<std::uint32_t>(c + 1);
      out.push_back(std::move(r));
    }
  }
  std::sort(out.begin(), out.end(), [](const CloneRegion& a, const CloneRegion& b) {
    if (a.file != b.file) return a.file < b.file;
    if (a.span.start_line != b.span.start_line) return a.span.start_line < b.span.start_line;
    if (a.clone_class_id != b.clone_class_id) return a.clone_class_id < b.clone_class_id;
    return a.first_index < b.first_index;
  });
  return out;
}

std::vector<CloneRegion> detect_clones(const source::ParsedSnapshot& snapshot, std::uint32_t min_window,
                                       bool normalize, unsigned threads) {
  std::vector<CloneInput> inputs(snapshot.files.size());
  parallel_for(snapshot.files.size(), threads, [&](std::size_t i) {
    inputs[i].path = snapshot.files[i].record.path;
    inputs[i].lines = snapshot.files[i].parsed->normalized_lines(normalize);
  });
  return detect_clones(inputs, min_window);
}

}  // namespace slopscope::verbosity
