// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "slopscope/source/scanner.hpp"
#include "slopscope/verbosity/clones.hpp"
#include "unit/helpers.hpp"

using namespace slopscope;
using verbosity::CloneInput;
using verbosity::CloneRegion;

namespace {

using LineKey = std::pair<std::string, std::uint32_t>;

// All-pairs window comparison: a line is a clone line iff some window
// covering it has identical content at another position.
std::set<LineKey> brute_force(const std::vector<CloneInput>& files, std::uint32_t w) {
  std::set<LineKey> out;
  for (std::size_t fa = 0; fa < files.size(); ++fa) {
    const auto& a = files[fa].lines;
    for (std::size_t i = 0; i + w <= a.size(); ++i) {
      bool dup = false;
      for (std::size_t fb = 0; fb < files.size() && !dup; ++fb) {
        const auto& b = files[fb].lines;
        for (std::size_t j = 0; j + w <= b.size() && !dup; ++j) {
          if (fa == fb && i == j) continue;
          bool same = true;
          for (std::uint32_t k = 0; k < w && same; ++k) same = a[i + k].text == b[j + k].text;
          dup = same;
        }
      }
      if (!dup) continue;
      for (std::uint32_t l = a[i].first_line; l <= a[i + w - 1].last_line; ++l) out.insert({files[fa].path, l});
    }
  }
  return out;
}

std::set<LineKey> region_lines(const std::vector<CloneRegion>& regions) {
  std::set<LineKey> out;
  for (const auto& r : regions) {
    for (std::uint32_t l = r.span.start_line; l <= r.span.end_line; ++l) out.insert({r.file, l});
  }
  return out;
}

std::vector<CloneInput> random_files(std::mt19937_64& rng) {
  static const char* alphabet[] = {"I = L", "return I", "if I :", "I ( I )", "for I in I :"};
  const std::size_t nfiles = 1 + rng() % 4;
  const std::size_t letters = 2 + rng() % 4;
  std::vector<CloneInput> files;
  for (std::size_t f = 0; f < nfiles; ++f) {
    CloneInput in;
    in.path = "f" + std::to_string(f) + ".py";
    const std::size_t n = rng() % 60;
    std::uint32_t line = 1;
    for (std::size_t i = 0; i < n; ++i) {
      line += static_cast<std::uint32_t>(rng() % 3 == 0);  // comment or blank gap
      const std::uint32_t extra = rng() % 7 == 0 ? 1 : 0;  // continuation line
      in.lines.push_back({line, line + extra, alphabet[rng() % letters]});
      line += 1 + extra;
    }
    files.push_back(std::move(in));
  }
  return files;
}

std::string region_text(const std::vector<CloneInput>& files, const CloneRegion& r) {
  for (const auto& f : files) {
    if (f.path != r.file) continue;
    std::string s;
    for (std::uint32_t k = 0; k < r.length; ++k) s += f.lines[r.first_index + k].text + "\n";
    return s;
  }
  return {};
}

}  // namespace

TEST_SUITE("clones") {

TEST_CASE("random streams match the all-pairs oracle") {
  std::mt19937_64 rng(42);
  for (int round = 0; round < 400; ++round) {
    const auto files = random_files(rng);
    const std::uint32_t w = 1 + rng() % 6;
    const auto regions = verbosity::detect_clones(files, w);
    CHECK(region_lines(regions) == brute_force(files, w));

    std::map<std::uint32_t, std::vector<const CloneRegion*>> classes;
    for (const auto& r : regions) classes[r.clone_class_id].push_back(&r);
    for (const auto& [id, members] : classes) {
      CHECK(members.size() >= 2);
      const std::string text = region_text(files, *members.front());
      for (const CloneRegion* r : members) {
        CHECK(r->length >= w);
        CHECK(region_text(files, *r) == text);
        CHECK(r->fingerprint == verbosity::fnv1a64(text));
      }
    }
    CHECK(std::is_sorted(regions.begin(), regions.end(), [](const CloneRegion& a, const CloneRegion& b) {
      return std::tie(a.file, a.span.start_line, a.clone_class_id) <
             std::tie(b.file, b.span.start_line, b.clone_class_id);
    }));
  }
}

TEST_CASE("symmetry: regions of a class see each other") {
  std::vector<CloneInput> files(2);
  files[0].path = "a.py";
  files[1].path = "b.py";
  for (std::uint32_t i = 0; i < 8; ++i) {
    files[0].lines.push_back({i + 1, i + 1, "x" + std::to_string(i)});
    files[1].lines.push_back({i + 3, i + 3, "x" + std::to_string(i)});
  }
  const auto regions = verbosity::detect_clones(files, 6);
  REQUIRE(regions.size() == 2);
  CHECK(regions[0].clone_class_id == regions[1].clone_class_id);
  CHECK(regions[0].span == source::LineSpan{1, 8});
  CHECK(regions[1].span == source::LineSpan{3, 10});
  CHECK(regions[0].length == 8);
}

TEST_CASE("source level: verbatim and renamed duplication") {
  const std::string body =
      "def load(path, mode):\n"
      "    handle = open(path, mode)\n"
      "    data = handle.read()\n"
      "    handle.close()\n"
      "    lines = data.split('\\n')\n"
      "    out = []\n"
      "    for line in lines:\n"
      "        if line.startswith('#'):\n"
      "            continue\n"
      "        out.append(line.strip())\n"
      "    total = len(out)\n"
      "    return out, total\n";
  std::string renamed = body;
  for (auto [from, to] : {std::pair{"handle", "fh"}, {"data", "blob"}, {"out", "kept"}, {"'#'", "'//'"}}) {
    for (std::size_t p = renamed.find(from); p != std::string::npos; p = renamed.find(from, p + 1)) {
      renamed.replace(p, std::string(from).size(), to);
    }
  }
  test::TempDir dir;
  test::write_text(dir / "a.py", "import os\n\n" + body);
  test::write_text(dir / "b.py", body);
  test::write_text(dir / "c.py", "x = 1\n" + renamed);
  test::write_text(dir / "d.py", "def other():\n    return 1\n");
  source::ScanConfig config;
  const auto snap = source::parse_snapshot(source::read_tree(dir.path(), config, test::registry()), config,
                                           test::registry());

  const auto typed = verbosity::detect_clones(snap, 6, true, 1);
  const auto lines = region_lines(typed);
  for (std::uint32_t l = 3; l <= 14; ++l) CHECK(lines.count({"a.py", l}) == 1);
  for (std::uint32_t l = 1; l <= 12; ++l) CHECK(lines.count({"b.py", l}) == 1);
  for (std::uint32_t l = 2; l <= 13; ++l) CHECK(lines.count({"c.py", l}) == 1);
  CHECK(lines.count({"a.py", 1}) == 0);
  CHECK(lines.count({"d.py", 1}) == 0);

  const auto exact = region_lines(verbosity::detect_clones(snap, 6, false, 1));
  CHECK(exact.count({"a.py", 3}) == 1);
  CHECK(exact.count({"b.py", 12}) == 1);
  CHECK(exact.count({"c.py", 2}) == 0);

  CHECK(verbosity::detect_clones(snap, 6, true, 4) == typed);
}

TEST_CASE("short streams and wide windows") {
  std::vector<CloneInput> files(1);
  files[0].path = "a.py";
  for (std::uint32_t i = 0; i < 5; ++i) files[0].lines.push_back({i + 1, i + 1, "same"});
  CHECK(verbosity::detect_clones(files, 6).empty());
  const auto regions = verbosity::detect_clones(files, 2);
  CHECK(region_lines(regions).size() == 5);
}

TEST_CASE("fnv1a64 reference values") {
  CHECK(verbosity::fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(verbosity::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(verbosity::fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

}  // TEST_SUITE
