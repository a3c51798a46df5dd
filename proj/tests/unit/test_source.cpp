// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <map>

#include "slopscope/common/error.hpp"
#include "slopscope/python/adapter.hpp"
#include "slopscope/source/scanner.hpp"
#include "slopscope/source/text.hpp"
#include "unit/helpers.hpp"

using namespace slopscope;
using slopscope::test::parse_python;

TEST_SUITE("source") {

TEST_CASE("physical line count ignores a trailing newline") {
  CHECK(source::physical_line_count("") == 0);
  CHECK(source::physical_line_count("a") == 1);
  CHECK(source::physical_line_count("a\n") == 1);
  CHECK(source::physical_line_count("a\n\n") == 2);
  CHECK(source::physical_line_count("a\r\nb\rc") == 3);
}

TEST_CASE("line index maps offsets to code point columns") {
  const std::string text = "ab\n\xc3\xa9x\n";
  source::LineIndex index(text);
  CHECK(index.position(0) == source::Position{1, 1});
  CHECK(index.position(3) == source::Position{2, 1});
  CHECK(index.position(5) == source::Position{2, 2});
  CHECK(index.line_of(4) == 2);
}

TEST_CASE("decoding") {
  std::string out;
  CHECK(source::decode_to_utf8("caf\xe9", "latin-1", out));
  CHECK(out == "caf\xc3\xa9");
  CHECK_FALSE(source::decode_to_utf8("caf\xe9", "utf-8", out));
  CHECK_FALSE(source::decode_to_utf8("\xc3\xa9", "ascii", out));
  CHECK(source::is_valid_utf8("\xe2\x82\xac"));
  CHECK_FALSE(source::is_valid_utf8("\xc0\xaf"));
  CHECK_FALSE(source::is_supported_encoding("ebcdic"));
}

TEST_CASE("line sets") {
  source::LineSet s(130);
  s.insert_range(60, 70);
  s.insert(130);
  s.insert_range(125, 400);
  CHECK(s.size() == 11 + 6);
  CHECK(s.count_in(1, 64) == 5);
  CHECK(s.contains(130));
  CHECK_FALSE(s.contains(131));
  CHECK_FALSE(s.contains(0));
  s.erase(60);
  CHECK(s.count_in(60, 60) == 0);
}

TEST_CASE("code lines exclude comments, blanks and blank docstring lines") {
  const auto parsed = parse_python(
      "# header\n"
      "\n"
      "def f(a):\n"
      "    \"\"\"Doc.\n"
      "\n"
      "    more\"\"\"\n"
      "    # note\n"
      "    return a  # trailing\n");
  const auto& code = parsed->code_lines();
  std::vector<std::uint32_t> lines;
  for (std::uint32_t i = 1; i <= code.line_count(); ++i) {
    if (code.contains(i)) lines.push_back(i);
  }
  CHECK(lines == std::vector<std::uint32_t>{3, 4, 6, 8});
}

TEST_CASE("callable spans start at def and count code lines") {
  const auto parsed = parse_python(
      "import functools\n"
      "\n"
      "@functools.cache\n"
      "def outer(x):\n"
      "    # comment\n"
      "\n"
      "    def inner(\n"
      "        y,\n"
      "    ):\n"
      "        return y\n"
      "    return inner(x)\n"
      "\n"
      "class A:\n"
      "    class B:\n"
      "        def m(self): return 1\n");
  const auto calls = parsed->callables("m.py");
  REQUIRE(calls.size() == 3);
  CHECK(calls[0].qualified_name == "outer");
  CHECK(calls[0].span == source::LineSpan{4, 11});
  CHECK(calls[0].sloc == 6);
  CHECK(calls[1].qualified_name == "outer.inner");
  CHECK(calls[1].span == source::LineSpan{7, 10});
  CHECK(calls[1].sloc == 4);
  CHECK(calls[2].qualified_name == "A.B.m");
  CHECK(calls[2].span == source::LineSpan{15, 15});
  CHECK(calls[2].sloc == 1);
  CHECK(calls[2].file == "m.py");
}

TEST_CASE("hand-counted complexity corpus") {
  const auto fixture = test::fixtures() / "cc_corpus";
  const auto parsed = parse_python(test::read_text(fixture / "corpus.py"));
  std::map<std::string, std::uint32_t> got;
  for (const auto& c : parsed->callables("corpus.py")) {
    CHECK(c.cc >= 1);
    CHECK(c.sloc >= 1);
    got[c.qualified_name] = c.cc;
  }
  std::istringstream manifest(test::read_text(fixture / "manifest.tsv"));
  std::string line;
  std::size_t entries = 0;
  while (std::getline(manifest, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto tab1 = line.find('\t');
    const auto tab2 = line.find('\t', tab1 + 1);
    const std::string name = line.substr(0, tab1);
    const auto want = static_cast<std::uint32_t>(std::stoul(line.substr(tab1 + 1, tab2 - tab1 - 1)));
    CAPTURE(name);
    REQUIRE(got.count(name) == 1);
    CHECK(got[name] == want);
    ++entries;
  }
  CHECK(entries >= 30);
  CHECK(entries == got.size());
}

TEST_CASE("syntax errors raise ParseError with a line") {
  CHECK_THROWS_AS(parse_python("def f(:\n    pass\n"), ParseError);
  try {
    parse_python("x = 1\nif x\n    y = 2\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("exclude globs") {
  CHECK(source::is_excluded("build/gen.py", {"build/*"}));
  CHECK(source::is_excluded("a/b/test_x.py", {"*/test_*.py"}));
  CHECK_FALSE(source::is_excluded("a/b/x.py", {"build/*"}));
  CHECK(source::is_excluded("x.py", {"?.py"}));
}

TEST_CASE("scan_tree") {
  test::TempDir dir;
  test::write_text(dir / "pkg/a.py", "def a(x):\n    if x:\n        return 1\n    return 2\n");
  test::write_text(dir / "pkg/b.py", "def b():\n    return [i for i in range(3)]\n");
  test::write_text(dir / "pkg/notes.txt", "not python\n");
  test::write_text(dir / "bad.py", "def broken(:\n");
  test::write_text(dir / "latin.py", "x = 'caf\xe9'\n");
  test::write_text(dir / "min.py", std::string(900, 'a') + " = 1\n");
  test::write_text(dir / "skip/c.py", "def c():\n    pass\n");
  source::ScanConfig config;
  config.exclude = {"skip/*"};
  config.threads = 2;

  const auto inv = source::scan_tree(dir.path(), config);

  SUBCASE("files, callables and skipped") {
    REQUIRE(inv.files.size() == 2);
    CHECK(inv.files[0].path == "pkg/a.py");
    CHECK(inv.files[0].loc == 4);
    CHECK(inv.files[1].path == "pkg/b.py");
    REQUIRE(inv.callables.size() == 2);
    CHECK(inv.callables[0].cc == 2);
    CHECK(inv.callables[1].cc == 2);
    REQUIRE(inv.skipped.size() == 3);
    CHECK(inv.skipped[0] == source::SkippedFile{"bad.py", "parse"});
    CHECK(inv.skipped[1] == source::SkippedFile{"latin.py", "decode"});
    CHECK(inv.skipped[2] == source::SkippedFile{"min.py", "minified"});
    CHECK(inv.total_loc() == 6);
  }

  SUBCASE("declared encoding") {
    config.encoding = "latin-1";
    const auto latin = source::scan_tree(dir.path(), config);
    CHECK(std::any_of(latin.files.begin(), latin.files.end(), [](const auto& f) { return f.path == "latin.py"; }));
  }

  SUBCASE("idempotent and thread-count independent") {
    config.threads = 1;
    CHECK(source::scan_tree(dir.path(), config) == inv);
  }

  SUBCASE("union of per-file scans") {
    std::vector<source::SourceInventory> parts;
    for (const char* name : {"pkg/b.py", "min.py", "pkg/a.py", "latin.py", "bad.py"}) {
      test::TempDir one;
      std::filesystem::create_directories((one / name).parent_path());
      std::filesystem::copy_file(dir / name, one / name);
      parts.push_back(source::scan_tree(one.path(), config));
    }
    CHECK(source::merge(parts) == inv);
    std::reverse(parts.begin(), parts.end());
    CHECK(source::merge(parts) == inv);
  }
}

TEST_CASE("scan_tree input errors") {
  CHECK_THROWS_AS(source::scan_tree("/nonexistent/slopscope", {}), InputError);
  source::ScanConfig bad;
  bad.languages = {"cobol"};
  CHECK_THROWS_AS(source::validate(bad, test::registry()), UsageError);
  bad = {};
  bad.encoding = "klingon";
  CHECK_THROWS_AS(source::validate(bad, test::registry()), UsageError);
}

TEST_CASE("normalized lines abstract identifiers and literals") {
  const auto parsed = parse_python("total = compute(3, 'x')  # c\nif total is None:\n    pass\n");
  const auto lines = parsed->normalized_lines(true);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0].text == "I = I ( L , L )");
  CHECK(lines[1].text == "if I is L :");
  CHECK(lines[2].text == "pass");
  const auto exact = parsed->normalized_lines(false);
  CHECK(exact[0].text == "total = compute ( 3 , 'x' )");
}

}  // TEST_SUITE
