// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <set>

#include "slopscope/common/error.hpp"
#include "slopscope/report/cli.hpp"
#include "slopscope/verbosity/rules.hpp"
#include "unit/helpers.hpp"

using namespace slopscope;
using verbosity::RuleSet;

namespace {

const RuleSet& starter() {
  static const RuleSet rules = verbosity::load_rules_text(report::starter_rules(), "starter", test::registry());
  return rules;
}

std::vector<verbosity::RuleMatch> run(const RuleSet& rules, const std::string& code) {
  const auto parsed = test::parse_python(code);
  return verbosity::match_rules("t.py", "python", *parsed, rules);
}

std::size_t hits(std::string_view id, const std::string& code) {
  return run(starter().only(id), code).size();
}

struct Sample {
  const char* id;
  const char* positive;
  const char* negative;
};

// One snippet the rule must flag and a near miss it must not.
const Sample kSamples[] = {
    {"identity-comprehension", "y = [v for v in vs]\n", "y = [v * 2 for v in vs]\n"},
    {"identity-set-comprehension", "y = {v for v in vs if v}\n", "y = {w for v in vs}\n"},
    {"compare-to-true", "if a == True:\n    pass\n", "if a is True:\n    pass\n"},
    {"compare-to-false", "b = a == False\n", "b = a != False\n"},
    {"compare-to-none", "b = a == None\n", "b = a is None\n"},
    {"bool-ternary", "b = True if a else False\n", "b = False if a else True\n"},
    {"if-return-bool", "def f(a):\n    if a:\n        return True\n    else:\n        return False\n",
     "def f(a):\n    if a:\n        return True\n    else:\n        return None\n"},
    {"if-return-bool-fallthrough", "def f(a):\n    if a > 1:\n        return True\n    return False\n",
     "def f(a):\n    if a > 1:\n        return False\n    return True\n"},
    {"redundant-or-ternary", "z = x if x else y\n", "z = x if w else y\n"},
    {"len-equals-zero", "e = len(items) == 0\n", "e = len(items) == 1\n"},
    {"len-greater-than-zero", "e = len(items) > 0\n", "e = len(items) >= 0\n"},
    {"isinstance-guard-raise", "def f(a):\n    if not isinstance(a, int):\n        raise TypeError(a)\n",
     "def f(a):\n    if isinstance(a, int):\n        raise TypeError(a)\n"},
    {"none-guard-return-none", "def f(a):\n    if a is None:\n        return None\n",
     "def f(a):\n    if a is None:\n        return 0\n"},
    {"swallow-all-exceptions", "try:\n    go()\nexcept:\n    pass\n", "try:\n    go()\nexcept OSError:\n    pass\n"},
    {"single-use-return-variable", "def f():\n    r = g()\n    return r\n", "def f():\n    r = g()\n    return s\n"},
    {"self-assignment", "x = x\n", "x = y\n"},
    {"trivial-wrapper-unary", "def f(a: int) -> int:\n    return g(a)\n", "def f(a):\n    return g(a, 1)\n"},
    {"trivial-wrapper-nullary", "def f():\n    return g()\n", "def f():\n    return g(1)\n"},
    {"trivial-wrapper-binary", "def f(a, b):\n    return g(a, b)\n", "def f(a, b):\n    return g(b, a)\n"},
    {"trivial-lambda-wrapper", "h = lambda v: g(v)\n", "h = lambda v: g(v + 1)\n"},
    {"explicit-return-none", "def f():\n    return None\n", "def f():\n    return\n"},
    {"empty-if-pass", "if a:\n    pass\n", "if a:\n    go()\n"},
    {"range-len-loop", "for i in range(len(xs)):\n    go(i)\n", "for i in range(n):\n    go(i)\n"},
    {"dict-get-none-default", "v = d.get(k, None)\n", "v = d.get(k, 0)\n"},
    {"membership-in-keys", "b = k in d.keys()\n", "b = k in d.values()\n"},
    {"negated-membership", "b = not k in d\n", "b = k not in d\n"},
    {"collapsible-nested-if", "if a:\n    if b:\n        go()\n", "if a:\n    go()\n    if b:\n        go()\n"},
    {"triple-nested-loop", "for a in x:\n    for b in y:\n        for c in z:\n            go()\n",
     "for a in x:\n    for b in y:\n        go()\n"},
    {"if-else-assignment", "if c:\n    v = 1\nelse:\n    v = 2\n", "if c:\n    v = 1\nelse:\n    w = 2\n"},
    {"elif-ladder", "if a:\n    f()\nelif b:\n    g()\nelif c:\n    h()\n", "if a:\n    f()\nelif b:\n    g()\n"},
    {"elif-ladder-with-else", "if a:\n    f()\nelif b:\n    g()\nelif c:\n    h()\nelse:\n    k()\n",
     "if a:\n    f()\nelif b:\n    g()\nelif c:\n    h()\n"},
    {"redundant-cast", "y = cast(int, x)\n", "y = int(x)\n"},
    {"type-ignore-comment", "x = f()  # Type: IGNORE\n", "x = f()  # type checked\n"},
};

}  // namespace

TEST_SUITE("rules") {

TEST_CASE("every starter rule has a positive and a negative sample") {
  std::set<std::string> covered;
  for (const auto& s : kSamples) {
    CAPTURE(s.id);
    REQUIRE(starter().find(s.id) != nullptr);
    CHECK(hits(s.id, s.positive) >= 1);
    CHECK(hits(s.id, s.negative) == 0);
    covered.insert(s.id);
  }
  CHECK(covered.size() == starter().size());
}

TEST_CASE("match lines and columns") {
  const auto ms = run(starter().only("compare-to-none"), "a = 1\nif  a == None:\n    pass\n");
  REQUIRE(ms.size() == 1);
  CHECK(ms[0].rule_id == "compare-to-none");
  CHECK(ms[0].file == "t.py");
  CHECK(ms[0].first_line == 2);
  CHECK(ms[0].last_line == 2);
  CHECK(ms[0].span.start == source::Position{2, 5});
  CHECK(ms[0].span.end == source::Position{2, 14});

  const auto block = run(starter().only("if-return-bool"),
                         "def f(a):\n    if a:\n        return True\n    else:\n        return False\n");
  REQUIRE(block.size() == 1);
  CHECK(block[0].first_line == 2);
  CHECK(block[0].last_line == 5);
}

TEST_CASE("repeated metavariables must bind identical code") {
  CHECK(hits("self-assignment", "a.b = a.b\n") == 1);
  CHECK(hits("self-assignment", "a.b = a.c\n") == 0);
  CHECK(hits("redundant-or-ternary", "z = f(x) if f(x) else y\n") == 1);
  CHECK(hits("redundant-or-ternary", "z = f(x) if f(y) else y\n") == 0);
}

TEST_CASE("matches are ordered and cover every rule") {
  const auto ms = run(starter(), "b = x == None\nc = y == True\nd = x == None and y == False\n");
  REQUIRE(ms.size() == 4);
  CHECK(ms[0].first_line == 1);
  CHECK(ms[1].rule_id == "compare-to-true");
  CHECK(ms[2].rule_id == "compare-to-none");
  CHECK(ms[3].rule_id == "compare-to-false");
}

TEST_CASE("rule file forms") {
  const char* seq = "- id: a\n  pattern: x == 1\n  category: c\n";
  const char* map = "rules:\n  - id: a\n    pattern: x == 1\n";
  const char* docs = "id: a\npattern: x == 1\n---\nid: b\nkind: regex\npattern: 'TODO'\n";
  CHECK(verbosity::parse_rules(seq).size() == 1);
  CHECK(verbosity::parse_rules(map).size() == 1);
  const auto two = verbosity::parse_rules(docs);
  REQUIRE(two.size() == 2);
  CHECK(two[1].kind == verbosity::RuleKind::Regex);
}

TEST_CASE("invalid rules are all reported") {
  const char* bad =
      "rules:\n"
      "  - id: a\n    pattern: 'def ('\n"
      "  - id: a\n    pattern: x\n"
      "  - id: c\n    kind: regex\n    pattern: '(['\n"
      "  - id: d\n    pattern: x\n    languages: [cobol]\n"
      "  - id: e\n    pattern: x\n    colour: red\n"
      "  - pattern: y\n";
  try {
    verbosity::load_rules_text(bad, "bad.yaml", test::registry());
    FAIL("expected RuleError");
  } catch (const RuleError& e) {
    const std::string what = e.what();
    CHECK(what.find("bad.yaml") != std::string::npos);
    CHECK(what.find("duplicate") != std::string::npos);
    CHECK(what.find("cobol") != std::string::npos);
    CHECK(what.find("colour") != std::string::npos);
    CHECK(what.find("'c'") != std::string::npos);
  }
  CHECK_THROWS_AS(verbosity::parse_rules("rules: [1, 2"), RuleError);
  CHECK_THROWS_AS(verbosity::load_rules("/nonexistent/rules.yaml"), InputError);
}

TEST_CASE("regex rules") {
  const auto rules = verbosity::load_rules_text(
      "- id: todo\n  kind: regex\n  pattern: 'todo'\n"
      "- id: todo-i\n  kind: regex\n  pattern: 'todo'\n  regex_flags: [i]\n"
      "- id: empty\n  kind: regex\n  pattern: 'x*'\n"
      "- id: span\n  kind: regex\n  pattern: 'a.b'\n  regex_flags: [s]\n",
      "r", test::registry());
  const auto ms = run(rules, "# TODO later\ny = 1  # todo\nz = '''a\nb'''\n");
  std::multiset<std::string> ids;
  for (const auto& m : ms) ids.insert(m.rule_id);
  CHECK(ids.count("todo") == 1);
  CHECK(ids.count("todo-i") == 2);
  CHECK(ids.count("empty") == 0);
  CHECK(ids.count("span") == 1);
  for (const auto& m : ms) {
    if (m.rule_id == "span") {
      CHECK(m.first_line == 3);
      CHECK(m.last_line == 4);
    }
  }
}

TEST_CASE("only() selects one rule") {
  CHECK(starter().only("self-assignment").size() == 1);
  CHECK_THROWS_AS(starter().only("no-such-rule"), UsageError);
}

}  // TEST_SUITE
