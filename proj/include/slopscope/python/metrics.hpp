// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "slopscope/python/syntax_tree.hpp"
#include "slopscope/source/adapter.hpp"
#include "slopscope/source/line_set.hpp"
#include "slopscope/source/model.hpp"

namespace slopscope::python {

// McCabe complexity of a FunctionDef: 1 + decision points in its body.
//
// Decision points: if/elif, conditional expression, for/while header
// (comprehension `for` clauses included), except clause, comprehension `if`
// filter, match arm beyond the first, and each `and`/`or` inside a condition
// (test of if/elif/while/ternary, comprehension filter, case guard).
// Lambdas are folded into the enclosing callable; nested def/class bodies are
// not counted.
std::uint32_t cyclomatic_complexity(const Node& callable);

// Lines that hold code: touched by a non-comment token and not whitespace.
// Docstrings are code; comments and blank lines are not.
source::LineSet code_lines(const SyntaxTree& tree);

// From the `def` line through the last line of the body. Decorators excluded.
source::LineSpan callable_span(const SyntaxTree& tree, const Node& callable);

// Code lines within the callable's span (signature line included).
std::uint32_t source_lines(const SyntaxTree& tree, const Node& callable, const source::LineSet& code);

// One record per named function, method or nested function, in source order.
std::vector<source::CallableRecord> enumerate_callables(const SyntaxTree& tree, const source::LineSet& code,
                                                        std::string_view path);

// Token-normalized lines for type-2 clone detection: identifiers become `I`,
// literals `L`, keywords and operators are kept verbatim. With `abstract`
// false every token keeps its own text.
std::vector<source::NormalizedLine> normalize_lines(const SyntaxTree& tree, bool abstract = true);

}  // namespace slopscope::python
