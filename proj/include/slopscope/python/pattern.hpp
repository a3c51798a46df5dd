// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string_view>
#include <vector>

#include "slopscope/python/syntax_tree.hpp"
#include "slopscope/source/adapter.hpp"

namespace slopscope::python {

// A structural pattern: Python code where `$NAME` binds one code element,
// `$NAME?` may also match nothing, repeated names must bind identical text
// (token-wise), and `$$` stands for a literal `$`.
//
// A pattern that is a single expression statement matches that expression
// anywhere. A single statement matches statements. Several statements match
// a contiguous run inside one block. A statement consisting only of a
// metavariable matches any single statement.
class StructuralPattern final : public source::CompiledPattern {
 public:
  // Throws ParseError when `pattern` is not valid Python with placeholders.
  explicit StructuralPattern(std::string_view pattern);

  std::vector<source::PatternHit> find(const SyntaxTree& tree) const;

  // Whether `pattern` matches exactly the node `candidate` of `tree`.
  bool matches(const SyntaxTree& tree, const Node& candidate) const;

 private:
  std::unique_ptr<SyntaxTree> tree_;
  const Node* root_ = nullptr;         // single-node pattern
  std::vector<const Node*> sequence_;  // multi-statement pattern
  std::size_t optional_statements_ = 0;
};

}  // namespace slopscope::python
