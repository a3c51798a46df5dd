// SPDX-License-Identifier: Apache-2.0
#include "slopscope/python/metrics.hpp"

#include <algorithm>
#include <string>

namespace slopscope::python {
namespace {

void count_decisions(const Node* n, bool in_condition, std::uint32_t& points);

void count_kids(const Node& n, bool in_condition, std::uint32_t& points) {
  for (const Node* k : n.kids) count_decisions(k, in_condition, points);
}

void count_decisions(const Node* n, bool in_condition, std::uint32_t& points) {
  if (n == nullptr) return;
  if (is_statement(n->kind)) in_condition = false;
  switch (n->kind) {
    case NodeKind::FunctionDef:
    case NodeKind::ClassDef:
      return;
    case NodeKind::If:
    case NodeKind::While:
      ++points;
      count_decisions(n->kids[0], true, points);
      count_decisions(n->kids[1], false, points);
      count_decisions(n->kids[2], false, points);
      return;
    case NodeKind::For:
    case NodeKind::ExceptHandler:
      ++points;
      count_kids(*n, false, points);
      return;
    case NodeKind::IfExp:
      ++points;
      count_decisions(n->kids[0], in_condition, points);
      count_decisions(n->kids[1], true, points);
      count_decisions(n->kids[2], in_condition, points);
      return;
    case NodeKind::Comprehension:
      ++points;  // the `for` clause
      count_decisions(n->kids[0], in_condition, points);
      count_decisions(n->kids[1], in_condition, points);
      points += static_cast<std::uint32_t>(n->kids[2]->kids.size());
      for (const Node* cond : n->kids[2]->kids) count_decisions(cond, true, points);
      return;
    case NodeKind::Match: {
      const auto arms = static_cast<std::uint32_t>(n->kids[1]->kids.size());
      if (arms > 1) points += arms - 1;
      count_decisions(n->kids[0], false, points);
      for (const Node* c : n->kids[1]->kids) {
        count_decisions(c->kids[0], false, points);
        count_decisions(c->kids[1], true, points);
        count_decisions(c->kids[2], false, points);
      }
      return;
    }
    case NodeKind::BoolOp:
      if (in_condition) ++points;
      count_kids(*n, in_condition, points);
      return;
    default:
      count_kids(*n, in_condition, points);
      return;
  }
}

const Node* body_of(const Node& callable) { return callable.kids[4]; }

void collect(const SyntaxTree& tree, const Node* n, const source::LineSet& code, std::string_view path,
             const std::string& prefix, std::vector<source::CallableRecord>& out) {
  if (n == nullptr) return;
  switch (n->kind) {
    case NodeKind::FunctionDef: {
      const std::string name = prefix + std::string(n->kids[1]->text);
      source::CallableRecord rec;
      rec.qualified_name = name;
      rec.file = std::string(path);
      rec.span = callable_span(tree, *n);
      rec.cc = cyclomatic_complexity(*n);
      rec.sloc = source_lines(tree, *n, code);
      out.push_back(std::move(rec));
      collect(tree, body_of(*n), code, path, name + ".", out);
      return;
    }
    case NodeKind::ClassDef:
      collect(tree, n->kids[3], code, path, prefix + std::string(n->kids[1]->text) + ".", out);
      return;
    default:
      // Expressions never contain named callables.
      if (!is_statement(n->kind) && n->kind != NodeKind::Module && n->kind != NodeKind::Block &&
          n->kind != NodeKind::Handlers && n->kind != NodeKind::ExceptHandler && n->kind != NodeKind::Cases &&
          n->kind != NodeKind::Case) {
        return;
      }
      for (const Node* k : n->kids) collect(tree, k, code, path, prefix, out);
      return;
  }
}

bool is_literal_keyword(std::string_view w) { return w == "True" || w == "False" || w == "None"; }

}  // namespace

std::uint32_t cyclomatic_complexity(const Node& callable) {
  std::uint32_t points = 0;
  const Node* body = callable.kind == NodeKind::FunctionDef ? body_of(callable) : &callable;
  count_decisions(body, false, points);
  return 1 + points;
}

source::LineSet code_lines(const SyntaxTree& tree) {
  const std::string_view src = tree.source();
  const std::uint32_t total = source::physical_line_count(src);
  source::LineSet set(total);
  for (const Token& t : tree.tokens()) {
    switch (t.kind) {
      case TokenKind::Name:
      case TokenKind::Number:
      case TokenKind::String:
      case TokenKind::Op:
      case TokenKind::Metavar:
        set.insert_range(t.line, t.end_line);
        break;
      default:
        break;
    }
  }
  // Blank lines inside multi-line strings are not code.
  const auto& index = tree.lines();
  for (std::uint32_t line = 1; line <= total; ++line) {
    if (!set.contains(line)) continue;
    std::uint32_t p = index.line_start(line);
    bool blank = true;
    while (p < src.size() && src[p] != '\n' && src[p] != '\r') {
      if (src[p] != ' ' && src[p] != '\t' && src[p] != '\f') {
        blank = false;
        break;
      }
      ++p;
    }
    if (blank) set.erase(line);
  }
  return set;
}

source::LineSpan callable_span(const SyntaxTree& tree, const Node& callable) {
  const Node* name = callable.kids[1];
  return {tree.first_line(*name), tree.last_line(callable)};
}

std::uint32_t source_lines(const SyntaxTree& tree, const Node& callable, const source::LineSet& code) {
  const source::LineSpan span = callable_span(tree, callable);
  const auto n = static_cast<std::uint32_t>(code.count_in(span.start_line, span.end_line));
  return std::max<std::uint32_t>(n, 1);
}

std::vector<source::CallableRecord> enumerate_callables(const SyntaxTree& tree, const source::LineSet& code,
                                                        std::string_view path) {
  std::vector<source::CallableRecord> out;
  collect(tree, tree.root(), code, path, "", out);
  return out;
}

std::vector<source::NormalizedLine> normalize_lines(const SyntaxTree& tree, bool abstract) {
  std::vector<source::NormalizedLine> out;
  for (const Token& t : tree.tokens()) {
    std::string_view piece;
    switch (t.kind) {
      case TokenKind::Name:
        if (!abstract) {
          piece = t.text;
          break;
        }
        piece = is_literal_keyword(t.text) ? "L" : is_keyword(t.text) ? t.text : "I";
        break;
      case TokenKind::Metavar:
      case TokenKind::Number:
      case TokenKind::String:
        if (!abstract) {
          piece = t.text;
        } else {
          piece = t.kind == TokenKind::Metavar ? "I" : "L";
        }
        break;
      case TokenKind::Op:
        piece = t.text;
        break;
      default:
        continue;
    }
    if (out.empty() || out.back().first_line != t.line) {
      // Tokens continuing a bracketed expression onto a new physical line
      // start a new normalized line; the window is line-based.
      out.push_back(source::NormalizedLine{t.line, t.end_line, {}});
    } else {
      out.back().text.push_back(' ');
    }
    out.back().text.append(piece);
    out.back().last_line = std::max(out.back().last_line, t.end_line);
  }
  return out;
}

}  // namespace slopscope::python
