// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "slopscope/python/lexer.hpp"
#include "slopscope/source/text.hpp"

namespace slopscope::python {

// Node kinds. Each kind has a fixed child layout (documented per kind);
// absent optional children are nullptr. "List" kinds hold a variable number
// of non-null children.
enum class NodeKind : std::uint8_t {
  // containers
  Module,      // [Block]
  Block,       // list of statements
  // statements
  ExprStmt,    // [expr]
  Assign,      // [target..., value]   (list)
  AugAssign,   // text=op [target, value]
  AnnAssign,   // [target, annotation, value?]
  Return,      // [value?]
  Pass,
  Break,
  Continue,
  Raise,       // [exc?, cause?]
  Global,      // list of Identifier
  Nonlocal,    // list of Identifier
  Del,         // list of targets
  Assert,      // [test, msg?]
  Import,      // list of Alias
  ImportFrom,  // [module Identifier?, Alias...]   (list)
  Alias,       // [Identifier, asname Identifier?]
  If,          // [test, body, orelse?]  orelse is Block (else) or If (elif)
  For,         // text="async"|"" [target, iter, body, orelse?]
  While,       // [test, body, orelse?]
  Try,         // [body, Handlers, orelse?, finally?]
  Handlers,    // list of ExceptHandler
  ExceptHandler,  // text="except"|"except*" [type?, name Identifier?, body]
  With,        // text="async"|"" [WithItems, body]
  WithItems,   // list of WithItem
  WithItem,    // [expr, target?]
  FunctionDef,  // text="async"|"" [Decorators, name Identifier, Params, returns?, body]
  ClassDef,    // [Decorators, name Identifier, Args, body]
  Decorators,  // list of expr
  Params,      // list of Param
  Param,       // text=""|"*"|"**"|"/" [name Identifier?, annotation?, default?]
  Match,       // [subject, Cases]
  Cases,       // list of Case
  Case,        // [pattern, guard?, body]
  MatchAs,     // [pattern, Identifier]
  // expressions
  Name,
  Identifier,  // identifier in a non-expression slot (attribute, def name, kwarg)
  Metavar,     // pattern placeholder; text="$X" or "$X?"
  Constant,    // number, string(s), True/False/None, Ellipsis; text = source text
  Attribute,   // [value, Identifier]
  Call,        // [func, Args]
  Args,        // list of expr | Keyword | Starred
  Keyword,     // [Identifier, value]
  Subscript,   // [value, slice]
  Slice,       // [lower?, upper?, step?]
  BinOp,       // text=op [left, right]
  UnaryOp,     // text=op [operand]
  BoolOp,      // text="and"|"or" [left, right]
  Compare,     // [left, CmpOp, right, CmpOp, right, ...]  (list)
  CmpOp,       // text=operator ("==", "not in", "is not", ...)
  IfExp,       // [body, test, orelse]
  Lambda,      // [Params, body]
  NamedExpr,   // [target, value]
  Await,       // [value]
  Yield,       // text="yield"|"yield from" [value?]
  Starred,     // text="*"|"**" [value]
  Tuple,       // list
  List,        // list
  Set,         // list
  Dict,        // list of DictItem | Starred("**")
  DictItem,    // [key, value]
  ListComp,    // [elt, Generators]
  SetComp,     // [elt, Generators]
  GeneratorExp,  // [elt, Generators]
  DictComp,    // [DictItem, Generators]
  Generators,  // list of Comprehension
  Comprehension,  // text="async"|"" [target, iter, Ifs]
  Ifs,         // list of conditions
};

std::string_view kind_name(NodeKind kind);
bool is_statement(NodeKind kind);

struct Node {
  NodeKind kind;
  std::string_view text;
  std::uint32_t begin = 0;  // byte span [begin, end)
  std::uint32_t end = 0;
  std::vector<Node*> kids;
};

// Owns the source buffer, its tokens, and the node arena. Not movable: nodes
// and tokens hold views into the owned buffer.
class SyntaxTree {
 public:
  explicit SyntaxTree(std::string source) : source_(std::move(source)), lines_(source_) {}
  SyntaxTree(const SyntaxTree&) = delete;
  SyntaxTree& operator=(const SyntaxTree&) = delete;

  std::string_view source() const { return source_; }
  const Node* root() const { return root_; }
  std::span<const Token> tokens() const { return tokens_; }
  const source::LineIndex& lines() const { return lines_; }

  std::string_view text_of(const Node& node) const {
    return std::string_view(source_).substr(node.begin, node.end - node.begin);
  }
  source::Position start_of(const Node& node) const { return lines_.position(node.begin); }
  // Position immediately after the node.
  source::Position end_of(const Node& node) const { return lines_.position(node.end); }
  std::uint32_t first_line(const Node& node) const { return lines_.line_of(node.begin); }
  std::uint32_t last_line(const Node& node) const {
    return lines_.line_of(node.end > node.begin ? node.end - 1 : node.begin);
  }

  // Code tokens (no comments, line breaks or indentation) inside [begin, end).
  std::span<const Token> code_tokens(std::uint32_t begin, std::uint32_t end) const;

  // Parser-side construction.
  Node* make(NodeKind kind, std::uint32_t begin, std::uint32_t end, std::string_view text = {}) {
    nodes_.push_back(Node{kind, text, begin, end, {}});
    return &nodes_.back();
  }
  std::string_view own(std::string text) {
    owned_.push_back(std::move(text));
    return owned_.back();
  }
  void set_tokens(std::vector<Token> tokens);
  void set_root(Node* root) { root_ = root; }
  std::size_t node_count() const { return nodes_.size(); }

 private:
  std::string source_;
  source::LineIndex lines_;
  std::vector<Token> tokens_;
  std::vector<Token> code_tokens_;
  std::deque<Node> nodes_;
  std::deque<std::string> owned_;
  Node* root_ = nullptr;
};

// Parses a module. Throws ParseError.
std::unique_ptr<SyntaxTree> parse_module(std::string source);

// Parses a rule pattern: Python code in which `$NAME`, `$NAME?` and `$$` are
// accepted. Throws ParseError.
std::unique_ptr<SyntaxTree> parse_pattern(std::string pattern);

// Pre-order traversal; skips null children.
template <typename Fn>
void walk(const Node* node, Fn&& fn) {
  if (node == nullptr) return;
  fn(*node);
  for (const Node* kid : node->kids) walk(kid, fn);
}

}  // namespace slopscope::python
