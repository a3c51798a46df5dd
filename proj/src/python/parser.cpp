// SPDX-License-Identifier: Apache-2.0
//
// Recursive-descent parser for Python 3 source. Produces the uniform node
// layout described in syntax_tree.hpp. It accepts the statement and
// expression grammar of Python 3.10+ (match statements included) but does not
// validate static semantics such as assignment target legality.
#include <algorithm>
#include <array>
#include <optional>

#include "slopscope/common/error.hpp"
#include "slopscope/python/syntax_tree.hpp"

namespace slopscope::python {
namespace {

constexpr int kMaxDepth = 400;

bool is_trivia(TokenKind k) {
  return k == TokenKind::Comment || k == TokenKind::Nl;
}

class Parser {
 public:
  Parser(SyntaxTree& tree, bool pattern_mode) : tree_(tree), pattern_mode_(pattern_mode) {
    for (const Token& t : tree.tokens()) {
      if (!is_trivia(t.kind)) toks_.push_back(&t);
    }
  }

  Node* module() {
    const std::uint32_t begin = 0;
    Node* block = tree_.make(NodeKind::Block, 0, 0);
    while (!at(TokenKind::EndMarker)) {
      if (accept(TokenKind::Newline)) continue;
      if (at(TokenKind::Indent)) fail("unexpected indent");
      statement_into(block->kids);
    }
    fit(block);
    Node* mod = tree_.make(NodeKind::Module, begin, static_cast<std::uint32_t>(tree_.source().size()));
    mod->kids.push_back(block);
    return mod;
  }

 private:
  // ---- token helpers ----------------------------------------------------

  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return *toks_[i];
  }
  bool at(TokenKind k) const { return peek().kind == k; }
  bool at_op(std::string_view op, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == TokenKind::Op && t.text == op;
  }
  bool at_kw(std::string_view kw, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == TokenKind::Name && t.text == kw;
  }
  const Token& advance() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    last_end_ = t.end;
    return t;
  }
  bool accept(TokenKind k) {
    if (!at(k)) return false;
    advance();
    return true;
  }
  bool accept_op(std::string_view op) {
    if (!at_op(op)) return false;
    advance();
    return true;
  }
  bool accept_kw(std::string_view kw) {
    if (!at_kw(kw)) return false;
    advance();
    return true;
  }
  const Token& expect_op(std::string_view op) {
    if (!at_op(op)) fail("expected '" + std::string(op) + "'");
    return advance();
  }
  void expect_kw(std::string_view kw) {
    if (!accept_kw(kw)) fail("expected '" + std::string(kw) + "'");
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string near = t.kind == TokenKind::Newline ? "newline"
                       : t.kind == TokenKind::EndMarker ? "end of input"
                                                         : std::string(t.text);
    throw ParseError(t.line, msg + " near '" + near + "'");
  }

  std::uint32_t here() const { return peek().begin; }

  Node* make(NodeKind k, std::uint32_t begin, std::string_view text = {}) {
    return tree_.make(k, begin, last_end_, text);
  }
  // Sets a container's span from its first and last child.
  void fit(Node* n) {
    for (Node* k : n->kids) {
      if (k) {
        n->begin = k->begin;
        break;
      }
    }
    for (auto it = n->kids.rbegin(); it != n->kids.rend(); ++it) {
      if (*it) {
        n->end = (*it)->end;
        break;
      }
    }
  }

  struct DepthGuard {
    explicit DepthGuard(Parser& p) : p_(p) {
      if (++p_.depth_ > kMaxDepth) p_.fail("nesting too deep");
    }
    ~DepthGuard() { --p_.depth_; }
    Parser& p_;
  };

  bool at_name_token() const {
    const Token& t = peek();
    return (t.kind == TokenKind::Name && !is_keyword(t.text)) || t.kind == TokenKind::Metavar;
  }

  Node* identifier() {
    const Token& t = peek();
    if (t.kind == TokenKind::Metavar) {
      advance();
      return tree_.make(NodeKind::Metavar, t.begin, t.end, t.text);
    }
    if (t.kind != TokenKind::Name || is_keyword(t.text)) fail("expected identifier");
    advance();
    return tree_.make(NodeKind::Identifier, t.begin, t.end, t.text);
  }

  // ---- statements -------------------------------------------------------

  void statement_into(std::vector<Node*>& out) {
    DepthGuard guard(*this);
    const Token& t = peek();
    if (t.kind == TokenKind::Op && t.text == "@") {
      out.push_back(decorated());
      return;
    }
    if (t.kind == TokenKind::Name) {
      const std::string_view w = t.text;
      if (w == "def") return out.push_back(funcdef(nullptr, here(), {}));
      if (w == "class") return out.push_back(classdef(nullptr, here()));
      if (w == "if") return out.push_back(if_stmt());
      if (w == "for") return out.push_back(for_stmt(here(), {}));
      if (w == "while") return out.push_back(while_stmt());
      if (w == "try") return out.push_back(try_stmt());
      if (w == "with") return out.push_back(with_stmt(here(), {}));
      if (w == "async") {
        const std::uint32_t b = here();
        advance();
        if (at_kw("def")) return out.push_back(funcdef(nullptr, b, "async"));
        if (at_kw("for")) return out.push_back(for_stmt(b, "async"));
        if (at_kw("with")) return out.push_back(with_stmt(b, "async"));
        fail("expected def, for or with after async");
      }
      if (w == "match") {
        if (Node* m = try_match_stmt()) return out.push_back(m);
      }
    }
    simple_statements_into(out);
  }

  void simple_statements_into(std::vector<Node*>& out) {
    out.push_back(simple_statement());
    while (accept_op(";")) {
      if (at(TokenKind::Newline) || at(TokenKind::EndMarker)) break;
      out.push_back(simple_statement());
    }
    if (!accept(TokenKind::Newline) && !at(TokenKind::EndMarker)) fail("expected end of statement");
  }

  Node* simple_statement() {
    const std::uint32_t b = here();
    const Token& t = peek();
    if (t.kind == TokenKind::Name) {
      const std::string_view w = t.text;
      if (w == "pass") {
        advance();
        return make(NodeKind::Pass, b);
      }
      if (w == "break") {
        advance();
        return make(NodeKind::Break, b);
      }
      if (w == "continue") {
        advance();
        return make(NodeKind::Continue, b);
      }
      if (w == "return") {
        advance();
        Node* n = tree_.make(NodeKind::Return, b, 0);
        n->kids.push_back(at_stmt_end() ? nullptr : star_expressions());
        n->end = last_end_;
        return n;
      }
      if (w == "raise") {
        advance();
        Node* n = tree_.make(NodeKind::Raise, b, 0);
        Node* exc = at_stmt_end() ? nullptr : test();
        Node* cause = (exc && accept_kw("from")) ? test() : nullptr;
        n->kids = {exc, cause};
        n->end = last_end_;
        return n;
      }
      if (w == "global" || w == "nonlocal") {
        advance();
        Node* n = tree_.make(w == "global" ? NodeKind::Global : NodeKind::Nonlocal, b, 0);
        do {
          n->kids.push_back(identifier());
        } while (accept_op(","));
        n->end = last_end_;
        return n;
      }
      if (w == "del") {
        advance();
        Node* n = tree_.make(NodeKind::Del, b, 0);
        do {
          if (at_stmt_end()) break;
          n->kids.push_back(bitor_or_star());
        } while (accept_op(","));
        n->end = last_end_;
        return n;
      }
      if (w == "assert") {
        advance();
        Node* n = tree_.make(NodeKind::Assert, b, 0);
        Node* cond = test();
        Node* msg = accept_op(",") ? test() : nullptr;
        n->kids = {cond, msg};
        n->end = last_end_;
        return n;
      }
      if (w == "import") return import_stmt();
      if (w == "from") return import_from();
    }
    return expression_statement();
  }

  bool at_stmt_end() const {
    return at(TokenKind::Newline) || at(TokenKind::EndMarker) || at_op(";");
  }

  Node* dotted_name() {
    const std::uint32_t b = here();
    std::string text;
    const Token& first = peek();
    if (first.kind == TokenKind::Metavar) {
      advance();
      return tree_.make(NodeKind::Metavar, first.begin, first.end, first.text);
    }
    text += identifier()->text;
    while (at_op(".")) {
      advance();
      text += ".";
      text += identifier()->text;
    }
    return tree_.make(NodeKind::Identifier, b, last_end_, tree_.own(std::move(text)));
  }

  Node* import_stmt() {
    const std::uint32_t b = here();
    advance();
    Node* n = tree_.make(NodeKind::Import, b, 0);
    do {
      const std::uint32_t ab = here();
      Node* name = dotted_name();
      Node* as = accept_kw("as") ? identifier() : nullptr;
      Node* alias = make(NodeKind::Alias, ab);
      alias->kids = {name, as};
      n->kids.push_back(alias);
    } while (accept_op(","));
    n->end = last_end_;
    return n;
  }

  Node* import_from() {
    const std::uint32_t b = here();
    advance();
    std::string module;
    const std::uint32_t mb = here();
    while (at_op(".") || at_op("...")) module += advance().text;
    Node* mod = nullptr;
    if (!at_kw("import")) {
      Node* dn = dotted_name();
      if (module.empty()) {
        mod = dn;
      } else {
        module += dn->text;
        mod = tree_.make(NodeKind::Identifier, mb, last_end_, tree_.own(std::move(module)));
      }
    } else {
      if (module.empty()) fail("expected module name");
      mod = tree_.make(NodeKind::Identifier, mb, last_end_, tree_.own(std::move(module)));
    }
    expect_kw("import");
    Node* n = tree_.make(NodeKind::ImportFrom, b, 0);
    n->kids.push_back(mod);
    if (at_op("*")) {
      const Token& star = advance();
      Node* alias = tree_.make(NodeKind::Alias, star.begin, star.end);
      alias->kids = {tree_.make(NodeKind::Identifier, star.begin, star.end, star.text), nullptr};
      n->kids.push_back(alias);
    } else {
      const bool paren = accept_op("(");
      do {
        if (paren && at_op(")")) break;
        const std::uint32_t ab = here();
        Node* name = identifier();
        Node* as = accept_kw("as") ? identifier() : nullptr;
        Node* alias = make(NodeKind::Alias, ab);
        alias->kids = {name, as};
        n->kids.push_back(alias);
      } while (accept_op(","));
      if (paren) expect_op(")");
    }
    n->end = last_end_;
    return n;
  }

  static constexpr std::array<std::string_view, 13> kAugOps = {"+=", "-=", "*=", "/=", "//=", "%=", "@=",
                                                               "&=", "|=", "^=", ">>=", "<<=", "**="};

  Node* expression_statement() {
    const std::uint32_t b = here();
    Node* first = star_expressions();
    if (at_op("=")) {
      Node* n = tree_.make(NodeKind::Assign, b, 0);
      n->kids.push_back(first);
      while (accept_op("=")) n->kids.push_back(at_kw("yield") ? yield_expr() : star_expressions());
      n->end = last_end_;
      return n;
    }
    const Token& t = peek();
    if (t.kind == TokenKind::Op && std::find(kAugOps.begin(), kAugOps.end(), t.text) != kAugOps.end()) {
      advance();
      Node* value = at_kw("yield") ? yield_expr() : star_expressions();
      Node* n = make(NodeKind::AugAssign, b, t.text);
      n->kids = {first, value};
      return n;
    }
    if (accept_op(":")) {
      Node* annotation = test();
      Node* value = nullptr;
      if (accept_op("=")) value = at_kw("yield") ? yield_expr() : star_expressions();
      Node* n = make(NodeKind::AnnAssign, b);
      n->kids = {first, annotation, value};
      return n;
    }
    Node* n = make(NodeKind::ExprStmt, b);
    n->kids.push_back(first);
    return n;
  }

  // Body after ':': either an indented block or simple statements on the
  // same line.
  Node* suite() {
    expect_op(":");
    Node* block = tree_.make(NodeKind::Block, 0, 0);
    if (accept(TokenKind::Newline)) {
      if (!accept(TokenKind::Indent)) fail("expected an indented block");
      while (!accept(TokenKind::Dedent)) {
        if (at(TokenKind::EndMarker)) break;
        if (accept(TokenKind::Newline)) continue;
        statement_into(block->kids);
      }
    } else {
      simple_statements_into(block->kids);
    }
    if (block->kids.empty()) fail("empty block");
    fit(block);
    return block;
  }

  Node* decorated() {
    const std::uint32_t b = here();
    Node* decorators = tree_.make(NodeKind::Decorators, b, 0);
    while (accept_op("@")) {
      decorators->kids.push_back(named_expression());
      if (!accept(TokenKind::Newline)) fail("expected newline after decorator");
    }
    fit(decorators);
    if (at_kw("def")) return funcdef(decorators, b, {});
    if (at_kw("class")) return classdef(decorators, b);
    if (accept_kw("async")) {
      if (!at_kw("def")) fail("expected def after async");
      return funcdef(decorators, b, "async");
    }
    fail("expected def or class after decorator");
  }

  Node* funcdef(Node* decorators, std::uint32_t begin, std::string_view flavor) {
    expect_kw("def");
    if (!decorators) decorators = tree_.make(NodeKind::Decorators, begin, begin);
    Node* name = identifier();
    skip_type_params();
    expect_op("(");
    Node* params = parameters(")", true);
    expect_op(")");
    Node* returns = accept_op("->") ? test() : nullptr;
    Node* body = suite();
    Node* n = tree_.make(NodeKind::FunctionDef, begin, body->end, flavor);
    n->kids = {decorators, name, params, returns, body};
    return n;
  }

  Node* classdef(Node* decorators, std::uint32_t begin) {
    expect_kw("class");
    if (!decorators) decorators = tree_.make(NodeKind::Decorators, begin, begin);
    Node* name = identifier();
    skip_type_params();
    Node* args = tree_.make(NodeKind::Args, here(), here());
    if (accept_op("(")) {
      arguments_into(args);
      expect_op(")");
    }
    Node* body = suite();
    Node* n = tree_.make(NodeKind::ClassDef, begin, body->end);
    n->kids = {decorators, name, args, body};
    return n;
  }

  // Parameter list for def (annotations allowed) or lambda (terminator ':').
  Node* parameters(std::string_view terminator, bool annotations) {
    Node* params = tree_.make(NodeKind::Params, here(), here());
    while (!at_op(terminator)) {
      const std::uint32_t b = here();
      std::string_view marker;
      if (at_op("*") || at_op("**") || at_op("/")) marker = advance().text;
      Node* name = nullptr;
      Node* annotation = nullptr;
      Node* def = nullptr;
      if (marker != "/" && !(marker == "*" && (at_op(",") || at_op(terminator)))) {
        name = identifier();
        if (annotations && accept_op(":")) annotation = marker == "*" ? bitor_or_star() : test();
        if (accept_op("=")) def = test();
      }
      Node* p = make(NodeKind::Param, b, marker);
      p->kids = {name, annotation, def};
      params->kids.push_back(p);
      if (!accept_op(",")) break;
    }
    fit(params);
    return params;
  }

  Node* if_stmt() {
    const std::uint32_t b = here();
    advance();  // 'if' or 'elif'
    Node* cond = named_expression();
    Node* body = suite();
    Node* orelse = nullptr;
    if (at_kw("elif")) {
      orelse = if_stmt();
    } else if (at_kw("else")) {
      advance();
      orelse = suite();
    }
    Node* n = tree_.make(NodeKind::If, b, (orelse ? orelse : body)->end);
    n->kids = {cond, body, orelse};
    return n;
  }

  Node* for_stmt(std::uint32_t begin, std::string_view flavor) {
    expect_kw("for");
    Node* target = target_list();
    expect_kw("in");
    Node* iter = star_expressions();
    Node* body = suite();
    Node* orelse = nullptr;
    if (accept_kw("else")) orelse = suite();
    Node* n = tree_.make(NodeKind::For, begin, (orelse ? orelse : body)->end, flavor);
    n->kids = {target, iter, body, orelse};
    return n;
  }

  Node* while_stmt() {
    const std::uint32_t b = here();
    advance();
    Node* cond = named_expression();
    Node* body = suite();
    Node* orelse = nullptr;
    if (accept_kw("else")) orelse = suite();
    Node* n = tree_.make(NodeKind::While, b, (orelse ? orelse : body)->end);
    n->kids = {cond, body, orelse};
    return n;
  }

  Node* try_stmt() {
    const std::uint32_t b = here();
    advance();
    Node* body = suite();
    Node* handlers = tree_.make(NodeKind::Handlers, here(), here());
    while (at_kw("except")) {
      const std::uint32_t hb = here();
      advance();
      std::string_view flavor = "except";
      if (accept_op("*")) flavor = "except*";
      Node* type = nullptr;
      Node* name = nullptr;
      if (!at_op(":")) {
        type = test();
        if (at_op(",")) {
          Node* tup = tree_.make(NodeKind::Tuple, type->begin, 0);
          tup->kids.push_back(type);
          while (accept_op(",")) {
            if (at_op(":") || at_kw("as")) break;
            tup->kids.push_back(test());
          }
          tup->end = last_end_;
          type = tup;
        }
        if (accept_kw("as")) name = identifier();
      }
      Node* hbody = suite();
      Node* h = tree_.make(NodeKind::ExceptHandler, hb, hbody->end, flavor);
      h->kids = {type, name, hbody};
      handlers->kids.push_back(h);
    }
    fit(handlers);
    Node* orelse = nullptr;
    Node* finally = nullptr;
    if (accept_kw("else")) orelse = suite();
    if (accept_kw("finally")) finally = suite();
    if (handlers->kids.empty() && !finally) fail("expected 'except' or 'finally' block");
    Node* last = finally ? finally : orelse ? orelse : handlers->kids.empty() ? body : handlers;
    Node* n = tree_.make(NodeKind::Try, b, last->end);
    n->kids = {body, handlers, orelse, finally};
    return n;
  }

  Node* with_stmt(std::uint32_t begin, std::string_view flavor) {
    expect_kw("with");
    Node* items = nullptr;
    if (at_op("(")) {
      // Parenthesized item list (3.10+) or a parenthesized expression.
      const std::size_t save = pos_;
      const std::uint32_t save_end = last_end_;
      try {
        advance();
        items = with_items(")");
        expect_op(")");
        if (!at_op(":")) throw ParseError(peek().line, "not a parenthesized with");
      } catch (const ParseError&) {
        pos_ = save;
        last_end_ = save_end;
        items = nullptr;
      }
    }
    if (!items) items = with_items(":");
    Node* body = suite();
    Node* n = tree_.make(NodeKind::With, begin, body->end, flavor);
    n->kids = {items, body};
    return n;
  }

  Node* with_items(std::string_view terminator) {
    Node* items = tree_.make(NodeKind::WithItems, here(), here());
    do {
      if (at_op(terminator)) break;
      const std::uint32_t b = here();
      Node* expr = test();
      Node* target = accept_kw("as") ? bitor_or_star() : nullptr;
      Node* item = make(NodeKind::WithItem, b);
      item->kids = {expr, target};
      items->kids.push_back(item);
    } while (accept_op(","));
    fit(items);
    return items;
  }

  // `match` is a soft keyword: only a statement when followed by a subject,
  // ':' and an indented block of `case` clauses.
  Node* try_match_stmt() {
    const std::size_t save = pos_;
    const std::uint32_t save_end = last_end_;
    const std::uint32_t b = here();
    bool committed = false;
    try {
      advance();
      Node* subject = star_named_expressions();
      expect_op(":");
      if (!accept(TokenKind::Newline) || !accept(TokenKind::Indent) || !at_kw("case")) {
        throw ParseError(peek().line, "not a match statement");
      }
      committed = true;
      Node* cases = tree_.make(NodeKind::Cases, here(), here());
      while (!accept(TokenKind::Dedent)) {
        if (at(TokenKind::EndMarker)) break;
        if (accept(TokenKind::Newline)) continue;
        cases->kids.push_back(case_clause());
      }
      fit(cases);
      Node* n = tree_.make(NodeKind::Match, b, cases->end);
      n->kids = {subject, cases};
      return n;
    } catch (const ParseError&) {
      if (committed) throw;
      pos_ = save;
      last_end_ = save_end;
      return nullptr;
    }
  }

  Node* case_clause() {
    const std::uint32_t b = here();
    expect_kw("case");
    Node* pattern = case_pattern_list();
    Node* guard = accept_kw("if") ? named_expression() : nullptr;
    Node* body = suite();
    Node* n = tree_.make(NodeKind::Case, b, body->end);
    n->kids = {pattern, guard, body};
    return n;
  }

  Node* case_pattern() {
    const std::uint32_t b = here();
    const bool outer = in_case_pattern_;
    in_case_pattern_ = true;
    Node* p = nullptr;
    try {
      p = bitor_or_star();
    } catch (...) {
      in_case_pattern_ = outer;
      throw;
    }
    in_case_pattern_ = outer;
    if (accept_kw("as")) {
      Node* name = identifier();
      Node* n = make(NodeKind::MatchAs, b);
      n->kids = {p, name};
      return n;
    }
    return p;
  }

  Node* case_pattern_list() {
    const std::uint32_t b = here();
    Node* first = case_pattern();
    if (!at_op(",")) return first;
    Node* tup = tree_.make(NodeKind::Tuple, b, 0);
    tup->kids.push_back(first);
    while (accept_op(",")) {
      if (at_op(":") || at_kw("if")) break;
      tup->kids.push_back(case_pattern());
    }
    tup->end = last_end_;
    return tup;
  }

  // ---- expressions ------------------------------------------------------

  // Comma-separated expressions with optional starred items; a single item
  // without a trailing comma is returned unwrapped.
  Node* star_expressions() { return expression_list([this] { return star_or_test(); }); }
  Node* star_named_expressions() { return expression_list([this] { return star_or_named(); }); }
  Node* target_list() { return expression_list([this] { return bitor_or_star(); }); }

  template <typename ItemFn>
  Node* expression_list(ItemFn item) {
    const std::uint32_t b = here();
    Node* first = item();
    if (!at_op(",")) return first;
    Node* tup = tree_.make(NodeKind::Tuple, b, 0);
    tup->kids.push_back(first);
    while (accept_op(",")) {
      if (!starts_expression()) break;
      tup->kids.push_back(item());
    }
    tup->end = last_end_;
    return tup;
  }

  bool starts_expression() const {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::Number:
      case TokenKind::String:
      case TokenKind::Metavar:
        return true;
      case TokenKind::Name:
        return !is_keyword(t.text) || t.text == "not" || t.text == "lambda" || t.text == "await" ||
               t.text == "None" || t.text == "True" || t.text == "False" || t.text == "yield";
      case TokenKind::Op:
        return t.text == "(" || t.text == "[" || t.text == "{" || t.text == "-" || t.text == "+" ||
               t.text == "~" || t.text == "*" || t.text == "**" || t.text == "...";
      default:
        return false;
    }
  }

  Node* star_or_test() {
    if (at_op("*")) return starred(false);
    return test();
  }
  Node* star_or_named() {
    if (at_op("*")) return starred(false);
    return named_expression();
  }
  Node* bitor_or_star() {
    if (at_op("*")) return starred(false);
    return bitor_expr();
  }

  Node* starred(bool allow_double, bool full_value = false) {
    const std::uint32_t b = here();
    const Token& op = advance();
    if (op.text == "**" && !allow_double) fail("unexpected '**'");
    Node* value = full_value ? test() : bitor_expr();
    Node* n = make(NodeKind::Starred, b, op.text);
    n->kids.push_back(value);
    return n;
  }

  Node* named_expression() {
    const std::uint32_t b = here();
    if ((peek().kind == TokenKind::Name || peek().kind == TokenKind::Metavar) && at_op(":=", 1)) {
      Node* target = atom();
      advance();
      Node* value = test();
      Node* n = make(NodeKind::NamedExpr, b);
      n->kids = {target, value};
      return n;
    }
    return test();
  }

  Node* test() {
    DepthGuard guard(*this);
    if (at_kw("lambda")) return lambda(false);
    if (at_kw("yield")) return yield_expr();
    const std::uint32_t b = here();
    Node* body = or_test();
    if (at_kw("if")) {
      // A comprehension filter ends the element expression: `x for x in y if c`
      // never reaches here because or_test() is used for filters.
      advance();
      Node* cond = or_test();
      expect_kw("else");
      Node* orelse = test();
      Node* n = make(NodeKind::IfExp, b);
      n->kids = {body, cond, orelse};
      return n;
    }
    return body;
  }

  Node* test_no_cond() {
    if (at_kw("lambda")) return lambda(true);
    return or_test();
  }

  Node* lambda(bool no_cond) {
    const std::uint32_t b = here();
    advance();
    Node* params = parameters(":", false);
    expect_op(":");
    Node* body = no_cond ? test_no_cond() : test();
    Node* n = make(NodeKind::Lambda, b);
    n->kids = {params, body};
    return n;
  }

  Node* yield_expr() {
    const std::uint32_t b = here();
    expect_kw("yield");
    std::string_view flavor = "yield";
    Node* value = nullptr;
    if (accept_kw("from")) {
      flavor = "yield from";
      value = test();
    } else if (starts_expression()) {
      value = star_expressions();
    }
    Node* n = make(NodeKind::Yield, b, flavor);
    n->kids.push_back(value);
    return n;
  }

  Node* or_test() {
    const std::uint32_t b = here();
    Node* left = and_test();
    while (at_kw("or")) {
      const Token& op = advance();
      Node* right = and_test();
      Node* n = make(NodeKind::BoolOp, b, op.text);
      n->kids = {left, right};
      left = n;
    }
    return left;
  }

  Node* and_test() {
    const std::uint32_t b = here();
    Node* left = not_test();
    while (at_kw("and")) {
      const Token& op = advance();
      Node* right = not_test();
      Node* n = make(NodeKind::BoolOp, b, op.text);
      n->kids = {left, right};
      left = n;
    }
    return left;
  }

  Node* not_test() {
    if (at_kw("not")) {
      DepthGuard guard(*this);
      const std::uint32_t b = here();
      const Token& op = advance();
      Node* operand = not_test();
      Node* n = make(NodeKind::UnaryOp, b, op.text);
      n->kids.push_back(operand);
      return n;
    }
    return comparison();
  }

  std::optional<std::string_view> comparison_operator() {
    const Token& t = peek();
    if (t.kind == TokenKind::Op) {
      static constexpr std::array<std::string_view, 7> ops = {"<", ">", "==", ">=", "<=", "!=", "<>"};
      if (std::find(ops.begin(), ops.end(), t.text) != ops.end()) {
        advance();
        return t.text;
      }
      return std::nullopt;
    }
    if (t.kind != TokenKind::Name) return std::nullopt;
    if (t.text == "in") {
      advance();
      return "in";
    }
    if (t.text == "not" && at_kw("in", 1)) {
      advance();
      advance();
      return "not in";
    }
    if (t.text == "is") {
      advance();
      if (accept_kw("not")) return "is not";
      return "is";
    }
    return std::nullopt;
  }

  Node* comparison() {
    const std::uint32_t b = here();
    Node* left = bitor_expr();
    Node* cmp = nullptr;
    while (true) {
      const std::uint32_t ob = here();
      auto op = comparison_operator();
      if (!op) break;
      if (!cmp) {
        cmp = tree_.make(NodeKind::Compare, b, 0);
        cmp->kids.push_back(left);
      }
      cmp->kids.push_back(make(NodeKind::CmpOp, ob, *op));
      cmp->kids.push_back(bitor_expr());
    }
    if (!cmp) return left;
    cmp->end = last_end_;
    return cmp;
  }

  template <typename Next>
  Node* binary_level(std::initializer_list<std::string_view> ops, Next next) {
    const std::uint32_t b = here();
    Node* left = next();
    while (peek().kind == TokenKind::Op && std::find(ops.begin(), ops.end(), peek().text) != ops.end()) {
      const Token& op = advance();
      Node* right = next();
      Node* n = make(NodeKind::BinOp, b, op.text);
      n->kids = {left, right};
      left = n;
    }
    return left;
  }

  Node* bitor_expr() { return binary_level({"|"}, [this] { return xor_expr(); }); }
  Node* xor_expr() { return binary_level({"^"}, [this] { return and_expr(); }); }
  Node* and_expr() { return binary_level({"&"}, [this] { return shift_expr(); }); }
  Node* shift_expr() { return binary_level({"<<", ">>"}, [this] { return arith_expr(); }); }
  Node* arith_expr() { return binary_level({"+", "-"}, [this] { return term(); }); }
  Node* term() { return binary_level({"*", "/", "//", "%", "@"}, [this] { return factor(); }); }

  Node* factor() {
    if (at_op("-") || at_op("+") || at_op("~")) {
      DepthGuard guard(*this);
      const std::uint32_t b = here();
      const Token& op = advance();
      Node* operand = factor();
      Node* n = make(NodeKind::UnaryOp, b, op.text);
      n->kids.push_back(operand);
      return n;
    }
    return power();
  }

  Node* power() {
    const std::uint32_t b = here();
    Node* base = await_primary();
    if (at_op("**")) {
      const Token& op = advance();
      Node* exp = factor();
      Node* n = make(NodeKind::BinOp, b, op.text);
      n->kids = {base, exp};
      return n;
    }
    return base;
  }

  Node* await_primary() {
    if (at_kw("await")) {
      const std::uint32_t b = here();
      advance();
      Node* value = primary();
      Node* n = make(NodeKind::Await, b);
      n->kids.push_back(value);
      return n;
    }
    return primary();
  }

  Node* primary() {
    const std::uint32_t b = here();
    Node* node = atom();
    while (true) {
      if (at_op(".")) {
        advance();
        Node* attr = identifier();
        Node* n = make(NodeKind::Attribute, b);
        n->kids = {node, attr};
        node = n;
      } else if (at_op("(")) {
        advance();
        Node* args = tree_.make(NodeKind::Args, last_end_, last_end_);
        arguments_into(args);
        expect_op(")");
        Node* n = make(NodeKind::Call, b);
        n->kids = {node, args};
        node = n;
      } else if (at_op("[")) {
        advance();
        Node* slice = subscript_list();
        expect_op("]");
        Node* n = make(NodeKind::Subscript, b);
        n->kids = {node, slice};
        node = n;
      } else {
        break;
      }
    }
    return node;
  }

  void arguments_into(Node* args) {
    while (!at_op(")")) {
      const std::uint32_t b = here();
      Node* arg = nullptr;
      if (at_op("*") || at_op("**")) {
        arg = starred(true, true);
      } else if ((peek().kind == TokenKind::Name || peek().kind == TokenKind::Metavar) && at_op("=", 1)) {
        Node* name = identifier();
        advance();
        Node* value = in_case_pattern_ ? case_pattern() : test();
        arg = make(NodeKind::Keyword, b);
        arg->kids = {name, value};
      } else if (in_case_pattern_) {
        arg = case_pattern();
      } else {
        arg = named_expression();
        if (at_kw("for") || (at_kw("async") && at_kw("for", 1))) {
          Node* gens = generators();
          Node* g = make(NodeKind::GeneratorExp, b);
          g->kids = {arg, gens};
          arg = g;
        }
      }
      args->kids.push_back(arg);
      if (!accept_op(",")) break;
    }
    if (!args->kids.empty()) fit(args);
  }

  Node* subscript_list() {
    const std::uint32_t b = here();
    Node* first = subscript_item();
    if (!at_op(",")) return first;
    Node* tup = tree_.make(NodeKind::Tuple, b, 0);
    tup->kids.push_back(first);
    while (accept_op(",")) {
      if (at_op("]")) break;
      tup->kids.push_back(subscript_item());
    }
    tup->end = last_end_;
    return tup;
  }

  Node* subscript_item() {
    const std::uint32_t b = here();
    if (at_op("*")) return starred(false);
    Node* lower = nullptr;
    if (!at_op(":")) {
      lower = named_expression();
      if (!at_op(":")) return lower;
    }
    advance();  // ':'
    Node* upper = (at_op(":") || at_op("]") || at_op(",")) ? nullptr : test();
    Node* step = nullptr;
    if (accept_op(":")) step = (at_op("]") || at_op(",")) ? nullptr : test();
    Node* n = make(NodeKind::Slice, b);
    n->kids = {lower, upper, step};
    return n;
  }

  Node* generators() {
    const std::uint32_t b = here();
    Node* gens = tree_.make(NodeKind::Generators, b, 0);
    while (at_kw("for") || (at_kw("async") && at_kw("for", 1))) {
      const std::uint32_t cb = here();
      std::string_view flavor;
      if (accept_kw("async")) flavor = "async";
      expect_kw("for");
      Node* target = target_list();
      expect_kw("in");
      Node* iter = or_test();
      Node* ifs = tree_.make(NodeKind::Ifs, here(), here());
      while (at_kw("if")) {
        advance();
        ifs->kids.push_back(test_no_cond());
      }
      fit(ifs);
      Node* c = make(NodeKind::Comprehension, cb, flavor);
      c->kids = {target, iter, ifs};
      gens->kids.push_back(c);
    }
    gens->end = last_end_;
    return gens;
  }

  bool at_comprehension() const { return at_kw("for") || (at_kw("async") && at_kw("for", 1)); }

  Node* atom() {
    DepthGuard guard(*this);
    const Token& t = peek();
    const std::uint32_t b = t.begin;
    switch (t.kind) {
      case TokenKind::Metavar:
        advance();
        return tree_.make(NodeKind::Metavar, t.begin, t.end, t.text);
      case TokenKind::Number:
        advance();
        return tree_.make(NodeKind::Constant, t.begin, t.end, t.text);
      case TokenKind::String: {
        advance();
        std::uint32_t end = t.end;
        while (at(TokenKind::String)) end = advance().end;
        std::string_view text = tree_.source().substr(b, end - b);
        if (pattern_mode_ && text.find("$$") != std::string_view::npos) {
          std::string unescaped;
          for (std::size_t i = 0; i < text.size(); ++i) {
            unescaped.push_back(text[i]);
            if (text[i] == '$' && i + 1 < text.size() && text[i + 1] == '$') ++i;
          }
          text = tree_.own(std::move(unescaped));
        }
        return tree_.make(NodeKind::Constant, b, end, text);
      }
      case TokenKind::Name: {
        if (t.text == "None" || t.text == "True" || t.text == "False") {
          advance();
          return tree_.make(NodeKind::Constant, t.begin, t.end, t.text);
        }
        if (is_keyword(t.text)) fail("unexpected keyword");
        advance();
        return tree_.make(NodeKind::Name, t.begin, t.end, t.text);
      }
      case TokenKind::Op:
        if (t.text == "...") {
          advance();
          return tree_.make(NodeKind::Constant, t.begin, t.end, t.text);
        }
        if (in_case_pattern_ && (t.text == "(" || t.text == "[")) return sequence_pattern();
        if (t.text == "(") return paren_atom();
        if (t.text == "[") return list_atom();
        if (t.text == "{") return brace_atom();
        break;
      default:
        break;
    }
    fail("expected expression");
  }

  // `(p, ...)` or `[p, ...]` inside a case pattern, where items may bind names.
  Node* sequence_pattern() {
    const std::uint32_t b = here();
    const bool paren = advance().text == "(";
    const std::string_view close = paren ? ")" : "]";
    std::vector<Node*> items;
    bool trailing_comma = false;
    while (!at_op(close)) {
      items.push_back(case_pattern());
      trailing_comma = accept_op(",");
      if (!trailing_comma) break;
    }
    expect_op(close);
    if (paren && items.size() == 1 && !trailing_comma) return items.front();
    Node* n = make(paren ? NodeKind::Tuple : NodeKind::List, b);
    n->kids = std::move(items);
    return n;
  }

  Node* paren_atom() {
    const std::uint32_t b = here();
    advance();
    if (accept_op(")")) return make(NodeKind::Tuple, b);
    if (at_kw("yield")) {
      Node* y = yield_expr();
      expect_op(")");
      return y;
    }
    Node* first = star_or_named();
    if (at_comprehension()) {
      Node* gens = generators();
      expect_op(")");
      Node* g = make(NodeKind::GeneratorExp, b);
      g->kids = {first, gens};
      return g;
    }
    if (accept_op(")")) return first;  // parenthesized expression: transparent
    Node* tup = tree_.make(NodeKind::Tuple, b, 0);
    tup->kids.push_back(first);
    while (accept_op(",")) {
      if (at_op(")")) break;
      tup->kids.push_back(star_or_named());
    }
    expect_op(")");
    tup->end = last_end_;
    return tup;
  }

  Node* list_atom() {
    const std::uint32_t b = here();
    advance();
    Node* list = tree_.make(NodeKind::List, b, 0);
    if (!at_op("]")) {
      Node* first = star_or_named();
      if (at_comprehension()) {
        Node* gens = generators();
        expect_op("]");
        Node* c = make(NodeKind::ListComp, b);
        c->kids = {first, gens};
        return c;
      }
      list->kids.push_back(first);
      while (accept_op(",")) {
        if (at_op("]")) break;
        list->kids.push_back(star_or_named());
      }
    }
    expect_op("]");
    list->end = last_end_;
    return list;
  }

  Node* dict_entry() {
    const std::uint32_t b = here();
    if (at_op("**")) return starred(true);
    Node* key = test();
    expect_op(":");
    Node* value = test();
    Node* item = make(NodeKind::DictItem, b);
    item->kids = {key, value};
    return item;
  }

  Node* brace_atom() {
    const std::uint32_t b = here();
    advance();
    if (accept_op("}")) return make(NodeKind::Dict, b);
    // Decide dict vs set from the first entry.
    if (at_op("**")) return dict_rest(b, dict_entry());
    Node* first = star_or_named();
    if (accept_op(":")) {
      Node* value = test();
      Node* item = make(NodeKind::DictItem, first->begin);
      item->kids = {first, value};
      if (at_comprehension()) {
        Node* gens = generators();
        expect_op("}");
        Node* c = make(NodeKind::DictComp, b);
        c->kids = {item, gens};
        return c;
      }
      return dict_rest(b, item);
    }
    if (at_comprehension()) {
      Node* gens = generators();
      expect_op("}");
      Node* c = make(NodeKind::SetComp, b);
      c->kids = {first, gens};
      return c;
    }
    Node* set = tree_.make(NodeKind::Set, b, 0);
    set->kids.push_back(first);
    while (accept_op(",")) {
      if (at_op("}")) break;
      set->kids.push_back(star_or_named());
    }
    expect_op("}");
    set->end = last_end_;
    return set;
  }

  Node* dict_rest(std::uint32_t b, Node* first) {
    Node* dict = tree_.make(NodeKind::Dict, b, 0);
    dict->kids.push_back(first);
    while (accept_op(",")) {
      if (at_op("}")) break;
      dict->kids.push_back(dict_entry());
    }
    expect_op("}");
    dict->end = last_end_;
    return dict;
  }

  // PEP 695 type parameters carry no decision points; skip them.
  void skip_type_params() {
    if (!at_op("[")) return;
    int depth = 0;
    do {
      if (at_op("[")) ++depth;
      if (at_op("]")) --depth;
      if (peek().kind == TokenKind::EndMarker) fail("unterminated type parameter list");
      advance();
    } while (depth > 0);
  }

  SyntaxTree& tree_;
  bool pattern_mode_;
  bool in_case_pattern_ = false;
  std::vector<const Token*> toks_;
  std::size_t pos_ = 0;
  std::uint32_t last_end_ = 0;
  int depth_ = 0;
};

}  // namespace

std::string_view kind_name(NodeKind kind) {
  switch (kind) {
#define SLOPSCOPE_KIND(k) \
  case NodeKind::k:       \
    return #k;
    SLOPSCOPE_KIND(Module) SLOPSCOPE_KIND(Block) SLOPSCOPE_KIND(ExprStmt) SLOPSCOPE_KIND(Assign)
    SLOPSCOPE_KIND(AugAssign) SLOPSCOPE_KIND(AnnAssign) SLOPSCOPE_KIND(Return) SLOPSCOPE_KIND(Pass)
    SLOPSCOPE_KIND(Break) SLOPSCOPE_KIND(Continue) SLOPSCOPE_KIND(Raise) SLOPSCOPE_KIND(Global)
    SLOPSCOPE_KIND(Nonlocal) SLOPSCOPE_KIND(Del) SLOPSCOPE_KIND(Assert) SLOPSCOPE_KIND(Import)
    SLOPSCOPE_KIND(ImportFrom) SLOPSCOPE_KIND(Alias) SLOPSCOPE_KIND(If) SLOPSCOPE_KIND(For)
    SLOPSCOPE_KIND(While) SLOPSCOPE_KIND(Try) SLOPSCOPE_KIND(Handlers) SLOPSCOPE_KIND(ExceptHandler)
    SLOPSCOPE_KIND(With) SLOPSCOPE_KIND(WithItems) SLOPSCOPE_KIND(WithItem) SLOPSCOPE_KIND(FunctionDef)
    SLOPSCOPE_KIND(ClassDef) SLOPSCOPE_KIND(Decorators) SLOPSCOPE_KIND(Params) SLOPSCOPE_KIND(Param)
    SLOPSCOPE_KIND(Match) SLOPSCOPE_KIND(Cases) SLOPSCOPE_KIND(Case) SLOPSCOPE_KIND(MatchAs)
    SLOPSCOPE_KIND(Name) SLOPSCOPE_KIND(Identifier) SLOPSCOPE_KIND(Metavar) SLOPSCOPE_KIND(Constant)
    SLOPSCOPE_KIND(Attribute) SLOPSCOPE_KIND(Call) SLOPSCOPE_KIND(Args) SLOPSCOPE_KIND(Keyword)
    SLOPSCOPE_KIND(Subscript) SLOPSCOPE_KIND(Slice) SLOPSCOPE_KIND(BinOp) SLOPSCOPE_KIND(UnaryOp)
    SLOPSCOPE_KIND(BoolOp) SLOPSCOPE_KIND(Compare) SLOPSCOPE_KIND(CmpOp) SLOPSCOPE_KIND(IfExp)
    SLOPSCOPE_KIND(Lambda) SLOPSCOPE_KIND(NamedExpr) SLOPSCOPE_KIND(Await) SLOPSCOPE_KIND(Yield)
    SLOPSCOPE_KIND(Starred) SLOPSCOPE_KIND(Tuple) SLOPSCOPE_KIND(List) SLOPSCOPE_KIND(Set)
    SLOPSCOPE_KIND(Dict) SLOPSCOPE_KIND(DictItem) SLOPSCOPE_KIND(ListComp) SLOPSCOPE_KIND(SetComp)
    SLOPSCOPE_KIND(GeneratorExp) SLOPSCOPE_KIND(DictComp) SLOPSCOPE_KIND(Generators)
    SLOPSCOPE_KIND(Comprehension) SLOPSCOPE_KIND(Ifs)
#undef SLOPSCOPE_KIND
  }
  return "?";
}

bool is_statement(NodeKind kind) {
  switch (kind) {
    case NodeKind::ExprStmt:
    case NodeKind::Assign:
    case NodeKind::AugAssign:
    case NodeKind::AnnAssign:
    case NodeKind::Return:
    case NodeKind::Pass:
    case NodeKind::Break:
    case NodeKind::Continue:
    case NodeKind::Raise:
    case NodeKind::Global:
    case NodeKind::Nonlocal:
    case NodeKind::Del:
    case NodeKind::Assert:
    case NodeKind::Import:
    case NodeKind::ImportFrom:
    case NodeKind::If:
    case NodeKind::For:
    case NodeKind::While:
    case NodeKind::Try:
    case NodeKind::With:
    case NodeKind::FunctionDef:
    case NodeKind::ClassDef:
    case NodeKind::Match:
      return true;
    default:
      return false;
  }
}

void SyntaxTree::set_tokens(std::vector<Token> tokens) {
  tokens_ = std::move(tokens);
  code_tokens_.clear();
  for (const Token& t : tokens_) {
    switch (t.kind) {
      case TokenKind::Name:
      case TokenKind::Number:
      case TokenKind::String:
      case TokenKind::Op:
      case TokenKind::Metavar:
        code_tokens_.push_back(t);
        break;
      default:
        break;
    }
  }
}

std::span<const Token> SyntaxTree::code_tokens(std::uint32_t begin, std::uint32_t end) const {
  auto lo = std::lower_bound(code_tokens_.begin(), code_tokens_.end(), begin,
                             [](const Token& t, std::uint32_t off) { return t.begin < off; });
  auto hi = std::lower_bound(lo, code_tokens_.end(), end, [](const Token& t, std::uint32_t off) { return t.begin < off; });
  return {lo, hi};
}

namespace {

std::unique_ptr<SyntaxTree> parse_impl(std::string source, bool pattern_mode) {
  auto tree = std::make_unique<SyntaxTree>(std::move(source));
  tree->set_tokens(tokenize(tree->source(), LexOptions{pattern_mode}));
  Parser parser(*tree, pattern_mode);
  tree->set_root(parser.module());
  return tree;
}

}  // namespace

std::unique_ptr<SyntaxTree> parse_module(std::string source) { return parse_impl(std::move(source), false); }

std::unique_ptr<SyntaxTree> parse_pattern(std::string pattern) { return parse_impl(std::move(pattern), true); }

}  // namespace slopscope::python
