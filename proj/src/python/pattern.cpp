// SPDX-License-Identifier: Apache-2.0
#include "slopscope/python/pattern.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "slopscope/common/error.hpp"

namespace slopscope::python {
namespace {

bool is_metavar(const Node* n) { return n != nullptr && n->kind == NodeKind::Metavar; }

bool is_optional(const Node* n) { return is_metavar(n) && n->text.ends_with('?'); }

std::string_view metavar_name(const Node* n) {
  std::string_view t = n->text;
  if (t.ends_with('?')) t.remove_suffix(1);
  return t;
}

// `$S` on a line by itself: stands for one whole statement.
const Node* statement_metavar(const Node* n) {
  if (n != nullptr && n->kind == NodeKind::ExprStmt && is_metavar(n->kids[0])) return n->kids[0];
  return nullptr;
}

bool is_expression(NodeKind k) {
  switch (k) {
    case NodeKind::Name:
    case NodeKind::Constant:
    case NodeKind::Attribute:
    case NodeKind::Call:
    case NodeKind::Subscript:
    case NodeKind::BinOp:
    case NodeKind::UnaryOp:
    case NodeKind::BoolOp:
    case NodeKind::Compare:
    case NodeKind::IfExp:
    case NodeKind::Lambda:
    case NodeKind::NamedExpr:
    case NodeKind::Await:
    case NodeKind::Yield:
    case NodeKind::Starred:
    case NodeKind::Tuple:
    case NodeKind::List:
    case NodeKind::Set:
    case NodeKind::Dict:
    case NodeKind::ListComp:
    case NodeKind::SetComp:
    case NodeKind::GeneratorExp:
    case NodeKind::DictComp:
      return true;
    default:
      return false;
  }
}

struct Binding {
  std::string_view name;
  const Node* node;
};

class Matcher {
 public:
  explicit Matcher(const SyntaxTree& src) : src_(src) {}

  std::vector<Binding>& bindings() { return bindings_; }

  bool match(const Node* p, const Node* s) {
    if (p == nullptr) return s == nullptr;
    if (is_metavar(p)) {
      if (s == nullptr) return is_optional(p);
      return bind(p, s);
    }
    if (const Node* mv = statement_metavar(p)) {
      if (s == nullptr) return is_optional(mv);
      return is_statement(s->kind) && bind(mv, s);
    }
    if (s == nullptr || p->kind != s->kind || p->text != s->text) return false;
    return match_list(p->kids, 0, s->kids, 0);
  }

  template <class PatternList, class SourceList>
  bool match_list(const PatternList& p, std::size_t i, const SourceList& s, std::size_t j) {
    if (i == p.size()) return j == s.size();
    const Node* pk = p[i];
    const std::size_t mark = bindings_.size();
    if (is_optional(pk) || is_optional(statement_metavar(pk))) {
      if (j < s.size()) {
        if (match(pk, s[j]) && match_list(p, i + 1, s, j + 1)) return true;
        bindings_.resize(mark);
      }
      // Absent: skip the pattern element (and a null source slot, if any).
      if (j < s.size() && s[j] == nullptr) return match_list(p, i + 1, s, j + 1);
      return match_list(p, i + 1, s, j);
    }
    if (j == s.size()) return false;
    if (match(pk, s[j]) && match_list(p, i + 1, s, j + 1)) return true;
    bindings_.resize(mark);
    return false;
  }

 private:
  bool bind(const Node* metavar, const Node* s) {
    const std::string_view name = metavar_name(metavar);
    for (const Binding& b : bindings_) {
      if (b.name == name) {
        if (!same_text(*b.node, *s)) return false;
        break;
      }
    }
    bindings_.push_back({name, s});
    return true;
  }

  bool same_text(const Node& a, const Node& b) const {
    auto ta = src_.code_tokens(a.begin, a.end);
    auto tb = src_.code_tokens(b.begin, b.end);
    if (ta.size() != tb.size()) return false;
    for (std::size_t i = 0; i < ta.size(); ++i) {
      if (ta[i].text != tb[i].text) return false;
    }
    return true;
  }

  const SyntaxTree& src_;
  std::vector<Binding> bindings_;
};

source::TextRange range_of(const SyntaxTree& tree, std::uint32_t begin, std::uint32_t end) {
  return {tree.lines().position(begin), tree.lines().position(end)};
}

source::PatternHit make_hit(const SyntaxTree& tree, std::uint32_t begin, std::uint32_t end,
                            const std::vector<Binding>& bindings) {
  source::PatternHit hit;
  hit.range = range_of(tree, begin, end);
  hit.text = std::string(tree.source().substr(begin, end - begin));
  for (const Binding& b : bindings) {
    auto key = std::string(b.name);
    auto [it, inserted] = hit.captures.try_emplace(key);
    if (inserted) it->second.text = std::string(tree.text_of(*b.node));
    it->second.ranges.push_back(range_of(tree, b.node->begin, b.node->end));
  }
  for (auto& [name, cap] : hit.captures) {
    std::sort(cap.ranges.begin(), cap.ranges.end());
    cap.ranges.erase(std::unique(cap.ranges.begin(), cap.ranges.end()), cap.ranges.end());
  }
  return hit;
}

}  // namespace

StructuralPattern::StructuralPattern(std::string_view pattern) {
  tree_ = parse_pattern(std::string(pattern));
  const Node* block = tree_->root()->kids[0];
  if (block->kids.empty()) throw ParseError(1, "pattern is empty");
  if (block->kids.size() == 1) {
    const Node* stmt = block->kids[0];
    root_ = (stmt->kind == NodeKind::ExprStmt && !is_metavar(stmt->kids[0])) ? stmt->kids[0] : stmt;
    if (is_optional(statement_metavar(stmt))) throw ParseError(1, "pattern cannot be a lone optional metavariable");
  } else {
    for (const Node* stmt : block->kids) {
      sequence_.push_back(stmt);
      if (is_optional(statement_metavar(stmt))) ++optional_statements_;
    }
    if (optional_statements_ == sequence_.size()) throw ParseError(1, "pattern matches nothing");
  }
}

bool StructuralPattern::matches(const SyntaxTree& tree, const Node& candidate) const {
  if (root_ == nullptr) return false;
  Matcher m(tree);
  return m.match(root_, &candidate);
}

std::vector<source::PatternHit> StructuralPattern::find(const SyntaxTree& tree) const {
  std::vector<source::PatternHit> hits;
  Matcher m(tree);
  if (root_ != nullptr) {
    const bool any_expression = is_metavar(root_);
    const bool any_statement = statement_metavar(root_) != nullptr;
    walk(tree.root(), [&](const Node& s) {
      if (any_expression && !is_expression(s.kind)) return;
      if (any_statement && !is_statement(s.kind)) return;
      if (!any_expression && !any_statement && s.kind != root_->kind) return;
      m.bindings().clear();
      if (m.match(root_, &s)) hits.push_back(make_hit(tree, s.begin, s.end, m.bindings()));
    });
  } else {
    const std::size_t max_len = sequence_.size();
    const std::size_t min_len = sequence_.size() - optional_statements_;
    walk(tree.root(), [&](const Node& s) {
      if (s.kind != NodeKind::Block) return;
      const std::size_t n = s.kids.size();
      for (std::size_t start = 0; start < n; ++start) {
        for (std::size_t len = min_len; len <= max_len && start + len <= n; ++len) {
          if (len == 0) continue;
          std::vector<Node*> window(s.kids.begin() + static_cast<std::ptrdiff_t>(start),
                                    s.kids.begin() + static_cast<std::ptrdiff_t>(start + len));
          m.bindings().clear();
          if (m.match_list(sequence_, 0, window, 0)) {
            hits.push_back(make_hit(tree, window.front()->begin, window.back()->end, m.bindings()));
          }
        }
      }
    });
  }
  std::sort(hits.begin(), hits.end(), [](const source::PatternHit& a, const source::PatternHit& b) {
    return a.range < b.range;
  });
  hits.erase(std::unique(hits.begin(), hits.end(),
                         [](const source::PatternHit& a, const source::PatternHit& b) { return a.range == b.range; }),
             hits.end());
  return hits;
}

}  // namespace slopscope::python
