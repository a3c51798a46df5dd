// SPDX-License-Identifier: Apache-2.0
#include "slopscope/python/adapter.hpp"

#include <typeinfo>

#include "slopscope/common/error.hpp"
#include "slopscope/python/metrics.hpp"
#include "slopscope/python/pattern.hpp"
#include "slopscope/python/syntax_tree.hpp"

namespace slopscope::python {
namespace {

class ParsedPython final : public source::ParsedSource {
 public:
  explicit ParsedPython(std::unique_ptr<SyntaxTree> tree)
      : tree_(std::move(tree)), code_(python::code_lines(*tree_)) {}

  std::string_view text() const override { return tree_->source(); }
  std::uint32_t line_count() const override { return code_.line_count(); }
  const source::LineSet& code_lines() const override { return code_; }
  source::Position position(std::uint32_t byte_offset) const override {
    return tree_->lines().position(byte_offset);
  }

  std::vector<source::CallableRecord> callables(std::string_view path) const override {
    return enumerate_callables(*tree_, code_, path);
  }
  std::vector<source::NormalizedLine> normalized_lines(bool abstract) const override {
    return normalize_lines(*tree_, abstract);
  }

  std::vector<source::PatternHit> find(const source::CompiledPattern& pattern) const override {
    const auto* structural = dynamic_cast<const StructuralPattern*>(&pattern);
    if (structural == nullptr) throw Error("pattern was compiled for another language");
    return structural->find(*tree_);
  }

 private:
  std::unique_ptr<SyntaxTree> tree_;
  source::LineSet code_;
};

class PythonAdapter final : public source::GrammarAdapter {
 public:
  std::string_view language() const override { return "python"; }
  std::vector<std::string> extensions() const override { return {".py"}; }

  std::unique_ptr<source::ParsedSource> parse(std::string text) const override {
    return std::make_unique<ParsedPython>(parse_module(std::move(text)));
  }

  std::unique_ptr<source::CompiledPattern> compile_pattern(std::string_view pattern) const override {
    return std::make_unique<StructuralPattern>(pattern);
  }
};

}  // namespace

std::unique_ptr<source::GrammarAdapter> make_adapter() { return std::make_unique<PythonAdapter>(); }

}  // namespace slopscope::python
