// SPDX-License-Identifier: Apache-2.0
#include "slopscope/python/lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "slopscope/common/error.hpp"

namespace slopscope::python {
namespace {

constexpr std::array<std::string_view, 35> kKeywords = {
    "False", "None",   "True",    "and",      "as",       "assert", "async", "await", "break",
    "class", "continue", "def",   "del",      "elif",     "else",   "except", "finally", "for",
    "from",  "global", "if",      "import",   "in",       "is",     "lambda", "nonlocal", "not",
    "or",    "pass",   "raise",   "return",   "try",      "while",  "with",  "yield"};

// Longest first within each length class.
constexpr std::array<std::string_view, 25> kMultiCharOps = {
    "**=", "//=", ">>=", "<<=", "...", "->", ":=", "**", "//", "<<", ">>", "<=", ">=",
    "==",  "!=",  "+=",  "-=",  "*=",  "/=", "%=", "&=", "|=", "^=", "@=", "<>"};

constexpr std::string_view kSingleCharOps = "+-*/%@&|^~<>()[]{},:;.=!";

bool is_ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool is_ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

bool is_string_prefix(std::string_view word) {
  if (word.size() > 2) return false;
  std::string lower;
  for (char c : word) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return lower == "r" || lower == "u" || lower == "b" || lower == "f" || lower == "br" || lower == "rb" ||
         lower == "fr" || lower == "rf";
}

class Lexer {
 public:
  Lexer(std::string_view src, LexOptions options) : src_(src), options_(options) {}

  std::vector<Token> run() {
    indents_.push_back(0);
    while (true) {
      if (at_line_start_ && depth_ == 0) {
        if (!handle_indentation()) continue;
      }
      skip_inline_whitespace();
      if (pos_ >= src_.size()) break;
      const auto c = static_cast<unsigned char>(src_[pos_]);
      if (c == '#') {
        lex_comment();
      } else if (c == '\\' && is_newline_at(pos_ + 1)) {
        pos_ += 1;
        consume_newline();
      } else if (c == '\n' || c == '\r') {
        lex_newline();
      } else if (is_ident_start(c)) {
        lex_name_or_prefixed_string();
      } else if (std::isdigit(c) || (c == '.' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        lex_number();
      } else if (c == '"' || c == '\'') {
        lex_string(pos_);
      } else if (c == '$' && options_.pattern_mode) {
        lex_metavar();
      } else {
        lex_operator();
      }
    }
    if (line_has_content_) emit(TokenKind::Newline, pos_, pos_);
    while (indents_.size() > 1) {
      indents_.pop_back();
      emit(TokenKind::Dedent, pos_, pos_);
    }
    emit(TokenKind::EndMarker, pos_, pos_);
    return std::move(tokens_);
  }

 private:
  bool is_newline_at(std::size_t p) const { return p < src_.size() && (src_[p] == '\n' || src_[p] == '\r'); }

  void consume_newline() {
    if (src_[pos_] == '\r' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '\n') ++pos_;
    ++pos_;
    ++line_;
  }

  void emit(TokenKind kind, std::size_t begin, std::size_t end, std::uint32_t start_line = 0) {
    const std::uint32_t first = start_line == 0 ? line_ : start_line;
    tokens_.push_back(Token{kind, static_cast<std::uint32_t>(begin), static_cast<std::uint32_t>(end), first, line_,
                            src_.substr(begin, end - begin)});
  }

  // Returns false when the line was blank or comment-only and has been
  // consumed entirely.
  bool handle_indentation() {
    std::uint32_t col = 0;
    std::size_t p = pos_;
    while (p < src_.size()) {
      const char c = src_[p];
      if (c == ' ') {
        ++col;
      } else if (c == '\t') {
        col = (col / 8 + 1) * 8;
      } else if (c == '\f') {
        col = 0;
      } else {
        break;
      }
      ++p;
    }
    pos_ = p;
    if (p >= src_.size()) {
      at_line_start_ = false;
      return true;
    }
    const char c = src_[p];
    if (c == '#' || c == '\n' || c == '\r' || (c == '\\' && is_newline_at(p + 1))) {
      if (c == '#') lex_comment();
      if (pos_ < src_.size() && is_newline_at(pos_)) {
        const std::size_t b = pos_;
        consume_newline();
        tokens_.push_back(Token{TokenKind::Nl, static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(pos_),
                                line_ - 1, line_ - 1, src_.substr(b, pos_ - b)});
        return false;
      }
      if (pos_ < src_.size() && src_[pos_] == '\\') {
        // Backslash continuation on an otherwise empty line.
        pos_ += 1;
        consume_newline();
        return false;
      }
      at_line_start_ = false;
      return true;
    }
    at_line_start_ = false;
    if (col > indents_.back()) {
      indents_.push_back(col);
      emit(TokenKind::Indent, pos_, pos_);
    } else {
      while (col < indents_.back()) {
        indents_.pop_back();
        emit(TokenKind::Dedent, pos_, pos_);
      }
      if (col != indents_.back()) throw ParseError(line_, "unindent does not match any outer indentation level");
    }
    return true;
  }

  void skip_inline_whitespace() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\f')) ++pos_;
  }

  void lex_comment() {
    const std::size_t b = pos_;
    while (pos_ < src_.size() && src_[pos_] != '\n' && src_[pos_] != '\r') ++pos_;
    emit(TokenKind::Comment, b, pos_);
  }

  void lex_newline() {
    const std::size_t b = pos_;
    const std::uint32_t l = line_;
    consume_newline();
    const bool logical = depth_ == 0 && line_has_content_;
    tokens_.push_back(Token{logical ? TokenKind::Newline : TokenKind::Nl, static_cast<std::uint32_t>(b),
                            static_cast<std::uint32_t>(pos_), l, l, src_.substr(b, pos_ - b)});
    if (depth_ == 0) {
      at_line_start_ = true;
      line_has_content_ = false;
    }
  }

  void lex_name_or_prefixed_string() {
    const std::size_t b = pos_;
    while (pos_ < src_.size() && is_ident_char(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::string_view word = src_.substr(b, pos_ - b);
    if (pos_ < src_.size() && (src_[pos_] == '"' || src_[pos_] == '\'') && is_string_prefix(word)) {
      lex_string(b);
      return;
    }
    line_has_content_ = true;
    emit(TokenKind::Name, b, pos_);
  }

  void lex_number() {
    const std::size_t b = pos_;
    const bool hex_like = src_[pos_] == '0' && pos_ + 1 < src_.size() &&
                          std::string_view("xXoObB").find(src_[pos_ + 1]) != std::string_view::npos;
    while (pos_ < src_.size()) {
      const auto c = static_cast<unsigned char>(src_[pos_]);
      if (std::isalnum(c) || c == '_' || c == '.') {
        ++pos_;
      } else if ((c == '+' || c == '-') && !hex_like && (src_[pos_ - 1] == 'e' || src_[pos_ - 1] == 'E')) {
        ++pos_;
      } else {
        break;
      }
    }
    line_has_content_ = true;
    emit(TokenKind::Number, b, pos_);
  }

  void lex_string(std::size_t begin) {
    const std::uint32_t start_line = line_;
    const char quote = src_[pos_];
    const bool triple = pos_ + 2 < src_.size() && src_[pos_ + 1] == quote && src_[pos_ + 2] == quote;
    pos_ += triple ? 3 : 1;
    while (true) {
      if (pos_ >= src_.size()) throw ParseError(start_line, "unterminated string literal");
      const char c = src_[pos_];
      if (c == '\\') {
        ++pos_;
        if (pos_ < src_.size()) {
          if (is_newline_at(pos_)) {
            consume_newline();
          } else {
            ++pos_;
          }
        }
        continue;
      }
      if (c == '\n' || c == '\r') {
        if (!triple) throw ParseError(start_line, "unterminated string literal");
        consume_newline();
        continue;
      }
      if (c == quote) {
        if (!triple) {
          ++pos_;
          break;
        }
        if (pos_ + 2 < src_.size() && src_[pos_ + 1] == quote && src_[pos_ + 2] == quote) {
          pos_ += 3;
          break;
        }
      }
      ++pos_;
    }
    line_has_content_ = true;
    emit(TokenKind::String, begin, pos_, start_line);
  }

  void lex_metavar() {
    const std::size_t b = pos_;
    ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '$') {
      // `$$` is a literal dollar; it can only ever match a literal `$`.
      ++pos_;
      line_has_content_ = true;
      emit(TokenKind::Name, b, pos_);
      return;
    }
    const auto first = pos_ < src_.size() ? static_cast<unsigned char>(src_[pos_]) : 0;
    if (!(std::isupper(first) || first == '_')) throw ParseError(line_, "metavariable names must match $[A-Z_][A-Z0-9_]*");
    while (pos_ < src_.size()) {
      const auto c = static_cast<unsigned char>(src_[pos_]);
      if (!(std::isupper(c) || std::isdigit(c) || c == '_')) break;
      ++pos_;
    }
    if (pos_ < src_.size() && src_[pos_] == '?') ++pos_;
    line_has_content_ = true;
    emit(TokenKind::Metavar, b, pos_);
  }

  void lex_operator() {
    const std::size_t b = pos_;
    const std::string_view rest = src_.substr(pos_);
    for (std::string_view op : kMultiCharOps) {
      if (rest.starts_with(op)) {
        pos_ += op.size();
        line_has_content_ = true;
        emit(TokenKind::Op, b, pos_);
        return;
      }
    }
    const char c = src_[pos_];
    if (kSingleCharOps.find(c) == std::string_view::npos) {
      throw ParseError(line_, std::string("unexpected character '") + c + "'");
    }
    if (c == '(' || c == '[' || c == '{') {
      ++depth_;
    } else if (c == ')' || c == ']' || c == '}') {
      if (depth_ > 0) --depth_;
    }
    ++pos_;
    line_has_content_ = true;
    emit(TokenKind::Op, b, pos_);
  }

  std::string_view src_;
  LexOptions options_;
  std::size_t pos_ = 0;
  std::uint32_t line_ = 1;
  int depth_ = 0;
  bool at_line_start_ = true;
  bool line_has_content_ = false;
  std::vector<std::uint32_t> indents_;
  std::vector<Token> tokens_;
};

}  // namespace

bool is_keyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

std::vector<Token> tokenize(std::string_view src, LexOptions options) { return Lexer(src, options).run(); }

}  // namespace slopscope::python
