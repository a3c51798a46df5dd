// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace slopscope::source {

// Dense set of 1-based line numbers in [1, line_count].
class LineSet {
 public:
  LineSet() = default;
  explicit LineSet(std::uint32_t line_count) : line_count_(line_count), words_(line_count / 64 + 1, 0) {}

  std::uint32_t line_count() const { return line_count_; }
  bool contains(std::uint32_t line) const {
    return line >= 1 && line <= line_count_ && ((words_[line / 64] >> (line % 64)) & 1u);
  }
  void insert(std::uint32_t line) { words_[line / 64] |= std::uint64_t{1} << (line % 64); }
  void erase(std::uint32_t line) { words_[line / 64] &= ~(std::uint64_t{1} << (line % 64)); }
  // Inserts [first, last] clipped to the valid range.
  void insert_range(std::uint32_t first, std::uint32_t last);
  void fill() { insert_range(1, line_count_); }

  std::uint64_t size() const;
  // Number of members in [first, last].
  std::uint64_t count_in(std::uint32_t first, std::uint32_t last) const;

  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> words() { return words_; }

  bool operator==(const LineSet&) const = default;

 private:
  std::uint32_t line_count_ = 0;
  std::vector<std::uint64_t> words_ = std::vector<std::uint64_t>(1, 0);
};

}  // namespace slopscope::source
