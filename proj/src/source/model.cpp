// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <bit>
#include <tuple>

#include "slopscope/source/line_set.hpp"
#include "slopscope/source/model.hpp"

namespace slopscope::source {

void LineSet::insert_range(std::uint32_t first, std::uint32_t last) {
  first = std::max<std::uint32_t>(first, 1);
  last = std::min(last, line_count_);
  for (std::uint32_t l = first; l <= last && l != 0; ++l) insert(l);
}

std::uint64_t LineSet::size() const {
  std::uint64_t n = 0;
  for (std::uint64_t w : words_) n += static_cast<std::uint64_t>(std::popcount(w));
  return n;
}

std::uint64_t LineSet::count_in(std::uint32_t first, std::uint32_t last) const {
  std::uint64_t n = 0;
  first = std::max<std::uint32_t>(first, 1);
  last = std::min(last, line_count_);
  for (std::uint32_t l = first; l <= last && l != 0; ++l) n += contains(l) ? 1 : 0;
  return n;
}

std::uint64_t SourceInventory::total_loc() const {
  std::uint64_t n = 0;
  for (const FileRecord& f : files) n += f.loc;
  return n;
}

void canonicalize(SourceInventory& inventory) {
  std::sort(inventory.files.begin(), inventory.files.end(),
            [](const FileRecord& a, const FileRecord& b) { return a.path < b.path; });
  std::sort(inventory.skipped.begin(), inventory.skipped.end(), [](const SkippedFile& a, const SkippedFile& b) {
    return std::tie(a.path, a.reason) < std::tie(b.path, b.reason);
  });
  std::sort(inventory.callables.begin(), inventory.callables.end(),
            [](const CallableRecord& a, const CallableRecord& b) {
              return std::tie(a.file, a.span.start_line, a.span.end_line, a.qualified_name) <
                     std::tie(b.file, b.span.start_line, b.span.end_line, b.qualified_name);
            });
}

SourceInventory merge(std::vector<SourceInventory> parts) {
  SourceInventory out;
  for (SourceInventory& p : parts) {
    std::move(p.files.begin(), p.files.end(), std::back_inserter(out.files));
    std::move(p.callables.begin(), p.callables.end(), std::back_inserter(out.callables));
    std::move(p.skipped.begin(), p.skipped.end(), std::back_inserter(out.skipped));
  }
  canonicalize(out);
  return out;
}

}  // namespace slopscope::source
