// SPDX-License-Identifier: Apache-2.0
#include "slopscope/verbosity/verbosity.hpp"

#include <map>

#include "slopscope/common/error.hpp"
#include "slopscope/kernels/kernels.hpp"

namespace slopscope::verbosity {
namespace {

void mark(source::LineSet& set, std::uint32_t first, std::uint32_t last, const std::string& file) {
  if (first < 1 || first > last || last > set.line_count()) {
    throw ConsistencyError("line range " + std::to_string(first) + "-" + std::to_string(last) + " outside " + file +
                           " (" + std::to_string(set.line_count()) + " lines)");
  }
  set.insert_range(first, last);
}

}  // namespace

FileLines dense_file(std::string path, std::uint32_t loc) {
  FileLines f{std::move(path), source::LineSet(loc)};
  f.code.fill();
  return f;
}

std::vector<FileLines> file_lines(const source::ParsedSnapshot& snapshot) {
  std::vector<FileLines> out;
  out.reserve(snapshot.files.size());
  for (const auto& f : snapshot.files) out.push_back({f.record.path, f.parsed->code_lines()});
  return out;
}

VerbosityBreakdown verbosity_score(const std::vector<FileLines>& files, const std::vector<RuleMatch>& matches,
                                   const std::vector<CloneRegion>& clones) {
  std::map<std::string_view, std::size_t> slot;
  for (std::size_t i = 0; i < files.size(); ++i) slot.emplace(files[i].path, i);
  auto lookup = [&](const std::string& file) {
    auto it = slot.find(file);
    if (it == slot.end()) throw ConsistencyError("unknown file " + file);
    return it->second;
  };

  std::vector<source::LineSet> flagged;
  std::vector<source::LineSet> cloned;
  flagged.reserve(files.size());
  cloned.reserve(files.size());
  for (const auto& f : files) {
    flagged.emplace_back(f.code.line_count());
    cloned.emplace_back(f.code.line_count());
  }
  for (const auto& m : matches) mark(flagged[lookup(m.file)], m.first_line, m.last_line, m.file);
  for (const auto& c : clones) mark(cloned[lookup(c.file)], c.span.start_line, c.span.end_line, c.file);

  VerbosityBreakdown b;
  for (std::size_t i = 0; i < files.size(); ++i) {
    const auto code = files[i].code.words();
    b.loc += kernels::masked_count(code, code);
    b.flagged_lines += kernels::masked_count(flagged[i].words(), code);
    b.clone_lines += kernels::masked_count(cloned[i].words(), code);
    b.union_lines += kernels::union_count(flagged[i].words(), cloned[i].words(), code);
  }
  if (b.loc > 0) {
    const auto loc = static_cast<double>(b.loc);
    b.score = static_cast<double>(b.union_lines) / loc;
    b.violation_density = static_cast<double>(b.flagged_lines) / loc;
    b.clone_ratio = static_cast<double>(b.clone_lines) / loc;
  }
  return b;
}

}  // namespace slopscope::verbosity
