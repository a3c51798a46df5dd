// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slopscope/source/line_set.hpp"
#include "slopscope/source/scanner.hpp"
#include "slopscope/verbosity/clones.hpp"
#include "slopscope/verbosity/rules.hpp"

namespace slopscope::verbosity {

struct VerbosityBreakdown {
  double score = 0.0;  // union_lines / loc
  std::uint64_t flagged_lines = 0;
  std::uint64_t clone_lines = 0;
  std::uint64_t union_lines = 0;
  std::uint64_t loc = 0;
  double violation_density = 0.0;  // flagged_lines / loc
  double clone_ratio = 0.0;        // clone_lines / loc
};

// The lines of one file that count toward LOC.
struct FileLines {
  std::string path;
  source::LineSet code;
};

// A file whose lines 1..loc are all code.
FileLines dense_file(std::string path, std::uint32_t loc);

std::vector<FileLines> file_lines(const source::ParsedSnapshot& snapshot);

// Deduplicated verbosity: each (file, code line) hit by any rule match or
// clone region counts once. Lines outside a file's code set (comments,
// blanks) are not counted. Throws ConsistencyError when a match or region
// names an unknown file or a line past the end of its file.
VerbosityBreakdown verbosity_score(const std::vector<FileLines>& files, const std::vector<RuleMatch>& matches,
                                   const std::vector<CloneRegion>& clones);

}  // namespace slopscope::verbosity
