// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slopscope/source/adapter.hpp"
#include "slopscope/source/model.hpp"
#include "slopscope/source/scanner.hpp"

namespace slopscope::verbosity {

struct CloneRegion {
  std::uint32_t clone_class_id = 0;
  std::string file;
  source::LineSpan span;          // physical lines
  std::uint32_t first_index = 0;  // position of the first normalized line
  std::uint32_t length = 0;       // normalized lines covered (>= min_window)
  std::uint64_t fingerprint = 0;  // FNV-1a over the normalized text; shared by the class

  bool operator==(const CloneRegion&) const = default;
};

// Normalized line stream of one file.
struct CloneInput {
  std::string path;
  std::vector<source::NormalizedLine> lines;
};

// Type-2 clone detection over line windows.
//
// Every window of `min_window` consecutive normalized lines is keyed by its
// content. Windows whose content occurs at two or more places are duplicated.
// Runs of duplicated windows that shift together (every occurrence of one
// window is followed by an occurrence of the next) are merged into one clone
// class of maximal regions. A physical line is a clone line iff it lies in a
// duplicated window.
//
// Regions are ordered by (file, start line, class id); class ids are assigned
// in order of each class's first region.
std::vector<CloneRegion> detect_clones(const std::vector<CloneInput>& files, std::uint32_t min_window = 6);

// Builds the inputs from a parsed snapshot (in parallel) and runs detection.
// `normalize` false keeps identifier and literal spelling (exact clones only).
std::vector<CloneRegion> detect_clones(const source::ParsedSnapshot& snapshot, std::uint32_t min_window = 6,
                                       bool normalize = true, unsigned threads = 0);

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace slopscope::verbosity
