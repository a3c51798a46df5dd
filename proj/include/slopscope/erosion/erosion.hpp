// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "slopscope/source/model.hpp"

namespace slopscope::erosion {

struct ErosionParams {
  std::uint32_t cc_cutoff = 10;  // callables with cc > cutoff are high-complexity
  double size_exponent = 0.5;    // one of 0, 0.5, 1
  std::size_t max_hotspots = 10;  // 0 keeps every callable
};

struct Hotspot {
  source::CallableRecord callable;
  double mass = 0.0;
};

struct ErosionReport {
  double score = 0.0;
  double total_mass = 0.0;
  double high_cc_mass = 0.0;
  std::uint32_t high_cc_count = 0;
  std::uint32_t max_cc = 0;
  std::vector<Hotspot> hotspots;  // mass descending, then (file, start_line)
};

struct SensitivityRow {
  std::uint32_t cc_cutoff = 0;
  double size_exponent = 0.0;
  double score = 0.0;
};

// Throws UsageError unless the exponent is 0, 0.5 or 1 and the cutoff is >= 1.
void validate(const ErosionParams& params);

// "none", "sqrt" or "linear".
std::string_view size_term_name(double size_exponent);

// cc * sloc^size_exponent. Exponent 0.5 is evaluated with sqrt.
double complexity_mass(std::uint32_t cc, std::uint32_t sloc, double size_exponent);

// Share of complexity mass held by callables above the cutoff; 0 when there
// is no mass at all.
ErosionReport erosion_score(const source::SourceInventory& inventory, const ErosionParams& params = {});
ErosionReport erosion_score(const std::vector<source::CallableRecord>& callables, const ErosionParams& params = {});

inline constexpr std::uint32_t kSweepCutoffs[] = {8, 10, 12};
inline constexpr double kSweepExponents[] = {0.0, 0.5, 1.0};

// Cutoff-major 3x3 grid: {8, 10, 12} x {0, 0.5, 1}.
std::vector<SensitivityRow> erosion_sensitivity(const source::SourceInventory& inventory);

}  // namespace slopscope::erosion
