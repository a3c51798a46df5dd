// SPDX-License-Identifier: Apache-2.0
#include "slopscope/erosion/erosion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "slopscope/common/error.hpp"
#include "slopscope/kernels/kernels.hpp"

namespace slopscope::erosion {
namespace {

kernels::SizeTerm size_term(double exponent) {
  if (exponent == 0.0) return kernels::SizeTerm::None;
  if (exponent == 0.5) return kernels::SizeTerm::Sqrt;
  if (exponent == 1.0) return kernels::SizeTerm::Linear;
  throw UsageError("size exponent must be 0, 0.5 or 1, got " + std::to_string(exponent));
}

}  // namespace

void validate(const ErosionParams& params) {
  if (params.cc_cutoff < 1) throw UsageError("cc cutoff must be at least 1");
  size_term(params.size_exponent);
}

std::string_view size_term_name(double size_exponent) {
  switch (size_term(size_exponent)) {
    case kernels::SizeTerm::None:
      return "none";
    case kernels::SizeTerm::Sqrt:
      return "sqrt";
    case kernels::SizeTerm::Linear:
      return "linear";
  }
  return "none";
}

double complexity_mass(std::uint32_t cc, std::uint32_t sloc, double size_exponent) {
  double size = 0.0;
  if (size_exponent == 0.0) {
    size = 1.0;
  } else if (size_exponent == 0.5) {
    size = std::sqrt(static_cast<double>(sloc));
  } else if (size_exponent == 1.0) {
    size = static_cast<double>(sloc);
  } else {
    size = std::pow(static_cast<double>(sloc), size_exponent);
  }
  return static_cast<double>(cc) * size;
}

ErosionReport erosion_score(const std::vector<source::CallableRecord>& callables, const ErosionParams& params) {
  validate(params);
  std::vector<std::uint32_t> cc(callables.size());
  std::vector<std::uint32_t> sloc(callables.size());
  ErosionReport report;
  for (std::size_t i = 0; i < callables.size(); ++i) {
    cc[i] = callables[i].cc;
    sloc[i] = callables[i].sloc;
    report.max_cc = std::max(report.max_cc, cc[i]);
    if (cc[i] > params.cc_cutoff) ++report.high_cc_count;
  }
  const kernels::MassSums sums = kernels::mass_sums(cc, sloc, size_term(params.size_exponent), params.cc_cutoff);
  report.total_mass = sums.total;
  report.high_cc_mass = sums.high;
  report.score = sums.total > 0.0 ? sums.high / sums.total : 0.0;

  std::vector<Hotspot> ranked;
  ranked.reserve(callables.size());
  for (const auto& c : callables) ranked.push_back({c, complexity_mass(c.cc, c.sloc, params.size_exponent)});
  auto before = [](const Hotspot& a, const Hotspot& b) {
    if (a.mass != b.mass) return a.mass > b.mass;
    if (a.callable.file != b.callable.file) return a.callable.file < b.callable.file;
    if (a.callable.span.start_line != b.callable.span.start_line) {
      return a.callable.span.start_line < b.callable.span.start_line;
    }
    return a.callable.qualified_name < b.callable.qualified_name;
  };
  const std::size_t keep = params.max_hotspots == 0 ? ranked.size() : std::min(params.max_hotspots, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep), ranked.end(), before);
  ranked.resize(keep);
  report.hotspots = std::move(ranked);
  return report;
}

ErosionReport erosion_score(const source::SourceInventory& inventory, const ErosionParams& params) {
  return erosion_score(inventory.callables, params);
}

std::vector<SensitivityRow> erosion_sensitivity(const source::SourceInventory& inventory) {
  std::vector<SensitivityRow> rows;
  for (std::uint32_t cutoff : kSweepCutoffs) {
    for (double exponent : kSweepExponents) {
      ErosionParams params;
      params.cc_cutoff = cutoff;
      params.size_exponent = exponent;
      params.max_hotspots = 1;
      rows.push_back({cutoff, exponent, erosion_score(inventory, params).score});
    }
  }
  return rows;
}

}  // namespace slopscope::erosion
