// SPDX-License-Identifier: Apache-2.0
#include <bit>
#include <cmath>

#include "slopscope/kernels/kernels.hpp"

namespace slopscope::kernels::scalar {
namespace {

inline double size_factor(std::uint32_t sloc, SizeTerm size) {
  switch (size) {
    case SizeTerm::None:
      return 1.0;
    case SizeTerm::Sqrt:
      return std::sqrt(static_cast<double>(sloc));
    case SizeTerm::Linear:
      return static_cast<double>(sloc);
  }
  return 1.0;
}

}  // namespace

MassSums mass_sums(std::span<const std::uint32_t> cc, std::span<const std::uint32_t> sloc, SizeTerm size,
                   std::uint32_t cutoff) {
  const std::size_t n = cc.size();
  const std::size_t body = n - n % 4;
  double total[4] = {0.0, 0.0, 0.0, 0.0};
  double high[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < body; i += 4) {
    for (std::size_t lane = 0; lane < 4; ++lane) {
      const double m = static_cast<double>(cc[i + lane]) * size_factor(sloc[i + lane], size);
      total[lane] += m;
      high[lane] += cc[i + lane] > cutoff ? m : 0.0;
    }
  }
  MassSums out;
  out.total = (total[0] + total[1]) + (total[2] + total[3]);
  out.high = (high[0] + high[1]) + (high[2] + high[3]);
  for (std::size_t i = body; i < n; ++i) {
    const double m = static_cast<double>(cc[i]) * size_factor(sloc[i], size);
    out.total += m;
    if (cc[i] > cutoff) out.high += m;
  }
  return out;
}

std::uint64_t union_count(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                          std::span<const std::uint64_t> mask) {
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += static_cast<std::uint64_t>(std::popcount((a[i] | b[i]) & mask[i]));
  return n;
}

std::uint64_t masked_count(std::span<const std::uint64_t> a, std::span<const std::uint64_t> mask) {
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += static_cast<std::uint64_t>(std::popcount(a[i] & mask[i]));
  return n;
}

}  // namespace slopscope::kernels::scalar
