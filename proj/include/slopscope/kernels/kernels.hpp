// SPDX-License-Identifier: Apache-2.0
//
// Data-parallel inner loops of the metric layer. Each kernel has a scalar
// reference and, on x86-64, an AVX2 variant selected at runtime. Variants are
// bit-identical: the scalar mass reduction accumulates in the same four
// interleaved lanes and combines them in the same order as the vector code.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace slopscope::kernels {

enum class SizeTerm : std::uint8_t { None, Sqrt, Linear };

struct MassSums {
  double total = 0.0;  // sum of cc * size(sloc) over all callables
  double high = 0.0;   // same, restricted to cc > cutoff
};

enum class Isa : std::uint8_t { Scalar, Avx2 };

std::string_view isa_name(Isa isa);
bool isa_available(Isa isa);

// ISA used by the dispatching entry points. Defaults to the best available,
// overridable with SLOPSCOPE_SIMD=scalar|avx2 or force_isa().
Isa active_isa();
// Forces an ISA (nullopt restores automatic selection). Throws if the
// requested ISA is unavailable on this host.
void force_isa(std::optional<Isa> isa);

// cc and sloc must have equal length and every value must be < 2^31.
MassSums mass_sums(std::span<const std::uint32_t> cc, std::span<const std::uint32_t> sloc, SizeTerm size,
                   std::uint32_t cutoff);

// popcount((a | b) & mask) over equal-length word spans.
std::uint64_t union_count(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                          std::span<const std::uint64_t> mask);

// popcount(a & mask).
std::uint64_t masked_count(std::span<const std::uint64_t> a, std::span<const std::uint64_t> mask);

namespace scalar {
MassSums mass_sums(std::span<const std::uint32_t> cc, std::span<const std::uint32_t> sloc, SizeTerm size,
                   std::uint32_t cutoff);
std::uint64_t union_count(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                          std::span<const std::uint64_t> mask);
std::uint64_t masked_count(std::span<const std::uint64_t> a, std::span<const std::uint64_t> mask);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define SLOPSCOPE_HAVE_AVX2_KERNELS 1
namespace avx2 {
MassSums mass_sums(std::span<const std::uint32_t> cc, std::span<const std::uint32_t> sloc, SizeTerm size,
                   std::uint32_t cutoff);
std::uint64_t union_count(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                          std::span<const std::uint64_t> mask);
std::uint64_t masked_count(std::span<const std::uint64_t> a, std::span<const std::uint64_t> mask);
}  // namespace avx2
#endif

}  // namespace slopscope::kernels
