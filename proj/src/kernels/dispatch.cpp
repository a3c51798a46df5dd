// SPDX-License-Identifier: Apache-2.0
#include <atomic>
#include <cstdlib>
#include <string>

#include "slopscope/common/error.hpp"
#include "slopscope/kernels/kernels.hpp"

namespace slopscope::kernels {
namespace {

Isa detect() {
  if (const char* env = std::getenv("SLOPSCOPE_SIMD")) {
    const std::string v(env);
    if (v == "scalar") return Isa::Scalar;
    if (v == "avx2" && isa_available(Isa::Avx2)) return Isa::Avx2;
  }
  return isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<int>& forced() {
  static std::atomic<int> value{-1};
  return value;
}

}  // namespace

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) {
  if (isa == Isa::Scalar) return true;
#if defined(SLOPSCOPE_HAVE_AVX2_KERNELS)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
#else
  return false;
#endif
}

Isa active_isa() {
  const int f = forced().load(std::memory_order_relaxed);
  if (f >= 0) return static_cast<Isa>(f);
  static const Isa detected = detect();
  return detected;
}

void force_isa(std::optional<Isa> isa) {
  if (isa && !isa_available(*isa)) throw Error("ISA " + std::string(isa_name(*isa)) + " is not available");
  forced().store(isa ? static_cast<int>(*isa) : -1, std::memory_order_relaxed);
}

MassSums mass_sums(std::span<const std::uint32_t> cc, std::span<const std::uint32_t> sloc, SizeTerm size,
                   std::uint32_t cutoff) {
#if defined(SLOPSCOPE_HAVE_AVX2_KERNELS)
  if (active_isa() == Isa::Avx2) return avx2::mass_sums(cc, sloc, size, cutoff);
#endif
  return scalar::mass_sums(cc, sloc, size, cutoff);
}

std::uint64_t union_count(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                          std::span<const std::uint64_t> mask) {
#if defined(SLOPSCOPE_HAVE_AVX2_KERNELS)
  if (active_isa() == Isa::Avx2) return avx2::union_count(a, b, mask);
#endif
  return scalar::union_count(a, b, mask);
}

std::uint64_t masked_count(std::span<const std::uint64_t> a, std::span<const std::uint64_t> mask) {
#if defined(SLOPSCOPE_HAVE_AVX2_KERNELS)
  if (active_isa() == Isa::Avx2) return avx2::masked_count(a, mask);
#endif
  return scalar::masked_count(a, mask);
}

}  // namespace slopscope::kernels
