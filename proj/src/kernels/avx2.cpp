// SPDX-License-Identifier: Apache-2.0
#include "slopscope/kernels/kernels.hpp"

#if defined(SLOPSCOPE_HAVE_AVX2_KERNELS)

#include <immintrin.h>

#include <cmath>

#define SLOPSCOPE_AVX2 __attribute__((target("avx2,popcnt")))

namespace slopscope::kernels::avx2 {
namespace {

SLOPSCOPE_AVX2 inline __m256d load_as_double(const std::uint32_t* p) {
  return _mm256_cvtepi32_pd(_mm_loadu_si128(reinterpret_cast<const __m128i*>(p)));
}

SLOPSCOPE_AVX2 inline std::uint64_t popcount_lanes(__m256i v) {
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), v);
  return static_cast<std::uint64_t>(_mm_popcnt_u64(lanes[0]) + _mm_popcnt_u64(lanes[1]) +
                                    _mm_popcnt_u64(lanes[2]) + _mm_popcnt_u64(lanes[3]));
}

}  // namespace

SLOPSCOPE_AVX2 MassSums mass_sums(std::span<const std::uint32_t> cc, std::span<const std::uint32_t> sloc,
                                  SizeTerm size, std::uint32_t cutoff) {
  const std::size_t n = cc.size();
  const std::size_t body = n - n % 4;
  __m256d total = _mm256_setzero_pd();
  __m256d high = _mm256_setzero_pd();
  const __m256d threshold = _mm256_set1_pd(static_cast<double>(cutoff));
  for (std::size_t i = 0; i < body; i += 4) {
    const __m256d c = load_as_double(cc.data() + i);
    __m256d m = c;
    if (size == SizeTerm::Sqrt) {
      m = _mm256_mul_pd(c, _mm256_sqrt_pd(load_as_double(sloc.data() + i)));
    } else if (size == SizeTerm::Linear) {
      m = _mm256_mul_pd(c, load_as_double(sloc.data() + i));
    } else {
      m = _mm256_mul_pd(c, _mm256_set1_pd(1.0));
    }
    total = _mm256_add_pd(total, m);
    high = _mm256_add_pd(high, _mm256_and_pd(m, _mm256_cmp_pd(c, threshold, _CMP_GT_OQ)));
  }
  alignas(32) double t[4];
  alignas(32) double h[4];
  _mm256_store_pd(t, total);
  _mm256_store_pd(h, high);
  MassSums out;
  out.total = (t[0] + t[1]) + (t[2] + t[3]);
  out.high = (h[0] + h[1]) + (h[2] + h[3]);
  for (std::size_t i = body; i < n; ++i) {
    double s = 1.0;
    if (size == SizeTerm::Sqrt) {
      s = std::sqrt(static_cast<double>(sloc[i]));
    } else if (size == SizeTerm::Linear) {
      s = static_cast<double>(sloc[i]);
    }
    const double m = static_cast<double>(cc[i]) * s;
    out.total += m;
    if (cc[i] > cutoff) out.high += m;
  }
  return out;
}

SLOPSCOPE_AVX2 std::uint64_t union_count(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                                         std::span<const std::uint64_t> mask) {
  const std::size_t n = a.size();
  const std::size_t body = n - n % 4;
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < body; i += 4) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a.data() + i));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b.data() + i));
    const __m256i vm = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(mask.data() + i));
    count += popcount_lanes(_mm256_and_si256(_mm256_or_si256(va, vb), vm));
  }
  for (std::size_t i = body; i < n; ++i) count += static_cast<std::uint64_t>(_mm_popcnt_u64((a[i] | b[i]) & mask[i]));
  return count;
}

SLOPSCOPE_AVX2 std::uint64_t masked_count(std::span<const std::uint64_t> a, std::span<const std::uint64_t> mask) {
  const std::size_t n = a.size();
  const std::size_t body = n - n % 4;
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < body; i += 4) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a.data() + i));
    const __m256i vm = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(mask.data() + i));
    count += popcount_lanes(_mm256_and_si256(va, vm));
  }
  for (std::size_t i = body; i < n; ++i) count += static_cast<std::uint64_t>(_mm_popcnt_u64(a[i] & mask[i]));
  return count;
}

}  // namespace slopscope::kernels::avx2

#endif
