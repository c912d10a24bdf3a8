// Compiled with -mavx2; only reached after a runtime CPU check.

#include <immintrin.h>

#include "linsys/kernels.hpp"

namespace linsys::kernels {

// With p < 2^16, t = dst + s*src < p^2 < 2^32. Barrett with M = floor(2^32/p)
// gives q = floor(t*M / 2^32) within one of floor(t/p), so t - q*p < 2p.
void axpy_mod_avx2(std::uint32_t* dst, const std::uint32_t* src, std::uint32_t s, std::size_t n,
                   std::uint32_t p) noexcept {
  const std::uint32_t barrett = static_cast<std::uint32_t>((std::uint64_t{1} << 32) / p);
  const __m256i vs = _mm256_set1_epi32(static_cast<int>(s));
  const __m256i vp = _mm256_set1_epi32(static_cast<int>(p));
  const __m256i vm = _mm256_set1_epi32(static_cast<int>(barrett));
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
    __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
    __m256i t = _mm256_add_epi32(a, _mm256_mullo_epi32(b, vs));
    __m256i even = _mm256_srli_epi64(_mm256_mul_epu32(t, vm), 32);
    __m256i odd = _mm256_mul_epu32(_mm256_srli_epi64(t, 32), vm);
    __m256i q = _mm256_blend_epi32(even, odd, 0xAA);
    __m256i r = _mm256_sub_epi32(t, _mm256_mullo_epi32(q, vp));
    r = _mm256_min_epu32(r, _mm256_sub_epi32(r, vp));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), r);
  }
  if (i < n) axpy_mod_scalar(dst + i, src + i, s, n - i, p);
}

}  // namespace linsys::kernels
