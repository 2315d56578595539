// AVX2 variant of the Horner row kernel. Compiled with -mavx2 in its own
// translation unit; only reached after the runtime cpuid check in dispatch.
#if defined(__x86_64__) || defined(_M_X64)

#include "mont32.hpp"

#include <immintrin.h>

#include <cstddef>
#include <utility>

namespace kimloci::kernels {

namespace {

// Lazy Montgomery multiply on four 64-bit lanes (operands live in the low 32
// bits, < 4p). Three vpmuludq per step; the AND keeps m to 32 bits.
inline __m256i mmul(__m256i a, __m256i b, __m256i vp, __m256i vpinv, __m256i lowmask) {
    __m256i t = _mm256_mul_epu32(a, b);
    __m256i m = _mm256_and_si256(_mm256_mul_epu32(t, vpinv), lowmask);
    __m256i mp = _mm256_mul_epu32(m, vp);
    return _mm256_srli_epi64(_mm256_add_epi64(t, mp), 32);
}

// 14 chains x 4 lanes: enough independent work to cover the multiply latency
// while the accumulators still fit in registers (points are reloaded from L1).
constexpr std::size_t chains = 14;
constexpr std::size_t block = chains * 4;

template <std::size_t... J>
inline void step(__m256i (&acc)[chains], const std::uint64_t* z, __m256i vc,
                 __m256i vp, __m256i vpinv, __m256i lowmask, std::index_sequence<J...>) {
    ((acc[J] = _mm256_add_epi64(
          mmul(acc[J], _mm256_loadu_si256(reinterpret_cast<const __m256i*>(z + 4 * J)),
               vp, vpinv, lowmask),
          vc)),
     ...);
}

} // namespace

void row_eval_avx2(const Mont32& mont, const std::uint32_t* cm, std::size_t n,
                   const std::uint64_t* zm, std::size_t m, std::uint32_t* out) {
    const __m256i vp = _mm256_set1_epi64x(static_cast<long long>(mont.p));
    const __m256i vpinv = _mm256_set1_epi64x(static_cast<long long>(mont.pinv));
    const __m256i lowmask = _mm256_set1_epi64x(0xFFFFFFFFll);
    alignas(32) std::uint64_t lanes[block];
    std::size_t i = 0;
    for (; i + block <= m; i += block) {
        __m256i acc[chains];
        const __m256i top = _mm256_set1_epi64x(static_cast<long long>(cm[n - 1]));
        for (std::size_t j = 0; j < chains; ++j) acc[j] = top;
        for (std::size_t k = n - 1; k-- > 0;) {
            const __m256i vc = _mm256_set1_epi64x(static_cast<long long>(cm[k]));
            step(acc, zm + i, vc, vp, vpinv, lowmask, std::make_index_sequence<chains>{});
        }
        for (std::size_t j = 0; j < chains; ++j) {
            _mm256_store_si256(reinterpret_cast<__m256i*>(lanes + 4 * j), acc[j]);
        }
        for (std::size_t j = 0; j < block; ++j) {
            out[i + j] = mont.from(static_cast<std::uint32_t>(lanes[j]));
        }
    }
    if (i < m) row_eval_scalar(mont, cm, n, zm + i, m - i, out + i);
}

} // namespace kimloci::kernels

#endif
