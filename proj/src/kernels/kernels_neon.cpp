// NEON variant of the Horner row kernel (aarch64 only, where NEON is baseline).
#if defined(__aarch64__)

#include "mont32.hpp"

#include <arm_neon.h>

#include <cstddef>

namespace kimloci::kernels {

namespace {

// Same lazy Montgomery scheme as the scalar path, on two 64-bit lanes.
inline uint64x2_t mmul(uint64x2_t a, uint64x2_t b, uint32x2_t vp, uint32x2_t vpinv) {
    uint64x2_t t = vmull_u32(vmovn_u64(a), vmovn_u64(b));
    uint32x2_t mlo = vmovn_u64(vmull_u32(vmovn_u64(t), vpinv));
    uint64x2_t mp = vmull_u32(mlo, vp);
    return vshrq_n_u64(vaddq_u64(t, mp), 32);
}

constexpr std::size_t chains = 8;
constexpr std::size_t block = chains * 2;

} // namespace

void row_eval_neon(const Mont32& mont, const std::uint32_t* cm, std::size_t n,
                   const std::uint64_t* zm, std::size_t m, std::uint32_t* out) {
    const uint32x2_t vp = vdup_n_u32(mont.p);
    const uint32x2_t vpinv = vdup_n_u32(mont.pinv);
    std::uint64_t lanes[block];
    std::size_t i = 0;
    for (; i + block <= m; i += block) {
        uint64x2_t acc[chains];
        const uint64x2_t top = vdupq_n_u64(cm[n - 1]);
        for (std::size_t j = 0; j < chains; ++j) acc[j] = top;
        for (std::size_t k = n - 1; k-- > 0;) {
            const uint64x2_t vc = vdupq_n_u64(cm[k]);
            for (std::size_t j = 0; j < chains; ++j) {
                uint64x2_t z = vld1q_u64(zm + i + 2 * j);
                acc[j] = vaddq_u64(mmul(acc[j], z, vp, vpinv), vc);
            }
        }
        for (std::size_t j = 0; j < chains; ++j) vst1q_u64(lanes + 2 * j, acc[j]);
        for (std::size_t j = 0; j < block; ++j) {
            out[i + j] = mont.from(static_cast<std::uint32_t>(lanes[j]));
        }
    }
    if (i < m) row_eval_scalar(mont, cm, n, zm + i, m - i, out + i);
}

} // namespace kimloci::kernels

#endif
