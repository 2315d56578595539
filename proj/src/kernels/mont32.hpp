#pragma once

#include <cstdint>

namespace kimloci::kernels {

// Montgomery arithmetic mod an odd p < 2^28 with R = 2^32 and lazy reduction:
// mul accepts operands in [0, 4p) and returns a value in [0, 2p), so Horner
// steps (mul then add a coefficient in [0, 2p)) never need a conditional.
struct Mont32 {
    std::uint32_t p;
    std::uint32_t pinv;  // -p^{-1} mod 2^32
    std::uint32_t r2;    // 2^64 mod p

    explicit Mont32(std::uint32_t prime) : p(prime) {
        // Newton iteration for p^{-1} mod 2^32 (doubles correct bits each round),
        // then negate to get -p^{-1}.
        std::uint32_t inv = prime;
        for (int i = 0; i < 5; ++i) inv *= 2u - prime * inv;
        pinv = ~inv + 1u;
        std::uint64_t acc = 1;
        for (int i = 0; i < 64; ++i) acc = (acc * 2) % prime;
        r2 = static_cast<std::uint32_t>(acc);
    }

    // (a*b + m*p) >> 32 with m = (a*b*pinv) mod 2^32; for a,b < 4p gives < 2p.
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
        std::uint64_t t = static_cast<std::uint64_t>(a) * b;
        std::uint32_t m = static_cast<std::uint32_t>(t) * pinv;
        std::uint64_t u = (t + static_cast<std::uint64_t>(m) * p) >> 32;
        return static_cast<std::uint32_t>(u);
    }

    // x in [0, p) -> Montgomery form in [0, 2p).
    std::uint32_t to(std::uint32_t x) const { return mul(x, r2); }

    // Montgomery form in [0, 4p) -> plain value in [0, p).
    std::uint32_t from(std::uint32_t a) const {
        std::uint32_t t = mul(a, 1);
        return t >= p ? t - p : t;
    }
};

// Backend entry points operate on pre-converted Montgomery data: cm[k] < 2p,
// zm[i] < 2p (widened to u64 for the vector loads), out in plain form < p.
void row_eval_scalar(const Mont32& mont, const std::uint32_t* cm, std::size_t n,
                     const std::uint64_t* zm, std::size_t m, std::uint32_t* out);
#if defined(__x86_64__) || defined(_M_X64)
void row_eval_avx2(const Mont32& mont, const std::uint32_t* cm, std::size_t n,
                   const std::uint64_t* zm, std::size_t m, std::uint32_t* out);
#endif
#if defined(__aarch64__)
void row_eval_neon(const Mont32& mont, const std::uint32_t* cm, std::size_t n,
                   const std::uint64_t* zm, std::size_t m, std::uint32_t* out);
#endif

} // namespace kimloci::kernels
