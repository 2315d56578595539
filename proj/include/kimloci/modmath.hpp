#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace kimloci {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    base %= p;
    while (exp) {
        if (exp & 1) r = mulmod(r, base, p);
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    return r;
}

// Extended-Euclid inverse; b must be a unit mod m.
inline std::uint64_t invmod(std::uint64_t b, std::uint64_t m) {
    std::int64_t t = 0, newt = 1;
    std::int64_t r = static_cast<std::int64_t>(m), newr = static_cast<std::int64_t>(b % m);
    while (newr != 0) {
        std::int64_t q = r / newr;
        std::int64_t tmp = t - q * newt;
        t = newt; newt = tmp;
        tmp = r - q * newr;
        r = newr; newr = tmp;
    }
    if (r != 1) throw std::domain_error("invmod: argument is not a unit");
    if (t < 0) t += static_cast<std::int64_t>(m);
    return static_cast<std::uint64_t>(t);
}

// inv[k] = k^{-1} mod p for 1 <= k < p (inv[0] unused, set to 0).
inline std::vector<std::uint32_t> inverse_table(std::uint32_t p) {
    std::vector<std::uint32_t> inv(p, 0);
    if (p > 1) inv[1] = 1;
    for (std::uint32_t k = 2; k < p; ++k) {
        std::uint64_t q = p / k, r = p % k;
        inv[k] = static_cast<std::uint32_t>(mulmod(p - q, inv[r], p));
    }
    return inv;
}

// Odd primes in [lo, hi], ascending. Plain Eratosthenes; fine up to ~1e7.
std::vector<std::uint32_t> odd_primes_in(std::uint64_t lo, std::uint64_t hi);

bool is_prime_u64(std::uint64_t n);

} // namespace kimloci
