#include "kimloci/modmath.hpp"

#include <gmp.h>

namespace kimloci {

std::vector<std::uint32_t> odd_primes_in(std::uint64_t lo, std::uint64_t hi) {
    std::vector<std::uint32_t> out;
    if (hi < 3 || hi < lo) return out;
    if (lo < 3) lo = 3;
    std::vector<bool> composite(hi + 1, false);
    for (std::uint64_t i = 2; i * i <= hi; ++i) {
        if (composite[i]) continue;
        for (std::uint64_t j = i * i; j <= hi; j += i) composite[j] = true;
    }
    for (std::uint64_t n = lo | 1; n <= hi; n += 2) {
        if (!composite[n]) out.push_back(static_cast<std::uint32_t>(n));
    }
    return out;
}

bool is_prime_u64(std::uint64_t n) {
    mpz_t z;
    mpz_init_set_ui(z, n);
    int r = mpz_probab_prime_p(z, 30);
    mpz_clear(z);
    return r > 0;
}

} // namespace kimloci
