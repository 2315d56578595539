#pragma once

#include "kimloci/padic.hpp"

#include <cstdint>
#include <vector>

namespace kimloci {

struct FpElement {
    std::uint32_t p = 0;
    std::uint32_t value = 0;
    bool operator==(const FpElement&) const = default;
};

// Dense polynomial over F_p; coeffs[i] multiplies z^i.
struct FpPoly {
    std::uint32_t p = 0;
    std::vector<std::uint32_t> coeffs;

    std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
    std::uint32_t eval(std::uint32_t a) const;
};

// k^{-n} mod p for k = 1..p-1 (index 0 unused). Computed multiplicatively:
// one powmod per prime k, one product for each composite.
std::vector<std::uint32_t> li_coefficient_table(std::uint64_t n, std::uint32_t p);

// Finite polylogarithm li_n(a) = sum_{k=1}^{p-1} a^k / k^n over F_p.
FpElement finite_li_eval(std::uint64_t n, std::uint64_t a, std::uint32_t p);

// Roots of li_n in F_p \ {0,1}, ascending. Batch-evaluated with the active
// row kernel; p must stay within kernels::max_modulus.
std::vector<std::uint32_t> finite_li_roots(std::uint64_t n, std::uint32_t p);

// li_{p-3} in closed form: z(z+1)(z-1)^(p-3) mod p. Requires p >= 5.
FpPoly closed_form_li(std::uint32_t p);

// Convergent polylogarithm Li_n(z) = sum_{m>=1} z^m/m^n for v_p(z) >= 1,
// to absolute precision `digits` (clamped to what z supports). 1 <= n < p.
PAdicNumber polylog_series(std::uint64_t n, const PAdicNumber& z, int digits);

// Li_1(z) = -log(1-z) with the Iwasawa branch, defined wherever z is not 1
// to precision; agrees with polylog_series(1, ...) on the open unit disc.
PAdicNumber li1(const PAdicNumber& z, int digits);

// Li_n(z) - p^{-n} Li_n(z^p) for v_p(z) >= 1, to absolute precision `digits`
// (the inner evaluations carry n guard digits for the p^{-n} shift).
PAdicNumber modified_polylog_series(std::uint64_t n, const PAdicNumber& z, int digits);

// Reduction of the modified polylogarithm mod p: (1 - a^p)^{-1} li_n(a),
// defined for a not congruent to 1.
FpElement modified_polylog_mod_p(std::uint64_t n, std::uint64_t a, std::uint32_t p);

} // namespace kimloci
