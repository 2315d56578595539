#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace kimloci {

// Cusps of the projective line minus three points.
enum class Cusp : int { zero = 0, one = 1, infinity = 2 };

const char* cusp_name(Cusp c);  // "0", "1", "inf"

// A reduction condition per prime of S, aligned with S in ascending order.
using Refinement = std::vector<Cusp>;

std::string refinement_name(const Refinement& sigma);  // "(1)", "(0,inf)", "()"

// A rational point of P^1 - {0,1,inf}: num/den reduced, den > 0, num nonzero
// and different from den.
struct RationalPoint {
    mpz_class num;
    mpz_class den;

    static RationalPoint from(const mpz_class& n, const mpz_class& d);
    static RationalPoint from_integer(long n);

    std::string to_string() const;  // "2", "-1", "1/2"
    bool operator==(const RationalPoint&) const = default;
};

// Kummer coordinates at ell: (x, y) = (v_ell(z), -v_ell(1-z)). Exactly one of
// x > 0 (cusp 0), y < 0 (cusp 1), x < 0 (cusp infinity) holds, unless both are
// zero (good reduction); in particular x*y*(x+y) = 0 always.
struct KummerPair {
    std::int64_t x = 0;
    std::int64_t y = 0;
    bool operator==(const KummerPair&) const = default;
};

KummerPair kummer_coordinates(const RationalPoint& z, std::uint64_t ell);

// The cusp z reduces to at ell, if any.
std::optional<Cusp> reduction_cusp(const RationalPoint& z, std::uint64_t ell);

// All refinements Sigma with z in Y^Sigma(Z_ell) for every ell in S: one cusp
// choice per prime where z reduces badly, all three where it reduces well.
std::vector<Refinement> refinement_membership(const RationalPoint& z,
                                              const std::vector<std::uint32_t>& s);

// Y(Z_S) up to the exponent bound: every z = +-prod ell^e, |e| <= bound, such
// that 1 - z is also an S-unit. Deterministic order: by max(|num|, den), then
// by numerator. S must be distinct primes in ascending order.
std::vector<RationalPoint> enumerate_integral_points(const std::vector<std::uint32_t>& s,
                                                     std::uint32_t bound);

} // namespace kimloci
