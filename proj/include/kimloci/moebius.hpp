#pragma once

#include "kimloci/padic.hpp"
#include "kimloci/points.hpp"

#include <array>
#include <cstdint>
#include <string>

namespace kimloci {

// The six automorphisms of P^1 - {0,1,inf}.
enum class Moebius : int {
    identity = 0,   // z
    inv,            // 1/z
    one_minus,      // 1 - z
    inv_one_minus,  // 1/(1-z)
    ratio1,         // (z-1)/z
    ratio2,         // z/(z-1)
};

inline constexpr std::array<Moebius, 6> all_moebius = {
    Moebius::identity,     Moebius::inv,    Moebius::one_minus,
    Moebius::inv_one_minus, Moebius::ratio1, Moebius::ratio2,
};

const char* moebius_name(Moebius s);  // "z", "1/z", "1-z", "1/(1-z)", "(z-1)/z", "z/(z-1)"

// Image of a cusp under the map itself (e.g. 1/z swaps 0 and inf).
Cusp cusp_image(Moebius s, Cusp c);

// apply(compose(s, t), z) == apply(s, apply(t, z)).
Moebius compose(Moebius s, Moebius t);
Moebius moebius_inverse(Moebius s);

RationalPoint apply_moebius(Moebius s, const RationalPoint& z);

// p-adic application; throws precision_failure when a needed inverse meets a
// zero-to-precision denominator (cannot happen on points of Y).
PAdicNumber apply_moebius(Moebius s, const PAdicNumber& z);

// sigma(Y^Sigma) = Y^(sigma Sigma): push a refinement through cusp_image.
Refinement act_on_refinement(Moebius s, const Refinement& sigma);

// Orbit of a point, deduplicated, in all_moebius application order.
std::vector<RationalPoint> moebius_orbit(const RationalPoint& z);

} // namespace kimloci
