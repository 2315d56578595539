#include "kimloci/moebius.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>

namespace kimloci {

namespace {

// perm[m][c]: image of cusp c under map m, in enum order 0, 1, inf.
constexpr int perm[6][3] = {
    {0, 1, 2},  // z
    {2, 1, 0},  // 1/z
    {1, 0, 2},  // 1-z
    {1, 2, 0},  // 1/(1-z)
    {2, 0, 1},  // (z-1)/z
    {0, 2, 1},  // z/(z-1)
};

int idx(Moebius s) { return static_cast<int>(s); }

} // namespace

const char* moebius_name(Moebius s) {
    static const char* names[] = {"z", "1/z", "1-z", "1/(1-z)", "(z-1)/z", "z/(z-1)"};
    return names[idx(s)];
}

Cusp cusp_image(Moebius s, Cusp c) {
    return static_cast<Cusp>(perm[idx(s)][static_cast<int>(c)]);
}

Moebius compose(Moebius s, Moebius t) {
    // The cusp action is faithful, so composing permutations identifies the map.
    int comp[3];
    for (int c = 0; c < 3; ++c) comp[c] = perm[idx(s)][perm[idx(t)][c]];
    for (int m = 0; m < 6; ++m) {
        if (perm[m][0] == comp[0] && perm[m][1] == comp[1] && perm[m][2] == comp[2]) {
            return static_cast<Moebius>(m);
        }
    }
    throw std::logic_error("moebius composition table is broken");
}

Moebius moebius_inverse(Moebius s) {
    for (Moebius t : all_moebius) {
        if (compose(s, t) == Moebius::identity) return t;
    }
    throw std::logic_error("moebius inverse not found");
}

RationalPoint apply_moebius(Moebius s, const RationalPoint& z) {
    const mpz_class& a = z.num;
    const mpz_class& b = z.den;
    switch (s) {
        case Moebius::identity: return z;
        case Moebius::inv: return RationalPoint::from(b, a);
        case Moebius::one_minus: return RationalPoint::from(b - a, b);
        case Moebius::inv_one_minus: return RationalPoint::from(b, b - a);
        case Moebius::ratio1: return RationalPoint::from(a - b, a);
        case Moebius::ratio2: return RationalPoint::from(a, a - b);
    }
    throw std::logic_error("unknown moebius map");
}

PAdicNumber apply_moebius(Moebius s, const PAdicNumber& z) {
    int d = static_cast<int>(std::clamp<std::int64_t>(z.abs_digits(), 1, 4096));
    PAdicNumber one = PAdicNumber::one(z.prime(), d);
    switch (s) {
        case Moebius::identity: return z;
        case Moebius::inv: return z.inverse();
        case Moebius::one_minus: return one - z;
        case Moebius::inv_one_minus: return (one - z).inverse();
        case Moebius::ratio1: return (z - one) * z.inverse();
        case Moebius::ratio2: return z * (z - one).inverse();
    }
    throw std::logic_error("unknown moebius map");
}

Refinement act_on_refinement(Moebius s, const Refinement& sigma) {
    Refinement out = sigma;
    for (Cusp& c : out) c = cusp_image(s, c);
    return out;
}

std::vector<RationalPoint> moebius_orbit(const RationalPoint& z) {
    std::vector<RationalPoint> out;
    for (Moebius s : all_moebius) {
        RationalPoint im = apply_moebius(s, z);
        if (std::find(out.begin(), out.end(), im) == out.end()) out.push_back(im);
    }
    return out;
}

} // namespace kimloci
