#include "kimloci/points.hpp"

#include "kimloci/modmath.hpp"

#include <algorithm>
#include <stdexcept>

namespace kimloci {

namespace {

std::int64_t val_at(const mpz_class& n, std::uint64_t ell, mpz_class* unit = nullptr) {
    mpz_class l;
    mpz_set_ui(l.get_mpz_t(), static_cast<unsigned long>(ell));
    mpz_class reduced;
    mp_bitcnt_t e = mpz_remove(reduced.get_mpz_t(), n.get_mpz_t(), l.get_mpz_t());
    if (unit) *unit = reduced;
    return static_cast<std::int64_t>(e);
}

void check_s(const std::vector<std::uint32_t>& s) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!is_prime_u64(s[i])) throw std::invalid_argument("S must consist of primes");
        if (i > 0 && s[i - 1] >= s[i]) {
            throw std::invalid_argument("S must be strictly ascending");
        }
    }
}

} // namespace

const char* cusp_name(Cusp c) {
    switch (c) {
        case Cusp::zero: return "0";
        case Cusp::one: return "1";
        case Cusp::infinity: return "inf";
    }
    return "?";
}

std::string refinement_name(const Refinement& sigma) {
    std::string out = "(";
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        if (i) out += ",";
        out += cusp_name(sigma[i]);
    }
    return out + ")";
}

RationalPoint RationalPoint::from(const mpz_class& n, const mpz_class& d) {
    if (d == 0) throw std::invalid_argument("rational point with zero denominator");
    mpz_class num = n, den = d;
    if (den < 0) { num = -num; den = -den; }
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    if (g > 1) { num /= g; den /= g; }
    if (num == 0 || num == den) {
        throw std::domain_error("rational point must avoid 0 and 1");
    }
    return RationalPoint{std::move(num), std::move(den)};
}

RationalPoint RationalPoint::from_integer(long n) {
    return from(mpz_class(n), mpz_class(1));
}

std::string RationalPoint::to_string() const {
    std::string out = num.get_str();
    if (den != 1) out += "/" + den.get_str();
    return out;
}

KummerPair kummer_coordinates(const RationalPoint& z, std::uint64_t ell) {
    std::int64_t vnum = val_at(z.num, ell);
    std::int64_t vden = val_at(z.den, ell);
    mpz_class top = z.den - z.num;  // numerator of 1 - z
    std::int64_t vtop = val_at(top, ell);
    return KummerPair{vnum - vden, vden - vtop};
}

std::optional<Cusp> reduction_cusp(const RationalPoint& z, std::uint64_t ell) {
    KummerPair k = kummer_coordinates(z, ell);
    if (k.x > 0) return Cusp::zero;
    if (k.y < 0) return Cusp::one;
    if (k.x < 0) return Cusp::infinity;
    return std::nullopt;
}

std::vector<Refinement> refinement_membership(const RationalPoint& z,
                                              const std::vector<std::uint32_t>& s) {
    check_s(s);
    // Per prime: the forced cusp at bad reduction, or all three at good.
    std::vector<std::vector<Cusp>> choices(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (std::optional<Cusp> c = reduction_cusp(z, s[i])) {
            choices[i] = {*c};
        } else {
            choices[i] = {Cusp::zero, Cusp::one, Cusp::infinity};
        }
    }
    std::vector<Refinement> out;
    Refinement cur(s.size(), Cusp::zero);
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == s.size()) { out.push_back(cur); return; }
        for (Cusp c : choices[i]) {
            cur[i] = c;
            self(self, i + 1);
        }
    };
    rec(rec, 0);
    return out;
}

std::vector<RationalPoint> enumerate_integral_points(const std::vector<std::uint32_t>& s,
                                                     std::uint32_t bound) {
    check_s(s);
    double work = 2.0;
    for (std::size_t i = 0; i < s.size(); ++i) work *= 2.0 * bound + 1;
    if (work > 2e8) throw std::invalid_argument("S-unit enumeration too large");

    std::vector<RationalPoint> out;
    // Odometer over exponent vectors; empty S still yields the single vector ().
    std::vector<std::int64_t> e(s.size(), -static_cast<std::int64_t>(bound));
    for (;;) {
        for (int sign = 0; sign < 2; ++sign) {
            mpz_class num = (sign == 0) ? 1 : -1;
            mpz_class den = 1;
            for (std::size_t i = 0; i < s.size(); ++i) {
                mpz_class pw;
                mpz_ui_pow_ui(pw.get_mpz_t(), s[i],
                              static_cast<unsigned long>(e[i] < 0 ? -e[i] : e[i]));
                if (e[i] >= 0) num *= pw; else den *= pw;
            }
            if (num == den) continue;  // z = 1 is not on Y
            // 1 - z = (den - num)/den must be an S-unit as well.
            mpz_class top = den - num;
            for (std::uint32_t ell : s) val_at(top, ell, &top);
            if (top != 1 && top != -1) continue;
            out.push_back(RationalPoint::from(num, den));
        }
        // advance
        std::size_t i = 0;
        for (; i < s.size(); ++i) {
            if (e[i] < static_cast<std::int64_t>(bound)) { ++e[i]; break; }
            e[i] = -static_cast<std::int64_t>(bound);
        }
        if (i == s.size()) break;
    }
    std::sort(out.begin(), out.end(), [](const RationalPoint& a, const RationalPoint& b) {
        mpz_class ha = a.num < 0 ? mpz_class(-a.num) : a.num;
        if (ha < a.den) ha = a.den;
        mpz_class hb = b.num < 0 ? mpz_class(-b.num) : b.num;
        if (hb < b.den) hb = b.den;
        if (ha != hb) return ha < hb;
        if (a.num != b.num) return a.num < b.num;
        return a.den < b.den;
    });
    return out;
}

} // namespace kimloci
