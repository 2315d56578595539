#include "kimloci/polylog.hpp"

#include "kimloci/kernels.hpp"
#include "kimloci/modmath.hpp"

#include <algorithm>
#include <numeric>

namespace kimloci {

namespace {

void check_batch_prime(std::uint32_t p) {
    if (p < 3 || (p & 1) == 0 || p > kernels::max_modulus || !is_prime_u64(p)) {
        throw std::invalid_argument("finite polylog: p must be an odd prime below 2^28");
    }
}

} // namespace

std::uint32_t FpPoly::eval(std::uint32_t a) const {
    if (coeffs.empty()) return 0;
    std::uint64_t acc = coeffs.back();
    for (std::size_t k = coeffs.size() - 1; k-- > 0;) {
        acc = (acc * a + coeffs[k]) % p;
    }
    return static_cast<std::uint32_t>(acc);
}

std::vector<std::uint32_t> li_coefficient_table(std::uint64_t n, std::uint32_t p) {
    check_batch_prime(p);
    // k^{-n} = k^e with e = -n mod (p-1), completely multiplicative in k:
    // powmod at primes, a single product at composites (linear sieve).
    std::uint64_t e = (p - 1 - n % (p - 1)) % (p - 1);
    std::vector<std::uint32_t> c(p, 0);
    std::vector<std::uint32_t> spf(p, 0);
    std::vector<std::uint32_t> primes;
    primes.reserve(p > 16 ? p / 8 : 8);
    c[1] = 1;
    for (std::uint32_t k = 2; k < p; ++k) {
        if (spf[k] == 0) {
            spf[k] = k;
            c[k] = static_cast<std::uint32_t>(powmod(k, e, p));
            primes.push_back(k);
        }
        for (std::uint32_t q : primes) {
            if (q > spf[k] || static_cast<std::uint64_t>(q) * k >= p) break;
            spf[q * k] = q;
            c[q * k] = static_cast<std::uint32_t>(mulmod(c[q], c[k], p));
        }
    }
    return c;
}

FpElement finite_li_eval(std::uint64_t n, std::uint64_t a, std::uint32_t p) {
    check_batch_prime(p);
    std::uint32_t ar = static_cast<std::uint32_t>(a % p);
    if (ar == 0) return {p, 0};
    std::vector<std::uint32_t> c = li_coefficient_table(n, p);
    // sum_{k=1}^{p-1} c[k] a^k by Horner; the constant term is zero.
    std::uint64_t acc = c[p - 1];
    for (std::uint32_t k = p - 1; k-- > 0;) {
        acc = (acc * ar + (k > 0 ? c[k] : 0)) % p;
    }
    return {p, static_cast<std::uint32_t>(acc)};
}

std::vector<std::uint32_t> finite_li_roots(std::uint64_t n, std::uint32_t p) {
    check_batch_prime(p);
    std::vector<std::uint32_t> coeffs = li_coefficient_table(n, p);
    coeffs[0] = 0;  // reuse the table as the coefficient row of degree p-1
    std::vector<std::uint32_t> points(p - 2);
    std::iota(points.begin(), points.end(), 2u);
    std::vector<std::uint32_t> values(points.size());
    kernels::row_eval(coeffs.data(), coeffs.size(), points.data(), points.size(), p,
                      values.data());
    std::vector<std::uint32_t> roots;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (values[i] == 0) roots.push_back(points[i]);
    }
    return roots;
}

FpPoly closed_form_li(std::uint32_t p) {
    check_batch_prime(p);
    if (p < 5) throw std::invalid_argument("closed_form_li requires p >= 5");
    // (z-1)^(p-3) by the binomial recurrence, then multiply by z^2 + z.
    std::uint32_t d = p - 3;
    std::vector<std::uint32_t> inv = inverse_table(p);
    std::vector<std::uint32_t> binom(d + 1);
    // binom[j] = C(d, j) * (-1)^(d-j) mod p
    std::uint64_t run = 1;
    for (std::uint32_t j = 0; j <= d; ++j) {
        std::uint64_t sign_val = ((d - j) & 1) ? p - run % p : run % p;
        binom[j] = static_cast<std::uint32_t>(sign_val % p);
        if (j < d) run = mulmod(mulmod(run, d - j, p), inv[j + 1], p);
    }
    FpPoly out;
    out.p = p;
    out.coeffs.assign(p, 0);
    for (std::uint32_t j = 0; j <= d; ++j) {
        out.coeffs[j + 1] = (out.coeffs[j + 1] + binom[j]) % p;
        out.coeffs[j + 2] = (out.coeffs[j + 2] + binom[j]) % p;
    }
    while (!out.coeffs.empty() && out.coeffs.back() == 0) out.coeffs.pop_back();
    return out;
}

PAdicNumber polylog_series(std::uint64_t n, const PAdicNumber& z, int digits) {
    std::uint64_t p = z.prime();
    if (n < 1 || n >= p) {
        throw std::domain_error("polylog_series: order must satisfy 1 <= n < p");
    }
    if (z.is_zero()) {
        return PAdicNumber::zero(p, std::min<std::int64_t>(z.abs_digits(), digits));
    }
    if (z.valuation() < 1) {
        throw std::domain_error("polylog_series: series converges only for v_p(z) >= 1");
    }
    if (digits < 1) throw std::invalid_argument("polylog_series: digits must be positive");
    std::int64_t vt = z.valuation();
    std::int64_t target = std::min<std::int64_t>(digits, z.abs_digits());
    std::int64_t cutoff = std::max<std::int64_t>(
        series_tail_cutoff(vt, static_cast<std::int64_t>(n), p, target), 1);
    // v_p(m^n) <= n*floor(log_p cutoff) for m <= cutoff; pad so the exact
    // divisions cannot reach the target digits.
    std::int64_t logc = 0;
    for (mpz_class q = p; q <= cutoff; q *= static_cast<unsigned long>(p)) ++logc;
    std::int64_t pad = static_cast<std::int64_t>(n) * logc + 1;
    mpz_class m = p_power(p, target + pad);
    mpz_class zres = z.residue(target);
    mpz_class sum = 0, zm = 1;
    for (std::int64_t k = 1; k <= cutoff; ++k) {
        zm = zm * zres;
        mpz_mod(zm.get_mpz_t(), zm.get_mpz_t(), m.get_mpz_t());
        std::int64_t kk;
        std::int64_t e = 0;
        {
            std::int64_t r = k;
            while (r % static_cast<std::int64_t>(p) == 0) { r /= static_cast<std::int64_t>(p); ++e; }
            kk = r;
        }
        // term = z^k / k^n; k^n = p^(n e) * kk^n with kk a unit.
        mpz_class term;
        mpz_divexact(term.get_mpz_t(), zm.get_mpz_t(),
                     p_power(p, static_cast<std::int64_t>(n) * e).get_mpz_t());
        mpz_class kkz(static_cast<long>(kk));
        mpz_class kpow;
        mpz_powm_ui(kpow.get_mpz_t(), kkz.get_mpz_t(), static_cast<unsigned long>(n),
                    m.get_mpz_t());
        mpz_class kinv;
        mpz_invert(kinv.get_mpz_t(), kpow.get_mpz_t(), m.get_mpz_t());
        term *= kinv;
        sum += term;
        mpz_mod(sum.get_mpz_t(), sum.get_mpz_t(), m.get_mpz_t());
    }
    return PAdicNumber::from_residue(sum, p, target);
}

PAdicNumber li1(const PAdicNumber& z, int digits) {
    std::uint64_t p = z.prime();
    if (digits < 1) throw std::invalid_argument("li1: digits must be positive");
    PAdicNumber w = PAdicNumber::one(p, digits) - z;
    if (w.is_zero()) {
        throw precision_failure("li1: argument indistinguishable from 1 at this precision");
    }
    // Li_1(z) = -log(1-z); the Iwasawa branch kills any power of p in 1-z.
    return -iwasawa_log(w.valuation() == 0 ? w : w.unit_as_padic());
}

PAdicNumber modified_polylog_series(std::uint64_t n, const PAdicNumber& z, int digits) {
    std::uint64_t p = z.prime();
    if (n < 1 || n >= p) {
        throw std::domain_error("modified_polylog_series: order must satisfy 1 <= n < p");
    }
    if (digits < 1) throw std::invalid_argument("modified_polylog_series: digits must be positive");
    int inner = digits + static_cast<int>(n);
    PAdicNumber main = polylog_series(n, z, inner);
    PAdicNumber frob = polylog_series(n, z.pow(static_cast<std::int64_t>(p)), inner);
    return main - frob.shifted(-static_cast<std::int64_t>(n));
}

FpElement modified_polylog_mod_p(std::uint64_t n, std::uint64_t a, std::uint32_t p) {
    check_batch_prime(p);
    std::uint32_t ar = static_cast<std::uint32_t>(a % p);
    if (ar == 1) {
        throw std::domain_error("modified_polylog_mod_p: undefined at a = 1");
    }
    if (ar == 0) return {p, 0};
    // a^p = a in F_p, so the 1 - z^p factor reduces to 1 - a.
    std::uint64_t denom = invmod((p + 1 - ar) % p, p);
    FpElement li = finite_li_eval(n, ar, p);
    return {p, static_cast<std::uint32_t>(mulmod(denom, li.value, p))};
}

} // namespace kimloci
