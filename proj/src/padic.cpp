#include "kimloci/padic.hpp"

#include "kimloci/modmath.hpp"

#include <algorithm>

namespace kimloci {

namespace {

constexpr std::int64_t max_digits = 4096;

void check_prime(std::uint64_t p) {
    thread_local std::uint64_t last_checked = 0;
    if (p == last_checked) return;
    if (p < 3 || (p & 1) == 0 || !is_prime_u64(p)) {
        throw std::invalid_argument("p must be an odd prime");
    }
    last_checked = p;
}

void check_digits(std::int64_t digits) {
    if (digits < 1 || digits > max_digits) {
        throw std::invalid_argument("precision digits out of range");
    }
}

// Strip all factors of p from n (n != 0), returning the exponent removed.
std::int64_t remove_p(mpz_class& n, std::uint64_t p) {
    mpz_class pz = p_power(p, 1);
    mpz_class reduced;
    mp_bitcnt_t e = mpz_remove(reduced.get_mpz_t(), n.get_mpz_t(), pz.get_mpz_t());
    n = reduced;
    return static_cast<std::int64_t>(e);
}

std::int64_t vp_small(std::int64_t k, std::uint64_t p, std::int64_t& unit) {
    std::int64_t e = 0;
    while (k % static_cast<std::int64_t>(p) == 0) {
        k /= static_cast<std::int64_t>(p);
        ++e;
    }
    unit = k;
    return e;
}

} // namespace

mpz_class p_power(std::uint64_t p, std::int64_t k) {
    if (k < 0) throw std::invalid_argument("p_power: negative exponent");
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
    return r;
}

PAdicNumber PAdicNumber::zero(std::uint64_t p, std::int64_t abs_digits) {
    check_prime(p);
    if (abs_digits < 0) abs_digits = 0;
    return PAdicNumber(p, true, abs_digits, 0, mpz_class(0));
}

PAdicNumber PAdicNumber::from_residue(const mpz_class& value, std::uint64_t p,
                                      std::int64_t abs_digits) {
    check_prime(p);
    check_digits(abs_digits);
    mpz_class r;
    mpz_mod(r.get_mpz_t(), value.get_mpz_t(), p_power(p, abs_digits).get_mpz_t());
    if (r == 0) return zero(p, abs_digits);
    std::int64_t v = remove_p(r, p);
    // r nonzero mod p^abs guarantees v < abs_digits.
    int n = static_cast<int>(abs_digits - v);
    mpz_class u;
    mpz_mod(u.get_mpz_t(), r.get_mpz_t(), p_power(p, n).get_mpz_t());
    return PAdicNumber(p, false, v, n, std::move(u));
}

PAdicNumber PAdicNumber::from_integer(const mpz_class& n, std::uint64_t p, int digits) {
    check_prime(p);
    check_digits(digits);
    if (n == 0) return zero(p, digits);
    mpz_class m = n;
    std::int64_t v = remove_p(m, p);
    mpz_class u;
    mpz_mod(u.get_mpz_t(), m.get_mpz_t(), p_power(p, digits).get_mpz_t());
    return PAdicNumber(p, false, v, digits, std::move(u));
}

PAdicNumber PAdicNumber::from_rational(const mpz_class& num, const mpz_class& den,
                                       std::uint64_t p, int digits) {
    check_prime(p);
    check_digits(digits);
    if (den == 0) throw std::invalid_argument("from_rational: zero denominator");
    if (num == 0) return zero(p, digits);
    mpz_class a = num, b = den;
    std::int64_t v = remove_p(a, p) - remove_p(b, p);
    mpz_class m = p_power(p, digits);
    mpz_class binv;
    if (mpz_invert(binv.get_mpz_t(), b.get_mpz_t(), m.get_mpz_t()) == 0) {
        throw std::invalid_argument("from_rational: denominator not invertible");
    }
    mpz_class u = a * binv;
    mpz_mod(u.get_mpz_t(), u.get_mpz_t(), m.get_mpz_t());
    return PAdicNumber(p, false, v, digits, std::move(u));
}

PAdicNumber PAdicNumber::one(std::uint64_t p, int digits) {
    check_prime(p);
    check_digits(digits);
    return PAdicNumber(p, false, 0, digits, mpz_class(1));
}

std::int64_t PAdicNumber::valuation() const {
    if (zero_) throw precision_failure("valuation of a zero-to-precision element");
    return v_;
}

const mpz_class& PAdicNumber::unit_part() const {
    if (zero_) throw precision_failure("unit part of a zero-to-precision element");
    return u_;
}

mpz_class PAdicNumber::residue(std::int64_t k) const {
    if (k < 0) throw std::invalid_argument("residue: negative modulus exponent");
    if (k > abs_digits()) {
        throw precision_failure("residue requested beyond known precision");
    }
    if (zero_ || v_ >= k) return mpz_class(0);
    if (v_ < 0) throw std::domain_error("residue of an element with negative valuation");
    mpz_class r;
    mpz_mod(r.get_mpz_t(), u_.get_mpz_t(), p_power(p_, k - v_).get_mpz_t());
    return r * p_power(p_, v_);
}

PAdicNumber PAdicNumber::truncated(std::int64_t abs) const {
    if (zero_) return zero(p_, std::min(v_, abs));
    if (abs >= abs_digits()) return *this;
    if (v_ >= abs) return zero(p_, abs);
    int n = static_cast<int>(abs - v_);
    mpz_class u;
    mpz_mod(u.get_mpz_t(), u_.get_mpz_t(), p_power(p_, n).get_mpz_t());
    return PAdicNumber(p_, false, v_, n, std::move(u));
}

PAdicNumber PAdicNumber::operator-() const {
    if (zero_) return *this;
    return PAdicNumber(p_, false, v_, n_, p_power(p_, n_) - u_);
}

PAdicNumber PAdicNumber::inverse() const {
    if (zero_) throw precision_failure("inverting a zero-to-precision element");
    mpz_class m = p_power(p_, n_);
    mpz_class uinv;
    mpz_invert(uinv.get_mpz_t(), u_.get_mpz_t(), m.get_mpz_t());
    return PAdicNumber(p_, false, -v_, n_, std::move(uinv));
}

PAdicNumber PAdicNumber::pow(std::int64_t e) const {
    if (e < 0) return inverse().pow(-e);
    if (zero_) {
        if (e == 0) {
            return one(p_, static_cast<int>(std::clamp<std::int64_t>(v_, 1, max_digits)));
        }
        std::int64_t cap = std::int64_t{1} << 40;
        std::int64_t b = (v_ > 0 && e > cap / v_) ? cap : v_ * e;
        return zero(p_, b);
    }
    if (e == 0) return one(p_, n_);
    mpz_class m = p_power(p_, n_);
    mpz_class u;
    mpz_powm_ui(u.get_mpz_t(), u_.get_mpz_t(), static_cast<unsigned long>(e), m.get_mpz_t());
    return PAdicNumber(p_, false, v_ * e, n_, std::move(u));
}

PAdicNumber PAdicNumber::shifted(std::int64_t k) const {
    if (zero_) return zero(p_, v_ + k);
    return PAdicNumber(p_, false, v_ + k, n_, u_);
}

PAdicNumber PAdicNumber::unit_as_padic() const {
    if (zero_) throw precision_failure("unit part of a zero-to-precision element");
    return PAdicNumber(p_, false, 0, n_, u_);
}

PAdicNumber operator+(const PAdicNumber& a, const PAdicNumber& b) {
    if (a.p_ != b.p_) throw std::invalid_argument("mixing different primes");
    if (a.zero_ && b.zero_) return PAdicNumber::zero(a.p_, std::min(a.v_, b.v_));
    if (a.zero_) return b.truncated(std::min(a.v_, b.abs_digits()));
    if (b.zero_) return a.truncated(std::min(b.v_, a.abs_digits()));
    std::int64_t abs = std::min(a.abs_digits(), b.abs_digits());
    std::int64_t v0 = std::min(a.v_, b.v_);
    if (v0 >= abs) return PAdicNumber::zero(a.p_, abs);
    mpz_class s = a.u_ * p_power(a.p_, a.v_ - v0) + b.u_ * p_power(b.p_, b.v_ - v0);
    return PAdicNumber::from_residue(s, a.p_, abs - v0).shifted(v0);
}

PAdicNumber operator-(const PAdicNumber& a, const PAdicNumber& b) { return a + (-b); }

PAdicNumber operator*(const PAdicNumber& a, const PAdicNumber& b) {
    if (a.p_ != b.p_) throw std::invalid_argument("mixing different primes");
    if (a.zero_ || b.zero_) {
        // v_ is the absolute bound for a zero state and the valuation otherwise;
        // either way the product is 0 mod p^(a.v_ + b.v_).
        return PAdicNumber::zero(a.p_, a.v_ + b.v_);
    }
    int n = std::min(a.n_, b.n_);
    mpz_class u = a.u_ * b.u_;
    mpz_mod(u.get_mpz_t(), u.get_mpz_t(), p_power(a.p_, n).get_mpz_t());
    return PAdicNumber(a.p_, false, a.v_ + b.v_, n, std::move(u));
}

bool PAdicNumber::agrees_to(const PAdicNumber& other, std::int64_t abs) const {
    if (p_ != other.p_) return false;
    PAdicNumber x = truncated(abs), y = other.truncated(abs);
    if (x.zero_ != y.zero_) return false;
    if (x.zero_) return true;
    return x.v_ == y.v_ && x.u_ == y.u_;
}

bool PAdicNumber::operator==(const PAdicNumber& other) const {
    return agrees_to(other, std::min(abs_digits(), other.abs_digits()));
}

std::string PAdicNumber::to_string() const {
    auto pexp = [&](std::int64_t e) {
        return std::to_string(p_) + "^" + std::to_string(e);
    };
    if (zero_) return "O(" + pexp(v_) + ")";
    std::string s = u_.get_str();
    if (v_ != 0) s += "*" + pexp(v_);
    return s + " + O(" + pexp(abs_digits()) + ")";
}

PAdicNumber teichmuller(std::uint64_t a, std::uint64_t p, int digits) {
    check_prime(p);
    check_digits(digits);
    if (a % p == 0) throw std::domain_error("teichmuller: residue divisible by p");
    mpz_class m = p_power(p, digits);
    mpz_class x(static_cast<unsigned long>(a % p));
    mpz_class pz = p_power(p, 1);
    // x -> x^p gains one digit of agreement with the root of unity per step.
    for (int i = 0; i < digits; ++i) {
        mpz_class next;
        mpz_powm(next.get_mpz_t(), x.get_mpz_t(), pz.get_mpz_t(), m.get_mpz_t());
        if (next == x) break;
        x = next;
    }
    return PAdicNumber::from_residue(x, p, digits);
}

// Scans the intervals [p^j, p^(j+1)), where the penalty weight*floor(log_p m)
// is the constant weight*j.
std::int64_t series_tail_cutoff(std::int64_t vt, std::int64_t weight, std::uint64_t p,
                                std::int64_t target) {
    std::int64_t best = 0;
    mpz_class lo = 1;
    for (std::int64_t j = 0;; ++j) {
        // Within the interval the penalty is weight*j, so a term survives
        // while m*vt < target + weight*j.
        std::int64_t first_dead = (target + weight * j + vt - 1) / vt;
        mpz_class hi = lo * static_cast<unsigned long>(p) - 1;
        if (first_dead > 0 && lo < first_dead) {
            mpz_class top = std::min(mpz_class(static_cast<long>(first_dead - 1)), hi);
            if (top >= lo) best = std::max(best, static_cast<std::int64_t>(top.get_si()));
        }
        // Once p^j*vt - weight*j clears the target and p^j >= weight, the
        // margin only grows with j; no later interval contributes.
        mpz_class margin = lo * vt - weight * j;
        if (margin >= target && lo >= weight) break;
        lo *= static_cast<unsigned long>(p);
    }
    return best;
}

PAdicNumber iwasawa_log(const PAdicNumber& u) {
    if (u.is_zero() || u.valuation() != 0) {
        throw std::domain_error("iwasawa_log requires a p-adic unit");
    }
    std::uint64_t p = u.prime();
    std::int64_t target = u.rel_digits();
    std::int64_t cutoff = std::max<std::int64_t>(series_tail_cutoff(1, 1, p, target), 1);
    // Pad the working modulus so exact divisions by p^{v_p(k)} cannot eat into
    // the target digits: v_p(k) <= floor(log_p cutoff) <= pad - 1.
    std::int64_t pad = 1;
    for (mpz_class q = p; q <= cutoff; q *= static_cast<unsigned long>(p)) ++pad;
    mpz_class m = p_power(p, target + pad);
    // log(u) = (1/(p-1)) log(u^(p-1)); w = u^(p-1) is principal, so the usual
    // series for log(1+t) applies with t = w - 1, v(t) >= 1.
    mpz_class w;
    mpz_powm_ui(w.get_mpz_t(), u.unit_part().get_mpz_t(),
                static_cast<unsigned long>(p - 1), m.get_mpz_t());
    mpz_class t = w - 1;
    mpz_class sum = 0, tk = 1;
    for (std::int64_t k = 1; k <= cutoff; ++k) {
        tk = tk * t;
        mpz_mod(tk.get_mpz_t(), tk.get_mpz_t(), m.get_mpz_t());
        std::int64_t kk;
        std::int64_t e = vp_small(k, p, kk);
        mpz_class term;
        mpz_divexact(term.get_mpz_t(), tk.get_mpz_t(), p_power(p, e).get_mpz_t());
        mpz_class kinv;
        mpz_class kkz(static_cast<long>(kk));
        mpz_invert(kinv.get_mpz_t(), kkz.get_mpz_t(), m.get_mpz_t());
        term *= kinv;
        mpz_mod(term.get_mpz_t(), term.get_mpz_t(), m.get_mpz_t());
        if (k & 1) sum += term; else sum -= term;
        mpz_mod(sum.get_mpz_t(), sum.get_mpz_t(), m.get_mpz_t());
    }
    mpz_class pm1(static_cast<unsigned long>(p - 1));
    mpz_class pm1inv;
    mpz_invert(pm1inv.get_mpz_t(), pm1.get_mpz_t(), m.get_mpz_t());
    mpz_class ell = sum * pm1inv;
    return PAdicNumber::from_residue(ell, p, target);
}

PAdicNumber exp_principal(const PAdicNumber& t) {
    std::uint64_t p = t.prime();
    if (t.is_zero()) {
        std::int64_t b = std::clamp<std::int64_t>(t.abs_digits(), 1, max_digits);
        return PAdicNumber::from_residue(mpz_class(1), p, b);
    }
    if (t.valuation() < 1) throw std::domain_error("exp_principal requires valuation >= 1");
    std::int64_t abs = t.abs_digits();
    // k*vt - v_p(k!) >= k - (k-1)/(p-1) >= (k+1)/2 for p >= 3, so terms beyond
    // 2*abs + 1 are invisible at the target precision.
    std::int64_t cutoff = 2 * abs + 1;
    std::int64_t pad = (cutoff - 1) / static_cast<std::int64_t>(p - 1) + 1;
    mpz_class m = p_power(p, abs + pad);
    mpz_class tres = t.residue(abs);
    mpz_class sum = 1, tk = 1, fact_u = 1;
    std::int64_t fact_e = 0;
    for (std::int64_t k = 1; k <= cutoff; ++k) {
        tk = tk * tres;
        mpz_mod(tk.get_mpz_t(), tk.get_mpz_t(), m.get_mpz_t());
        std::int64_t kk;
        fact_e += vp_small(k, p, kk);
        fact_u *= kk;
        mpz_mod(fact_u.get_mpz_t(), fact_u.get_mpz_t(), m.get_mpz_t());
        mpz_class term;
        mpz_divexact(term.get_mpz_t(), tk.get_mpz_t(), p_power(p, fact_e).get_mpz_t());
        mpz_class finv;
        mpz_invert(finv.get_mpz_t(), fact_u.get_mpz_t(), m.get_mpz_t());
        term *= finv;
        mpz_mod(term.get_mpz_t(), term.get_mpz_t(), m.get_mpz_t());
        sum += term;
        mpz_mod(sum.get_mpz_t(), sum.get_mpz_t(), m.get_mpz_t());
    }
    return PAdicNumber::from_residue(sum, p, abs);
}

} // namespace kimloci
