#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace kimloci {

// Raised when a computation cannot be decided at the working precision
// (inverting a quantity that is zero to precision, exhausted escalation, ...).
struct precision_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Working-precision schedule: start at `initial` digits, multiply by `factor`
// on each escalation, give up beyond `max`.
struct PrecisionPolicy {
    int initial = 8;
    int factor = 2;
    int max = 64;

    // Precision to try after a run at n digits; 0 when the budget is spent.
    int next(int n) const {
        if (n >= max) return 0;
        long long m = static_cast<long long>(n) * factor;
        return static_cast<int>(m > max ? max : m);
    }
};

mpz_class p_power(std::uint64_t p, std::int64_t k);

// An element of Q_p known to finite precision: either p^v * u with u a unit
// determined modulo p^n (so the value is known modulo p^(v+n)), or the
// distinguished "zero to precision" state, which only records an absolute
// bound b with value ≡ 0 mod p^b.
class PAdicNumber {
public:
    static PAdicNumber from_integer(const mpz_class& n, std::uint64_t p, int digits);
    static PAdicNumber from_rational(const mpz_class& num, const mpz_class& den,
                                     std::uint64_t p, int digits);
    // Interpret `value` as a residue known modulo p^abs_digits.
    static PAdicNumber from_residue(const mpz_class& value, std::uint64_t p, std::int64_t abs_digits);
    static PAdicNumber zero(std::uint64_t p, std::int64_t abs_digits);
    static PAdicNumber one(std::uint64_t p, int digits);

    std::uint64_t prime() const { return p_; }
    bool is_zero() const { return zero_; }

    // Valuation of a nonzero element; the zero state has none.
    std::int64_t valuation() const;
    // Relative precision (digits of the unit part); 0 for the zero state.
    int rel_digits() const { return zero_ ? 0 : n_; }
    // The value is known modulo p^abs_digits().
    std::int64_t abs_digits() const { return zero_ ? v_ : v_ + n_; }
    const mpz_class& unit_part() const;

    // Canonical representative of the value mod p^k; requires k <= abs_digits()
    // and a nonnegative valuation.
    mpz_class residue(std::int64_t k) const;

    // Forget digits beyond absolute precision `abs`.
    PAdicNumber truncated(std::int64_t abs) const;

    PAdicNumber operator-() const;
    PAdicNumber inverse() const;
    PAdicNumber pow(std::int64_t e) const;
    // Multiply by p^k.
    PAdicNumber shifted(std::int64_t k) const;
    // The unit part as a p-adic unit with the same relative precision.
    PAdicNumber unit_as_padic() const;

    friend PAdicNumber operator+(const PAdicNumber& a, const PAdicNumber& b);
    friend PAdicNumber operator-(const PAdicNumber& a, const PAdicNumber& b);
    friend PAdicNumber operator*(const PAdicNumber& a, const PAdicNumber& b);

    // Equal as far as both are determined, up to absolute precision `abs`.
    bool agrees_to(const PAdicNumber& other, std::int64_t abs) const;
    bool operator==(const PAdicNumber& other) const;

    // "u + O(p^n)", "u*p^v + O(p^(v+n))", or "O(p^b)" for the zero state.
    std::string to_string() const;

private:
    PAdicNumber(std::uint64_t p, bool zero, std::int64_t v, int n, mpz_class u)
        : p_(p), zero_(zero), v_(v), n_(n), u_(std::move(u)) {}

    std::uint64_t p_ = 0;
    bool zero_ = true;
    std::int64_t v_ = 0;  // valuation, or the absolute bound for the zero state
    int n_ = 0;           // relative digits (0 in the zero state)
    mpz_class u_;         // unit part in [1, p^n), coprime to p
};

// Largest m with m*vt - weight*floor(log_p m) < target: the last index whose
// series term (of valuation >= m*vt - weight*v_p(m)) can still be visible at
// absolute precision `target`.
std::int64_t series_tail_cutoff(std::int64_t vt, std::int64_t weight, std::uint64_t p,
                                std::int64_t target);

// The unique (p-1)-st root of unity congruent to a mod p, to `digits` digits.
PAdicNumber teichmuller(std::uint64_t a, std::uint64_t p, int digits);

// Iwasawa logarithm (branch log p = 0) of a unit: (1/(p-1)) log(u^(p-1)).
// Result carries absolute precision equal to the unit's relative precision.
PAdicNumber iwasawa_log(const PAdicNumber& u);

// exp(t) for v(t) >= 1; inverse of the logarithm on principal units.
PAdicNumber exp_principal(const PAdicNumber& t);

} // namespace kimloci
