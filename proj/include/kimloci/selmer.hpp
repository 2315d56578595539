#pragma once

#include "kimloci/padic.hpp"
#include "kimloci/points.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace kimloci {

// Letters of coefficient words: tau_ell for ell in S (degree 1) and sigma_j
// for odd j >= 3 (degree j).
struct Letter {
    enum Kind : int { tau = 0, sigma = 1 };
    Kind kind;
    std::uint32_t index;  // the prime ell, or the odd degree j
    auto operator<=>(const Letter&) const = default;
};

using Word = std::vector<Letter>;

// "a[t2.t2.s3]" style name of the period symbol attached to a word.
std::string word_name(const Word& w);

// What the period attached to a word is: log_p(ell) for a single tau_ell,
// a p-adic zeta value for a single sigma_j, opaque otherwise.
enum class PeriodKind { log_of_prime, zeta_value, composite };
PeriodKind period_kind(const Word& w);

// Coordinates on the Selmer side: x_ell, y_ell for ell in S, z_j for odd j.
struct Variable {
    enum Kind : int { x = 0, y = 1, z = 2 };
    Kind kind;
    std::uint32_t index;
    auto operator<=>(const Variable&) const = default;
    std::string name() const;  // "x2", "y2", "z3"
};

using Monomial = std::map<Variable, std::uint32_t>;  // exponents >= 1

// One term of a coordinate of the localisation map: a period symbol times a
// signed monomial. Distinct words stay distinct terms even when monomials
// collide after substitution.
struct Term {
    Word word;
    Monomial monomial;
    std::int64_t multiplicity = 1;
    bool operator==(const Term&) const = default;
};

// The polylogarithmic coordinates of the localisation map in depth n:
// coords[0] is the log coordinate, coords[k] is the Li_k coordinate.
struct LocalisationMap {
    std::vector<std::uint32_t> s;  // ascending primes
    std::uint32_t depth = 0;
    std::vector<std::vector<Term>> coords;

    std::string coordinate_name(std::size_t i) const;  // "log", "Li_1", ...
    std::string render(std::size_t i) const;           // "a[t2]*x2 + ..." or "0"
    std::string render_all() const;                    // one coordinate per line
};

// loc(log) = sum_ell a[t_ell] x_ell;
// loc(Li_k) = sum over (ell_1..ell_{k-1}, ell) in S^k of
//                 a[t_ell1...t_ell_{k-1}.t_ell] x_ell1...x_ell_{k-1} y_ell
//           + sum over odd j = 2i+1 <= k-1... of words starting with sigma_j.
LocalisationMap build_localisation(const std::vector<std::uint32_t>& s, std::uint32_t depth);

// Substitute the reduction conditions: Sigma_ell = 0 sets y_ell = 0,
// Sigma_ell = 1 sets x_ell = 0, Sigma_ell = inf sets y_ell = -x_ell.
LocalisationMap restrict_refinement(const LocalisationMap& map, const Refinement& sigma);

// Indices of identically vanishing coordinates.
std::vector<std::size_t> vanishing_coordinates(const LocalisationMap& map);

// Dimension of the ambient Selmer scheme in depth n over Z_S.
std::uint64_t selmer_dimension(std::size_t s_count, std::uint64_t depth);

// Numeric periods for the single-letter tau words: a[t_ell] = log_p(ell).
struct SpecializedPeriods {
    std::uint64_t p = 0;
    int digits = 0;
    std::map<Word, PAdicNumber> values;
};

SpecializedPeriods specialize_single_letter(const LocalisationMap& map, std::uint64_t p,
                                            int digits);

// Like render_all, with known period values inlined in place of their symbols.
std::string render_specialized(const LocalisationMap& map, const SpecializedPeriods& sp);

// Machine-readable JSON dump of the coordinates.
std::string dump_structured(const LocalisationMap& map);

} // namespace kimloci
