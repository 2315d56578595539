#include "kimloci/selmer.hpp"

#include "kimloci/modmath.hpp"

#include <json.hpp>

#include <algorithm>
#include <stdexcept>

namespace kimloci {

namespace {

void check_s(const std::vector<std::uint32_t>& s) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!is_prime_u64(s[i])) throw std::invalid_argument("S must consist of primes");
        if (i > 0 && s[i - 1] >= s[i]) {
            throw std::invalid_argument("S must be strictly ascending");
        }
    }
}

std::string letter_name(const Letter& l) {
    return (l.kind == Letter::tau ? "t" : "s") + std::to_string(l.index);
}

bool term_less(const Term& a, const Term& b) {
    if (a.word != b.word) return a.word < b.word;
    return a.monomial < b.monomial;
}

// All tuples in S^m, fed to `emit` one at a time (the empty tuple for m = 0).
template <typename F>
void for_each_tuple(const std::vector<std::uint32_t>& s, std::size_t m, F&& emit) {
    if (m == 0) {
        std::vector<std::uint32_t> empty;
        emit(empty);
        return;
    }
    if (s.empty()) return;
    std::vector<std::size_t> idx(m, 0);
    std::vector<std::uint32_t> tuple(m);
    for (;;) {
        for (std::size_t i = 0; i < m; ++i) tuple[i] = s[idx[i]];
        emit(tuple);
        std::size_t i = 0;
        for (; i < m; ++i) {
            if (++idx[i] < s.size()) break;
            idx[i] = 0;
        }
        if (i == m) break;
    }
}

std::string term_body(const Term& t) {
    std::string out = word_name(t.word);
    for (const auto& [var, exp] : t.monomial) {
        out += "*" + var.name();
        if (exp > 1) out += "^" + std::to_string(exp);
    }
    std::int64_t m = t.multiplicity < 0 ? -t.multiplicity : t.multiplicity;
    if (m != 1) out = std::to_string(m) + "*" + out;
    return out;
}

} // namespace

std::string word_name(const Word& w) {
    std::string out = "a[";
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) out += ".";
        out += letter_name(w[i]);
    }
    return out + "]";
}

PeriodKind period_kind(const Word& w) {
    if (w.size() == 1 && w[0].kind == Letter::tau) return PeriodKind::log_of_prime;
    if (w.size() == 1 && w[0].kind == Letter::sigma) return PeriodKind::zeta_value;
    return PeriodKind::composite;
}

std::string Variable::name() const {
    static const char* prefix[] = {"x", "y", "z"};
    return prefix[static_cast<int>(kind)] + std::to_string(index);
}

std::string LocalisationMap::coordinate_name(std::size_t i) const {
    return i == 0 ? "log" : "Li_" + std::to_string(i);
}

std::string LocalisationMap::render(std::size_t i) const {
    const std::vector<Term>& terms = coords.at(i);
    if (terms.empty()) return "0";
    std::string out;
    for (std::size_t t = 0; t < terms.size(); ++t) {
        if (t == 0) {
            if (terms[t].multiplicity < 0) out += "-";
        } else {
            out += terms[t].multiplicity < 0 ? " - " : " + ";
        }
        out += term_body(terms[t]);
    }
    return out;
}

std::string LocalisationMap::render_all() const {
    std::string out;
    for (std::size_t i = 0; i < coords.size(); ++i) {
        out += coordinate_name(i) + " -> " + render(i) + "\n";
    }
    return out;
}

LocalisationMap build_localisation(const std::vector<std::uint32_t>& s, std::uint32_t depth) {
    check_s(s);
    if (depth < 1) throw std::invalid_argument("depth must be at least 1");
    // Term count grows like |S|^depth; keep symbolic output at sane sizes.
    double budget = 0;
    for (std::uint32_t k = 1; k <= depth; ++k) {
        double w = 1;
        for (std::uint32_t i = 0; i < k; ++i) {
            w *= std::max<std::size_t>(s.size(), 1);
            if (w > 2e6) throw std::invalid_argument("depth too large for this S");
        }
        budget += w;
        if (budget > 2e6) throw std::invalid_argument("depth too large for this S");
    }

    LocalisationMap map;
    map.s = s;
    map.depth = depth;
    map.coords.resize(depth + 1);

    for (std::uint32_t ell : s) {
        map.coords[0].push_back(Term{{{Letter::tau, ell}}, {{{Variable::x, ell}, 1}}, 1});
    }

    for (std::uint32_t k = 1; k <= depth; ++k) {
        std::vector<Term>& coord = map.coords[k];
        // Words of k tau letters: x-variables for the first k-1, y for the last.
        for_each_tuple(s, k, [&](const std::vector<std::uint32_t>& tuple) {
            Term t;
            for (std::uint32_t ell : tuple) t.word.push_back({Letter::tau, ell});
            for (std::size_t i = 0; i + 1 < tuple.size(); ++i) {
                ++t.monomial[{Variable::x, tuple[i]}];
            }
            ++t.monomial[{Variable::y, tuple.back()}];
            coord.push_back(std::move(t));
        });
        // Words sigma_j followed by k-j tau letters, for odd j = 3, 5, ... < k...
        for (std::uint32_t j = 3; j <= k; j += 2) {
            for_each_tuple(s, k - j, [&](const std::vector<std::uint32_t>& tuple) {
                Term t;
                t.word.push_back({Letter::sigma, j});
                for (std::uint32_t ell : tuple) t.word.push_back({Letter::tau, ell});
                for (std::uint32_t ell : tuple) ++t.monomial[{Variable::x, ell}];
                ++t.monomial[{Variable::z, j}];
                coord.push_back(std::move(t));
            });
        }
        std::sort(coord.begin(), coord.end(), term_less);
    }
    return map;
}

LocalisationMap restrict_refinement(const LocalisationMap& map, const Refinement& sigma) {
    if (sigma.size() != map.s.size()) {
        throw std::invalid_argument("refinement length must match |S|");
    }
    LocalisationMap out;
    out.s = map.s;
    out.depth = map.depth;
    out.coords.resize(map.coords.size());
    for (std::size_t i = 0; i < map.coords.size(); ++i) {
        for (const Term& term : map.coords[i]) {
            Term t = term;
            bool dead = false;
            for (std::size_t si = 0; si < map.s.size() && !dead; ++si) {
                std::uint32_t ell = map.s[si];
                Variable xv{Variable::x, ell}, yv{Variable::y, ell};
                switch (sigma[si]) {
                    case Cusp::zero:
                        dead = t.monomial.count(yv) > 0;
                        break;
                    case Cusp::one:
                        dead = t.monomial.count(xv) > 0;
                        break;
                    case Cusp::infinity:
                        if (auto it = t.monomial.find(yv); it != t.monomial.end()) {
                            std::uint32_t e = it->second;
                            t.monomial.erase(it);
                            t.monomial[xv] += e;
                            if (e & 1) t.multiplicity = -t.multiplicity;
                        }
                        break;
                }
            }
            if (!dead) out.coords[i].push_back(std::move(t));
        }
        std::sort(out.coords[i].begin(), out.coords[i].end(), term_less);
    }
    return out;
}

std::vector<std::size_t> vanishing_coordinates(const LocalisationMap& map) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < map.coords.size(); ++i) {
        if (map.coords[i].empty()) out.push_back(i);
    }
    return out;
}

std::uint64_t selmer_dimension(std::size_t s_count, std::uint64_t depth) {
    if (depth < 1) throw std::invalid_argument("depth must be at least 1");
    return 2 * static_cast<std::uint64_t>(s_count) + (depth - 1) / 2;
}

SpecializedPeriods specialize_single_letter(const LocalisationMap& map, std::uint64_t p,
                                            int digits) {
    SpecializedPeriods sp;
    sp.p = p;
    sp.digits = digits;
    for (const std::vector<Term>& coord : map.coords) {
        for (const Term& t : coord) {
            if (period_kind(t.word) != PeriodKind::log_of_prime) continue;
            if (sp.values.count(t.word)) continue;
            std::uint32_t ell = t.word[0].index;
            if (ell % p == 0) {
                throw std::domain_error("cannot specialize at a prime of S");
            }
            sp.values.emplace(t.word,
                              iwasawa_log(PAdicNumber::from_integer(mpz_class(ell), p, digits)));
        }
    }
    return sp;
}

std::string render_specialized(const LocalisationMap& map, const SpecializedPeriods& sp) {
    std::string out;
    for (std::size_t i = 0; i < map.coords.size(); ++i) {
        std::string line = map.coordinate_name(i) + " -> ";
        const std::vector<Term>& terms = map.coords[i];
        if (terms.empty()) {
            out += line + "0\n";
            continue;
        }
        for (std::size_t t = 0; t < terms.size(); ++t) {
            if (t == 0) {
                if (terms[t].multiplicity < 0) line += "-";
            } else {
                line += terms[t].multiplicity < 0 ? " - " : " + ";
            }
            std::string body = term_body(terms[t]);
            if (auto it = sp.values.find(terms[t].word); it != sp.values.end()) {
                std::string name = word_name(terms[t].word);
                std::string value = "(" + it->second.to_string() + ")";
                body.replace(body.find(name), name.size(), value);
            }
            line += body;
        }
        out += line + "\n";
    }
    return out;
}

std::string dump_structured(const LocalisationMap& map) {
    nlohmann::ordered_json doc;
    doc["s"] = map.s;
    doc["depth"] = map.depth;
    nlohmann::ordered_json coords = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < map.coords.size(); ++i) {
        nlohmann::ordered_json c;
        c["name"] = map.coordinate_name(i);
        nlohmann::ordered_json terms = nlohmann::ordered_json::array();
        for (const Term& t : map.coords[i]) {
            nlohmann::ordered_json jt;
            nlohmann::ordered_json w = nlohmann::ordered_json::array();
            for (const Letter& l : t.word) w.push_back(letter_name(l));
            jt["word"] = w;
            nlohmann::ordered_json mono;
            for (const auto& [var, exp] : t.monomial) mono[var.name()] = exp;
            jt["monomial"] = mono;
            jt["multiplicity"] = t.multiplicity;
            terms.push_back(jt);
        }
        c["terms"] = terms;
        coords.push_back(c);
    }
    doc["coordinates"] = coords;
    return doc.dump(2);
}

} // namespace kimloci
