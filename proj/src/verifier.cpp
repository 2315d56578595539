#include "kimloci/verifier.hpp"

#include "kimloci/kernels.hpp"
#include "kimloci/modmath.hpp"
#include "kimloci/moebius.hpp"
#include "kimloci/polylog.hpp"
#include "kimloci/selmer.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <set>
#include <thread>

namespace kimloci {

namespace {

using clock_type = std::chrono::steady_clock;

double ms_since(clock_type::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

void check_odd_prime(std::uint64_t p) {
    if (p < 3 || (p & 1) == 0 || !is_prime_u64(p)) {
        throw std::invalid_argument("p must be an odd prime");
    }
}

std::uint32_t moebius_mod_p(Moebius s, std::uint32_t a, std::uint32_t p) {
    std::uint64_t one_minus_a = (p + 1 - a % p) % p;
    switch (s) {
        case Moebius::identity: return a % p;
        case Moebius::inv: return static_cast<std::uint32_t>(invmod(a, p));
        case Moebius::one_minus: return static_cast<std::uint32_t>(one_minus_a);
        case Moebius::inv_one_minus: return static_cast<std::uint32_t>(invmod(one_minus_a, p));
        case Moebius::ratio1:
            return static_cast<std::uint32_t>(mulmod((a + p - 1) % p, invmod(a, p), p));
        case Moebius::ratio2:
            return static_cast<std::uint32_t>(mulmod(a % p, invmod((a + p - 1) % p, p), p));
    }
    throw std::logic_error("unknown moebius map");
}

// The two maps sending the cusp `from` to `to`, in all_moebius order.
std::pair<Moebius, Moebius> maps_between_cusps(Cusp from, Cusp to) {
    Moebius found[2] = {Moebius::identity, Moebius::identity};
    int n = 0;
    for (Moebius s : all_moebius) {
        if (cusp_image(s, from) == to) {
            if (n < 2) found[n] = s;
            ++n;
        }
    }
    if (n != 2) throw std::logic_error("cusp transporter count is off");
    return {found[0], found[1]};
}

// Residues a in F_p \ {0,1} with li_{p-3}(a) = 0 (necessary for membership in
// any locus cut out by the even-degree equations), kernel-scanned and then
// re-verified one by one along the independent scalar route.
std::vector<std::uint32_t> filtered_candidates(std::uint64_t p) {
    std::vector<std::uint32_t> roots = finite_li_roots(p - 3, static_cast<std::uint32_t>(p));
    for (std::uint32_t a : roots) {
        if (finite_li_eval(p - 3, a, static_cast<std::uint32_t>(p)).value != 0) {
            throw counterexample_error("kernel and scalar evaluation disagree at p=" +
                                       std::to_string(p) + ", a=" + std::to_string(a));
        }
    }
    return roots;
}

std::string label_set(const std::vector<const LocusResult*>& rows) {
    std::set<std::string> labels;
    for (const LocusResult* r : rows) {
        for (const LocusElement& e : r->locus) labels.insert(e.to_string());
    }
    std::string out = "{";
    for (auto it = labels.begin(); it != labels.end(); ++it) {
        if (it != labels.begin()) out += ",";
        out += *it;
    }
    return out + "}";
}

} // namespace

const char* locus_method_name(LocusMethod m) {
    switch (m) {
        case LocusMethod::finite_polylog: return "finite-polylog";
        case LocusMethod::root_of_unity_only: return "root-of-unity-only";
        case LocusMethod::derived_by_s3: return "derived-by-s3";
        case LocusMethod::empty_scheme: return "empty-scheme";
    }
    return "?";
}

const char* verify_status_name(VerifyStatus s) {
    switch (s) {
        case VerifyStatus::verified: return "verified";
        case VerifyStatus::counterexample: return "counterexample";
        case VerifyStatus::precision_failure: return "precision-failure";
    }
    return "?";
}

std::string LocusElement::to_string() const {
    if (label) return label->to_string();
    return "teich(" + std::to_string(residue) + ")";
}

LocusResult refined_locus_sigma_one(std::uint64_t p, int digits) {
    check_odd_prime(p);
    auto t0 = clock_type::now();
    LocusResult r;
    r.p = p;
    r.sigma = Refinement{Cusp::one};
    std::vector<std::uint32_t> roots;
    if (p == 3) {
        // Depth p-3 gives no polynomial filter; the log equation alone forces
        // Teichmuller lifts, and 2 is the only unit residue off the cusps.
        r.method = LocusMethod::root_of_unity_only;
        roots = {2};
    } else {
        r.method = LocusMethod::finite_polylog;
        roots = filtered_candidates(p);
    }
    for (std::uint32_t a : roots) {
        LocusElement e;
        e.residue = a;
        PAdicNumber w = teichmuller(a, p, digits);
        if (!iwasawa_log(w).is_zero()) {
            throw counterexample_error("log does not vanish on a Teichmuller lift at p=" +
                                       std::to_string(p));
        }
        e.lift = w;
        if (a == p - 1) e.label = RationalPoint::from_integer(-1);
        r.locus.push_back(std::move(e));
    }
    r.millis = ms_since(t0);
    return r;
}

namespace {

// Transport a Sigma=(1) locus to another refinement through the S_3 action,
// checking the two available transporters against each other and the lift
// against the transported global label.
LocusResult derive_by_s3(const LocusResult& base, Cusp target) {
    auto t0 = clock_type::now();
    auto [primary, alternate] = maps_between_cusps(Cusp::one, target);
    LocusResult out;
    out.p = base.p;
    out.sigma = Refinement{target};
    out.method = LocusMethod::derived_by_s3;
    std::uint32_t p32 = static_cast<std::uint32_t>(base.p);
    for (const LocusElement& e : base.locus) {
        LocusElement d;
        d.residue = moebius_mod_p(primary, e.residue, p32);
        if (moebius_mod_p(alternate, e.residue, p32) != d.residue) {
            throw counterexample_error("S3 transporters disagree mod p at p=" +
                                       std::to_string(base.p));
        }
        if (e.lift) {
            PAdicNumber lifted = apply_moebius(primary, *e.lift);
            if (lifted.residue(1) != d.residue) {
                throw counterexample_error("transported lift has wrong reduction at p=" +
                                           std::to_string(base.p));
            }
            d.lift = lifted;
        }
        if (e.label) {
            RationalPoint moved = apply_moebius(primary, *e.label);
            if (apply_moebius(alternate, *e.label) != moved) {
                throw counterexample_error("S3 transporters disagree on labels at p=" +
                                           std::to_string(base.p));
            }
            if (d.lift) {
                PAdicNumber direct = PAdicNumber::from_rational(
                    moved.num, moved.den, base.p, std::max(d.lift->rel_digits(), 1));
                if (!direct.agrees_to(*d.lift,
                                      std::min(direct.abs_digits(), d.lift->abs_digits()))) {
                    throw counterexample_error("transported lift disagrees with label at p=" +
                                               std::to_string(base.p));
                }
            }
            d.label = moved;
        }
        out.locus.push_back(std::move(d));
    }
    std::sort(out.locus.begin(), out.locus.end(),
              [](const LocusElement& a, const LocusElement& b) { return a.residue < b.residue; });
    out.millis = ms_since(t0);
    return out;
}

// The vanishing pattern used by the sweeps, checked against the symbolic
// machinery at small depth: under Sigma=(1) with S={2} exactly log and the
// even Li coordinates vanish.
void check_vanishing_pattern() {
    for (std::uint32_t depth : {1u, 2u, 3u, 8u, 11u}) {
        LocalisationMap map = build_localisation({2}, depth);
        LocalisationMap res = restrict_refinement(map, {Cusp::one});
        std::vector<std::size_t> got = vanishing_coordinates(res);
        std::vector<std::size_t> want;
        want.push_back(0);
        for (std::size_t k = 2; k <= depth; k += 2) want.push_back(k);
        if (got != want) {
            throw std::logic_error("restricted vanishing pattern deviates from parity rule");
        }
    }
}

struct PerPrime {
    std::vector<LocusResult> rows;
    std::string error;
    bool precision_related = false;
};

PerPrime compute_refined_prime(std::uint64_t p, const VerifyOptions& opt, bool inject) {
    PerPrime out;
    try {
        if (opt.force_precision_failure) {
            throw precision_failure("precision escalation exhausted (forced by test hook)");
        }
        LocusResult row1 = refined_locus_sigma_one(p, opt.policy.initial);
        if (inject) {
            // Plant an unlabeled element the checks below must reject.
            LocusElement fake;
            fake.residue = 2;
            row1.locus.push_back(fake);
        }
        LocusResult row0 = derive_by_s3(row1, Cusp::zero);
        LocusResult rowinf = derive_by_s3(row1, Cusp::infinity);
        for (const LocusResult* r : {&row1, &row0, &rowinf}) {
            for (const LocusElement& e : r->locus) {
                if (!e.label) {
                    throw counterexample_error(
                        "unexpected locus element teich(" + std::to_string(e.residue) +
                        ") at p=" + std::to_string(p) + ", sigma=" + refinement_name(*r->sigma));
                }
                // The label must be a global point whose reduction behaviour
                // at 2 forces exactly this refinement.
                std::vector<Refinement> mem = refinement_membership(*e.label, {2});
                if (mem.size() != 1 || mem[0] != *r->sigma) {
                    throw counterexample_error("label " + e.label->to_string() +
                                               " does not reduce with type " +
                                               refinement_name(*r->sigma));
                }
            }
        }
        std::string got = label_set({&row1, &row0, &rowinf});
        if (got != "{-1,1/2,2}") {
            throw counterexample_error("locus union at p=" + std::to_string(p) + " is " + got +
                                       ", expected {-1,1/2,2}");
        }
        out.rows.push_back(std::move(row1));
        out.rows.push_back(std::move(row0));
        out.rows.push_back(std::move(rowinf));
    } catch (const precision_failure& e) {
        out.error = e.what();
        out.precision_related = true;
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    return out;
}

PerPrime compute_unrefined_prime(std::uint64_t p, const VerifyOptions& opt, bool inject) {
    PerPrime out;
    try {
        if (opt.force_precision_failure) {
            throw precision_failure("precision escalation exhausted (forced by test hook)");
        }
        LocusResult row = unrefined_locus(p, opt.policy);
        if (inject) {
            LocusElement fake;
            fake.residue = 2;
            row.locus.push_back(fake);
        }
        if (!row.locus.empty()) {
            throw counterexample_error("unrefined locus at p=" + std::to_string(p) +
                                       " is nonempty: " + row.locus.front().to_string());
        }
        out.rows.push_back(std::move(row));
    } catch (const precision_failure& e) {
        out.error = e.what();
        out.precision_related = true;
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    return out;
}

// Run `compute` over the primes with opt.jobs workers, merging in prime order.
template <typename F>
void run_sweep(VerificationReport& report, const std::vector<std::uint32_t>& primes,
               unsigned jobs, F&& compute) {
    std::vector<PerPrime> slots(primes.size());
    if (jobs <= 1 || primes.size() <= 1) {
        for (std::size_t i = 0; i < primes.size(); ++i) {
            slots[i] = compute(primes[i], i == 0);
            if (!slots[i].error.empty()) break;
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::atomic<bool> stop{false};
        auto worker = [&]() {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= primes.size() || stop.load()) break;
                slots[i] = compute(primes[i], i == 0);
                if (!slots[i].error.empty()) stop.store(true);
            }
        };
        std::vector<std::thread> pool;
        unsigned n = std::min<unsigned>(jobs, static_cast<unsigned>(primes.size()));
        pool.reserve(n);
        for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    for (std::size_t i = 0; i < primes.size(); ++i) {
        for (LocusResult& row : slots[i].rows) report.results.push_back(std::move(row));
        if (!slots[i].error.empty() && report.status == VerifyStatus::verified) {
            report.status = slots[i].precision_related ? VerifyStatus::precision_failure
                                                       : VerifyStatus::counterexample;
            report.detail = slots[i].error;
        }
    }
}

} // namespace

LocusResult unrefined_locus(std::uint64_t p, const PrecisionPolicy& policy) {
    check_odd_prime(p);
    auto t0 = clock_type::now();
    LocusResult r;
    r.p = p;
    std::vector<std::uint32_t> roots;
    if (p == 3) {
        r.method = LocusMethod::root_of_unity_only;
        roots = {2};
    } else {
        r.method = LocusMethod::finite_polylog;
        roots = filtered_candidates(p);
    }
    // Each survivor of the even-degree filter must now be killed by Li_1: the
    // locus of the full equation system is expected to be empty.
    for (std::uint32_t a : roots) {
        int digits = policy.initial;
        for (;;) {
            PAdicNumber w = teichmuller(a, p, digits);
            PAdicNumber c = li1(w, digits);
            if (!c.is_zero()) break;
            digits = policy.next(digits);
            if (digits == 0) {
                throw precision_failure("cannot certify Li_1(teich(" + std::to_string(a) +
                                        ")) != 0 at p=" + std::to_string(p) +
                                        " within the precision budget");
            }
        }
    }
    r.millis = ms_since(t0);
    return r;
}

LocusResult depth1_locus(std::uint64_t p, int digits) {
    check_odd_prime(p);
    if (p > kernels::max_modulus) throw std::invalid_argument("p too large");
    auto t0 = clock_type::now();
    LocusResult r;
    r.p = p;
    r.method = LocusMethod::root_of_unity_only;
    std::uint64_t p2 = p * p;
    for (std::uint64_t a = 2; a < p; ++a) {
        // Stage 1, sound filter mod p^2: the locus needs 1 - teich(a) to be a
        // root of unity, and teich(a) = a^p mod p^2.
        std::uint64_t w2 = powmod(a, p, p2);
        std::uint64_t b = (p2 + 1 - w2) % p2;
        if (b % p == 0) continue;
        if (powmod(b, p - 1, p2) != 1) continue;
        // Stage 2: certify the sixth-root-of-unity property exactly.
        PAdicNumber w = teichmuller(a, p, digits);
        PAdicNumber q = w * w - w + PAdicNumber::one(p, digits);
        if (q.is_zero()) {
            LocusElement e;
            e.residue = static_cast<std::uint32_t>(a);
            e.lift = w;
            r.locus.push_back(std::move(e));
        } else {
            PAdicNumber c = li1(w, digits);
            if (c.is_zero()) {
                throw precision_failure("depth-1 candidate a=" + std::to_string(a) + " at p=" +
                                        std::to_string(p) + " undecided at this precision");
            }
        }
    }
    // The locus must be the primitive sixth roots of unity, present iff p = 1 mod 3.
    std::vector<std::uint32_t> expected;
    for (std::uint64_t a = 2; a < p; ++a) {
        if ((a * a - a + 1) % p == 0) expected.push_back(static_cast<std::uint32_t>(a));
    }
    if (p % 3 != 1 && !expected.empty() && p != 3) {
        throw std::logic_error("quadratic root count contradicts p mod 3");
    }
    std::vector<std::uint32_t> got;
    for (const LocusElement& e : r.locus) got.push_back(e.residue);
    bool match = (p % 3 == 1) ? (got == expected) : got.empty();
    if (!match) {
        throw counterexample_error("depth-1 locus at p=" + std::to_string(p) +
                                   " does not match the p mod 3 description");
    }
    r.millis = ms_since(t0);
    return r;
}

VerificationReport verify_refined(const std::vector<std::uint32_t>& s, std::uint64_t p_min,
                                  std::uint64_t p_max, const VerifyOptions& opt) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!is_prime_u64(s[i])) throw std::invalid_argument("S must consist of primes");
        if (i > 0 && s[i - 1] >= s[i]) throw std::invalid_argument("S must be strictly ascending");
    }
    if (p_min > p_max) throw std::invalid_argument("empty prime range");
    bool s_is_two = (s.size() == 1 && s[0] == 2);
    bool without_two = std::find(s.begin(), s.end(), 2u) == s.end();
    if (!s_is_two && !without_two) {
        throw std::invalid_argument("refined verification supports S={2} or S without 2");
    }

    VerificationReport report;
    report.theorem = "refined-kim";
    report.s = s;
    report.p_min = p_min;
    report.p_max = p_max;
    report.precision = opt.policy.initial;

    std::vector<std::uint32_t> primes = odd_primes_in(p_min, p_max);
    primes.erase(std::remove_if(primes.begin(), primes.end(),
                                [&](std::uint32_t p) {
                                    return std::find(s.begin(), s.end(), p) != s.end();
                                }),
                 primes.end());

    if (without_two) {
        // With 2 outside S every S-unit is odd, so z + (1-z) = 1 cannot hold:
        // Y(Z_S) is empty and the refined scheme carries no points. Cross-check
        // the point search at a small bound, then report empty loci.
        std::uint32_t bound = s.size() <= 2 ? 12 : 6;
        if (!enumerate_integral_points(s, bound).empty()) {
            report.status = VerifyStatus::counterexample;
            report.detail = "S-unit points exist although 2 is not in S";
            return report;
        }
        for (std::uint32_t p : primes) {
            auto t0 = clock_type::now();
            LocusResult row;
            row.p = p;
            row.method = LocusMethod::empty_scheme;
            row.millis = ms_since(t0);
            report.results.push_back(std::move(row));
        }
        if (opt.inject_counterexample && !report.results.empty()) {
            LocusElement fake;
            fake.residue = 2;
            report.results.front().locus.push_back(fake);
        }
        for (const LocusResult& row : report.results) {
            if (!row.locus.empty()) {
                report.status = VerifyStatus::counterexample;
                report.detail = "empty-scheme locus at p=" + std::to_string(row.p) +
                                " is nonempty";
                break;
            }
        }
        if (opt.force_precision_failure && report.status == VerifyStatus::verified) {
            report.status = VerifyStatus::precision_failure;
            report.detail = "precision escalation exhausted (forced by test hook)";
        }
        return report;
    }

    check_vanishing_pattern();
    run_sweep(report, primes, opt.jobs, [&](std::uint64_t p, bool first) {
        return compute_refined_prime(p, opt, first && opt.inject_counterexample);
    });
    return report;
}

VerificationReport verify_unrefined(std::uint64_t p_min, std::uint64_t p_max,
                                    const VerifyOptions& opt) {
    if (p_min > p_max) throw std::invalid_argument("empty prime range");
    VerificationReport report;
    report.theorem = "unrefined-kim";
    report.p_min = p_min;
    report.p_max = p_max;
    report.precision = opt.policy.initial;
    std::vector<std::uint32_t> primes = odd_primes_in(p_min, p_max);
    run_sweep(report, primes, opt.jobs, [&](std::uint64_t p, bool first) {
        return compute_unrefined_prime(p, opt, first && opt.inject_counterexample);
    });
    return report;
}

VerificationReport verify_depth1(std::uint64_t p, const VerifyOptions& opt) {
    VerificationReport report;
    report.theorem = "depth1";
    report.p_min = p;
    report.p_max = p;
    report.precision = opt.policy.initial;
    try {
        if (opt.force_precision_failure) {
            throw precision_failure("precision escalation exhausted (forced by test hook)");
        }
        LocusResult row = depth1_locus(p, opt.policy.initial);
        if (opt.inject_counterexample) {
            LocusElement fake;
            fake.residue = 2;
            row.locus.push_back(fake);
            report.results.push_back(std::move(row));
            throw counterexample_error("depth-1 locus at p=" + std::to_string(p) +
                                       " contains a planted element");
        }
        report.results.push_back(std::move(row));
    } catch (const precision_failure& e) {
        report.status = VerifyStatus::precision_failure;
        report.detail = e.what();
    } catch (const std::exception& e) {
        report.status = VerifyStatus::counterexample;
        report.detail = e.what();
    }
    return report;
}

std::string VerificationReport::to_json() const {
    nlohmann::ordered_json doc;
    doc["theorem"] = theorem;
    doc["s"] = s;
    doc["p_min"] = p_min;
    doc["p_max"] = p_max;
    doc["precision"] = precision;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const LocusResult& r : results) {
        nlohmann::ordered_json row;
        row["p"] = r.p;
        if (r.sigma) row["sigma"] = refinement_name(*r.sigma);
        nlohmann::ordered_json locus = nlohmann::ordered_json::array();
        for (const LocusElement& e : r.locus) locus.push_back(e.to_string());
        row["locus"] = locus;
        row["method"] = locus_method_name(r.method);
        row["millis"] = r.millis;
        rows.push_back(row);
    }
    doc["results"] = rows;
    doc["status"] = verify_status_name(status);
    if (status != VerifyStatus::verified) doc["detail"] = detail;
    return doc.dump(2);
}

std::string VerificationReport::to_text() const {
    std::string out = "theorem: " + theorem + "\n";
    out += "S = {";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(s[i]);
    }
    out += "}, primes in [" + std::to_string(p_min) + ", " + std::to_string(p_max) +
           "], precision " + std::to_string(precision) + "\n";
    for (const LocusResult& r : results) {
        out += "p=" + std::to_string(r.p);
        if (r.sigma) out += " sigma=" + refinement_name(*r.sigma);
        out += " method=" + std::string(locus_method_name(r.method)) + " locus={";
        for (std::size_t i = 0; i < r.locus.size(); ++i) {
            if (i) out += ",";
            out += r.locus[i].to_string();
        }
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.2f", r.millis);
        out += "} (" + std::string(buf) + " ms)\n";
    }
    out += "status: " + std::string(verify_status_name(status)) + "\n";
    if (status != VerifyStatus::verified) out += "detail: " + detail + "\n";
    return out;
}

} // namespace kimloci
