#pragma once

#include "kimloci/padic.hpp"
#include "kimloci/points.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace kimloci {

enum class LocusMethod {
    finite_polylog,      // candidates cut out by the degree p-1 polynomial scan
    root_of_unity_only,  // no polynomial filter available (p = 3, depth 1)
    derived_by_s3,       // image of another refinement's locus under S_3
    empty_scheme,        // 2 not in S: the refined scheme has no points at all
};

const char* locus_method_name(LocusMethod m);

struct LocusElement {
    std::uint32_t residue = 0;                // reduction mod p
    std::optional<RationalPoint> label;       // matching global point, if any
    std::optional<PAdicNumber> lift;          // p-adic element of the locus

    std::string to_string() const;  // "2", "-1", "1/2", or "teich(a)"
};

struct LocusResult {
    std::uint64_t p = 0;
    std::optional<Refinement> sigma;
    std::vector<LocusElement> locus;
    LocusMethod method = LocusMethod::finite_polylog;
    double millis = 0;
};

// Raised when a computed locus contradicts the expected description.
struct counterexample_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class VerifyStatus { verified, counterexample, precision_failure };

const char* verify_status_name(VerifyStatus s);

struct VerificationReport {
    std::string theorem;
    std::vector<std::uint32_t> s;
    std::uint64_t p_min = 0;
    std::uint64_t p_max = 0;
    int precision = 0;
    std::vector<LocusResult> results;
    VerifyStatus status = VerifyStatus::verified;
    std::string detail;  // empty when verified

    std::string to_json() const;
    std::string to_text() const;
};

struct VerifyOptions {
    PrecisionPolicy policy;
    unsigned jobs = 1;
    // Test hooks: plant a bogus locus element / simulate an exhausted
    // precision budget, to exercise the failure paths end to end.
    bool inject_counterexample = false;
    bool force_precision_failure = false;
};

// The Sigma = (1) locus for S = {2} at one prime p (odd, not 2): common zeros
// of the coordinates that vanish on the restricted Selmer scheme, i.e.
// log(z) = 0 and Li_k(z) = 0 for even k <= p-3.
LocusResult refined_locus_sigma_one(std::uint64_t p, int digits);

// Locus of the full (unrefined) equations for S = {}, depth max(p-3, 1).
LocusResult unrefined_locus(std::uint64_t p, const PrecisionPolicy& policy);

// Common zeros of log and Li_1 at p: empty for p = 2 mod 3, the two primitive
// sixth roots of unity for p = 1 mod 3.
LocusResult depth1_locus(std::uint64_t p, int digits);

// Sweep drivers. Refined requires S = {2} (theorem path) or 2 not in S
// (empty-scheme path); unrefined is the S = {} statement.
VerificationReport verify_refined(const std::vector<std::uint32_t>& s, std::uint64_t p_min,
                                  std::uint64_t p_max, const VerifyOptions& opt);
VerificationReport verify_unrefined(std::uint64_t p_min, std::uint64_t p_max,
                                    const VerifyOptions& opt);
VerificationReport verify_depth1(std::uint64_t p, const VerifyOptions& opt);

} // namespace kimloci
