#include "kimloci/kernels.hpp"
#include "kimloci/padic.hpp"
#include "kimloci/points.hpp"
#include "kimloci/polylog.hpp"
#include "kimloci/selmer.hpp"
#include "kimloci/verifier.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

namespace {

using namespace kimloci;

constexpr int kExitVerified = 0;
constexpr int kExitCounterexample = 1;
constexpr int kExitPrecision = 2;
constexpr int kExitUsage = 64;

int report_exit_code(VerifyStatus s) {
    switch (s) {
        case VerifyStatus::verified: return kExitVerified;
        case VerifyStatus::counterexample: return kExitCounterexample;
        case VerifyStatus::precision_failure: return kExitPrecision;
    }
    return kExitCounterexample;
}

struct SweepConfig {
    std::vector<std::uint32_t> s{2};
    std::uint64_t pmin = 3;
    std::uint64_t pmax = 10000;
    std::uint64_t p = 0;  // depth1 only
    int precision = 8;
    unsigned jobs = 1;
    std::string out;
    std::string format = "json";
    bool inject = false;
    bool force_fail = false;

    VerifyOptions options() const {
        VerifyOptions opt;
        opt.policy.initial = precision;
        opt.policy.max = std::max(opt.policy.max, precision);
        opt.jobs = jobs;
        opt.inject_counterexample = inject;
        opt.force_precision_failure = force_fail;
        return opt;
    }
};

void write_output(const std::string& body, const std::string& out) {
    if (out.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream f(out);
    if (!f) throw std::invalid_argument("cannot open output file " + out);
    f << body;
}

int emit_report(const VerificationReport& report, const SweepConfig& cfg) {
    std::string body =
        cfg.format == "text" ? report.to_text() : report.to_json() + "\n";
    write_output(body, cfg.out);
    if (!cfg.out.empty()) {
        std::cout << verify_status_name(report.status) << " (report written to " << cfg.out
                  << ")\n";
    }
    return report_exit_code(report.status);
}

void add_report_options(CLI::App* cmd, SweepConfig& cfg) {
    cmd->add_option("--precision", cfg.precision, "Initial p-adic precision in digits")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--out", cfg.out, "Write the report to this file");
    cmd->add_option("--format", cfg.format, "Report format")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();
    cmd->add_flag("--test-inject-counterexample", cfg.inject)->group("");
    cmd->add_flag("--test-force-precision-failure", cfg.force_fail)->group("");
}

void add_sweep_options(CLI::App* cmd, SweepConfig& cfg) {
    cmd->add_option("--pmin", cfg.pmin, "Smallest prime to check")->capture_default_str();
    cmd->add_option("--pmax", cfg.pmax, "Largest prime to check")->capture_default_str();
    cmd->add_option("--jobs", cfg.jobs, "Worker threads")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_report_options(cmd, cfg);
}

Cusp parse_cusp(const std::string& text) {
    if (text == "0") return Cusp::zero;
    if (text == "1") return Cusp::one;
    if (text == "inf" || text == "oo") return Cusp::infinity;
    throw std::invalid_argument("cusp must be one of 0, 1, inf");
}

std::pair<mpz_class, mpz_class> parse_rational(const std::string& text) {
    try {
        auto slash = text.find('/');
        mpz_class num;
        mpz_class den = 1;
        if (slash == std::string::npos) {
            num = mpz_class(text);
        } else {
            num = mpz_class(text.substr(0, slash));
            den = mpz_class(text.substr(slash + 1));
        }
        if (den == 0) throw std::invalid_argument("zero denominator");
        return {num, den};
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("cannot parse rational number '" + text + "'");
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Chabauty-Kim loci for the thrice-punctured line"};
    app.require_subcommand(1);
    int rc = kExitVerified;

    // verify refined / verify unrefined
    SweepConfig refined_cfg;
    SweepConfig unrefined_cfg;
    CLI::App* verify = app.add_subcommand("verify", "Sweep primes and verify locus descriptions");
    verify->require_subcommand(1);
    CLI::App* refined = verify->add_subcommand(
        "refined", "Per-refinement loci over Z_S (S = {2}, or 2 not in S)");
    refined->add_option("--s", refined_cfg.s, "Primes of S, comma separated")
        ->delimiter(',')
        ->capture_default_str();
    add_sweep_options(refined, refined_cfg);
    refined->callback([&] {
        rc = emit_report(verify_refined(refined_cfg.s, refined_cfg.pmin, refined_cfg.pmax,
                                        refined_cfg.options()),
                         refined_cfg);
    });
    CLI::App* unrefined =
        verify->add_subcommand("unrefined", "Locus of the full equation system over Z (S = {})");
    add_sweep_options(unrefined, unrefined_cfg);
    unrefined->callback([&] {
        rc = emit_report(
            verify_unrefined(unrefined_cfg.pmin, unrefined_cfg.pmax, unrefined_cfg.options()),
            unrefined_cfg);
    });

    // depth1
    SweepConfig depth1_cfg;
    CLI::App* depth1 = app.add_subcommand("depth1", "Depth 1 locus (zeros of log and Li_1) at p");
    depth1->add_option("--p", depth1_cfg.p, "Odd prime")->required();
    add_report_options(depth1, depth1_cfg);
    depth1->callback(
        [&] { rc = emit_report(verify_depth1(depth1_cfg.p, depth1_cfg.options()), depth1_cfg); });

    // equations
    struct {
        std::vector<std::uint32_t> s{2};
        std::uint32_t depth = 0;
        std::vector<std::string> sigma;
        std::uint64_t specialize_p = 0;
        int precision = 8;
        std::string out;
        std::string format = "text";
    } eq_cfg;
    CLI::App* equations =
        app.add_subcommand("equations", "Print the localisation map coordinates in depth n");
    equations->add_option("--s", eq_cfg.s, "Primes of S, comma separated")
        ->delimiter(',')
        ->capture_default_str();
    equations->add_option("--depth", eq_cfg.depth, "Depth of the polylogarithmic quotient")
        ->required()
        ->check(CLI::PositiveNumber);
    equations->add_option("--sigma", eq_cfg.sigma,
                          "Refinement: one cusp (0, 1, or inf) per prime of S, comma separated")
        ->delimiter(',');
    equations->add_option("--specialize-p", eq_cfg.specialize_p,
                          "Also print the coordinates with log periods evaluated at this prime");
    equations->add_option("--precision", eq_cfg.precision, "Digits for --specialize-p")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    equations->add_option("--out", eq_cfg.out, "Write to this file");
    equations->add_option("--format", eq_cfg.format, "Output format")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();
    equations->callback([&] {
        LocalisationMap map = build_localisation(eq_cfg.s, eq_cfg.depth);
        std::string sigma_name;
        if (!eq_cfg.sigma.empty()) {
            if (eq_cfg.sigma.size() != eq_cfg.s.size()) {
                throw std::invalid_argument("--sigma needs one cusp per prime of S");
            }
            Refinement ref;
            for (const std::string& c : eq_cfg.sigma) ref.push_back(parse_cusp(c));
            map = restrict_refinement(map, ref);
            sigma_name = refinement_name(ref);
        }
        std::string body;
        if (eq_cfg.format == "json") {
            body = dump_structured(map) + "\n";
        } else {
            body = "S = {";
            for (std::size_t i = 0; i < eq_cfg.s.size(); ++i) {
                if (i) body += ",";
                body += std::to_string(eq_cfg.s[i]);
            }
            body += "}, depth " + std::to_string(eq_cfg.depth);
            if (!sigma_name.empty()) body += ", sigma = " + sigma_name;
            body += ", selmer dimension " +
                    std::to_string(selmer_dimension(eq_cfg.s.size(), eq_cfg.depth)) + "\n";
            body += map.render_all();
            body += "vanishing:";
            std::vector<std::size_t> dead = vanishing_coordinates(map);
            if (dead.empty()) body += " none";
            for (std::size_t i : dead) body += " " + map.coordinate_name(i);
            body += "\n";
            if (eq_cfg.specialize_p != 0) {
                SpecializedPeriods sp =
                    specialize_single_letter(map, eq_cfg.specialize_p, eq_cfg.precision);
                body += "with periods at p = " + std::to_string(eq_cfg.specialize_p) + ":\n";
                body += render_specialized(map, sp);
            }
        }
        write_output(body, eq_cfg.out);
    });

    // points
    struct {
        std::vector<std::uint32_t> s;
        std::uint32_t bound = 20;
    } pt_cfg;
    CLI::App* points = app.add_subcommand("points", "Enumerate S-integral points of P1 - {0,1,inf}");
    points->add_option("--s", pt_cfg.s, "Primes of S, comma separated")
        ->delimiter(',')
        ->required();
    points->add_option("--bound", pt_cfg.bound, "Height bound on numerator and denominator")
        ->capture_default_str();
    points->callback([&] {
        for (const RationalPoint& z : enumerate_integral_points(pt_cfg.s, pt_cfg.bound)) {
            std::cout << z.to_string() << "\n";
        }
    });

    // eval log / eval li / eval teich
    struct {
        std::uint64_t p = 0;
        std::uint64_t n = 1;
        std::uint64_t a = 0;
        int precision = 8;
        std::string z;
    } ev_cfg;
    CLI::App* eval = app.add_subcommand("eval", "Evaluate one p-adic quantity");
    eval->require_subcommand(1);
    CLI::App* ev_log = eval->add_subcommand("log", "Iwasawa logarithm of a rational number");
    ev_log->add_option("--p", ev_cfg.p, "Prime")->required();
    ev_log->add_option("--precision", ev_cfg.precision, "Digits")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    ev_log->add_option("z", ev_cfg.z, "Rational number, e.g. 2 or -5/3")->required();
    ev_log->callback([&] {
        auto [num, den] = parse_rational(ev_cfg.z);
        if (num == 0) throw std::invalid_argument("log is undefined at 0");
        PAdicNumber z = PAdicNumber::from_rational(num, den, ev_cfg.p, ev_cfg.precision);
        // Iwasawa branch: log p = 0, so only the unit part contributes.
        std::cout << iwasawa_log(z.valuation() == 0 ? z : z.unit_as_padic()).to_string() << "\n";
    });
    CLI::App* ev_li = eval->add_subcommand("li", "Polylogarithm Li_n of a rational number");
    ev_li->add_option("--n", ev_cfg.n, "Weight")->required()->check(CLI::PositiveNumber);
    ev_li->add_option("--p", ev_cfg.p, "Prime")->required();
    ev_li->add_option("--precision", ev_cfg.precision, "Digits")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    ev_li->add_option("z", ev_cfg.z, "Rational number")->required();
    ev_li->callback([&] {
        auto [num, den] = parse_rational(ev_cfg.z);
        PAdicNumber z = PAdicNumber::from_rational(num, den, ev_cfg.p, ev_cfg.precision);
        PAdicNumber value = PAdicNumber::zero(ev_cfg.p, 1);
        if (ev_cfg.n == 1) {
            value = li1(z, ev_cfg.precision);
        } else if (z.is_zero() || z.valuation() >= 1) {
            value = polylog_series(ev_cfg.n, z, ev_cfg.precision);
        } else {
            throw std::invalid_argument(
                "Li_n for n > 1 is only evaluated on the open unit disc (v_p(z) >= 1)");
        }
        std::cout << value.to_string() << "\n";
    });
    CLI::App* ev_teich = eval->add_subcommand("teich", "Teichmuller lift of a residue");
    ev_teich->add_option("--p", ev_cfg.p, "Prime")->required();
    ev_teich->add_option("--precision", ev_cfg.precision, "Digits")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    ev_teich->add_option("a", ev_cfg.a, "Residue mod p, not divisible by p")->required();
    ev_teich->callback(
        [&] { std::cout << teichmuller(ev_cfg.a, ev_cfg.p, ev_cfg.precision).to_string() << "\n"; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    } catch (const precision_failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPrecision;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCounterexample;
    }
    return rc;
}
