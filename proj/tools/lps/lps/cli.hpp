#pragma once

// Command-line front end. Kept in a header so the test suites can drive it
// in-process.

#include <CLI11.hpp>

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "lps/lps.hpp"

namespace lps::cli {

enum ExitCode : int { kOk = 0, kPartial = 1, kInvalid = 2, kInternal = 3 };

/// Renders a JSON report as `path = value` lines, one per leaf, so the text
/// and JSON forms carry the same numbers.
inline void flatten(const Json& j, const std::string& path, std::ostream& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), out);
    } else if (j.is_array()) {
        if (j.empty()) out << path << " = []\n";
        for (std::size_t i = 0; i < j.size(); ++i)
            flatten(j[i], path + "[" + std::to_string(i) + "]", out);
    } else if (j.is_string()) {
        out << path << " = " << j.get<std::string>() << "\n";
    } else {
        out << path << " = " << j.dump() << "\n";
    }
}

inline void emit(const Json& j, const std::string& format, std::ostream& out) {
    if (format == "json") out << j.dump(2) << "\n";
    else flatten(j, "", out);
}

inline Json error_json(const std::string& kind, const std::string& message) {
    return Json{{"error", Json{{"type", kind}, {"message", message}}}};
}

struct ReproCheck {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

/// Desk-scale reproduction: exact scans, the unit-discriminant search and the
/// congruence sieve at B = 10^50.
inline std::vector<ReproCheck> run_repro(bool includeSieve, std::ostream* progress = nullptr) {
    std::vector<ReproCheck> checks;
    auto timed = [&](const std::string& name, const std::function<std::pair<bool, std::string>()>& f) {
        const auto t0 = std::chrono::steady_clock::now();
        auto [ok, detail] = f();
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        checks.push_back({name, ok, detail, s});
        if (progress) *progress << (ok ? "PASS " : "FAIL ") << name << " (" << s << " s) " << detail << "\n";
    };
    auto hits_str = [](const ScanResult& r) {
        std::string s = "{";
        for (const auto& h : r.nontrivial) {
            if (s.size() > 1) s += ",";
            s += "(" + std::to_string(h.n) + "," + to_decimal(h.y) + "," + std::to_string(h.p) + ")";
        }
        return s + "}";
    };
    auto scan_equals = [&](std::int64_t b, std::int64_t c, std::uint64_t nMax,
                           std::vector<std::tuple<std::uint64_t, long, unsigned>> expect) {
        auto r = scan_powers(new_params(b, c), nMax);
        bool ok = r.nontrivial.size() == expect.size();
        for (std::size_t i = 0; ok && i < expect.size(); ++i) {
            auto [n, y, p] = expect[i];
            ok = r.nontrivial[i].n == n && r.nontrivial[i].y == y && r.nontrivial[i].p == p;
        }
        return std::make_pair(ok, hits_str(r));
    };

    timed("fibonacci powers n<=5000", [&] { return scan_equals(1, 1, 5000, {{6, 2, 3}, {12, 12, 2}}); });
    timed("pell powers n<=2000", [&] { return scan_equals(2, 1, 2000, {{7, 13, 2}}); });
    for (auto [b, c] : std::vector<std::pair<int, int>>{{3, -2}, {5, -6}, {7, -12}, {17, -72}, {9, -20}}) {
        std::vector<std::tuple<std::uint64_t, long, unsigned>> expect;
        if (b == 9) expect = {{2, 3, 2}};
        timed("unit-discriminant (" + std::to_string(b) + "," + std::to_string(c) + ") n<=1000",
              [&] { return scan_equals(b, c, 1000, expect); });
    }
    timed("unit-discriminant search b<=10^4", [&] {
        auto got = search_unit_discriminant_sequences(10'000);
        std::vector<std::pair<std::int64_t, std::int64_t>> want{{3, -2}, {5, -6}, {7, -12}, {9, -20}, {17, -72}};
        std::string s;
        for (auto [b, c] : got) s += "(" + std::to_string(b) + "," + std::to_string(c) + ")";
        return std::make_pair(got == want, s);
    });
    if (includeSieve) {
        const BigInt B = parse_big("1e50");
        for (std::int64_t b : {3, 5, 7}) {
            for (unsigned p : {5u, 7u, 11u, 13u, 17u}) {
                timed("sieve (" + std::to_string(b) + ",1) p=" + std::to_string(p) + " B=1e50", [&] {
                    auto rep = sieve_run(new_params(b, 1), p, B);
                    bool ok = rep.verdict == Verdict::Complete;
                    for (const auto& s : rep.survivors()) ok = ok && s <= 1;
                    return std::make_pair(ok, std::string(verdict_name(rep.verdict)) + " primes=" +
                                                  std::to_string(rep.primesConsumed));
                });
            }
        }
    }
    return checks;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Perfect powers in Lucas sequences: scan, sieve, bounds and Frey curves", "lps"};
    app.require_subcommand(1);
    std::string format = "text";
    app.add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();

    std::int64_t b = 0, c = 0;
    auto add_bc = [&](CLI::App* sub) {
        sub->add_option("-b", b, "Recurrence coefficient b")->required();
        sub->add_option("-c", c, "Recurrence coefficient c")->required();
        sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
    };

    std::uint64_t nMax = 1000;
    auto* scan = app.add_subcommand("scan", "Exact search for u_n = y^p with n <= n-max");
    add_bc(scan);
    scan->add_option("--n-max", nMax, "Largest index to evaluate")->capture_default_str();

    unsigned p = 0;
    std::string boundText = "1e50";
    SieveConfig sc;
    std::string mInit, multipliers;
    auto* sieve = app.add_subcommand("sieve", "Congruence sieve ruling out p-th powers up to index B");
    add_bc(sieve);
    sieve->add_option("-p", p, "Prime exponent")->required();
    sieve->add_option("-B", boundText, "Index bound (decimal or 1e<k>)")->capture_default_str();
    sieve->add_option("--explosion-cap", sc.explosionCap, "Residue set size limit")->capture_default_str();
    sieve->add_option("--exact-check-limit", sc.exactCheckLimit, "Largest index checked exactly")
        ->capture_default_str();
    sieve->add_option("--max-prime", sc.maxPrime, "Upper limit for sieving primes q")->capture_default_str();
    sieve->add_option("--prime-cap", sc.maxPrimes, "Maximum number of primes consumed (0 = no limit)")
        ->capture_default_str();
    sieve->add_option("--max-rounds", sc.maxRounds, "Growth steps of the smooth modulus")->capture_default_str();
    sieve->add_option("--m-init", mInit, "Initial smooth modulus, e.g. 2^4*3^2*5");
    sieve->add_option("--multipliers", multipliers, "Comma-separated growth schedule, e.g. 2,3,5,7");
    sieve->add_option("--cache", sc.cachePath, "LPSV1 residue cache file");
    sieve->add_option("--threads", sc.threads, "Worker threads (default: LPS_THREADS or all cores)");

    auto* bound = app.add_subcommand("bound", "Conditional exponent bound and its intermediate values");
    add_bc(bound);

    std::uint64_t freyN = 7;
    bool printed = false, allowSmall = false;
    auto* frey = app.add_subcommand("frey", "Frey curve case, model and discriminant check for index n");
    add_bc(frey);
    frey->add_option("-n", freyN, "Index of the hypothetical solution")->capture_default_str();
    frey->add_flag("--printed", printed, "Use the coefficient table exactly as printed (no errata)");
    frey->add_flag("--allow-small-n", allowSmall, "Permit n < 7");

    std::uint64_t level = 1, weight = 2;
    auto* dims = app.add_subcommand("dims", "Level-N dimensions, Sturm bound and irrationality window");
    dims->add_option("-N", level, "Level")->required();
    dims->add_option("-k", weight, "Weight for the Sturm bound")->capture_default_str();
    dims->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));

    std::int64_t boundOnB = 10'000;
    auto* search = app.add_subcommand("search", "Unit-discriminant sequences with newform-free levels");
    search->add_option("--bound-b", boundOnB, "Largest b searched")->capture_default_str();
    search->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));

    std::string thueB;
    double thueLogB = -1;
    auto* thue = app.add_subcommand("thue", "Thue form coefficients and the implied index bound");
    add_bc(thue);
    thue->add_option("-p", p, "Odd prime exponent")->required();
    auto* thueBopt = thue->add_option("-B", thueB, "Bound on max(|X|,|Y|) (decimal or 1e<k>)");
    thue->add_option("--log-B", thueLogB, "Natural log of the bound instead of -B")->excludes(thueBopt);

    bool withSieve = true;
    auto* repro = app.add_subcommand("repro", "Run the desk-scale reproduction checks");
    repro->add_flag("!--no-sieve", withSieve, "Skip the sieve runs");
    repro->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        emit(error_json("ArgumentError", e.what()), format, err);
        return kInvalid;
    }

    try {
        if (scan->parsed()) {
            const auto P = new_params(b, c);
            emit(to_json(scan_powers(P, nMax), P, nMax), format, out);
            return kOk;
        }
        if (sieve->parsed()) {
            const auto P = new_params(b, c);
            if (!mInit.empty()) {
                SmoothModulus M;
                std::stringstream ss(mInit);
                std::string part;
                while (std::getline(ss, part, '*')) {
                    auto caret = part.find('^');
                    std::uint64_t prime = std::stoull(part.substr(0, caret));
                    unsigned e = caret == std::string::npos ? 1 : static_cast<unsigned>(std::stoul(part.substr(caret + 1)));
                    if (!is_prime_u64(prime)) throw InvalidArgument("--m-init factor " + part + " is not a prime power");
                    M.multiply(prime, e);
                }
                sc.initialModulus = M;
            }
            if (!multipliers.empty()) {
                std::stringstream ss(multipliers);
                std::string part;
                while (std::getline(ss, part, ',')) {
                    std::uint64_t m = std::stoull(part);
                    if (!is_prime_u64(m)) throw InvalidArgument("--multipliers entry " + part + " is not prime");
                    sc.multipliers.push_back(m);
                }
            }
            auto rep = sieve_run(P, p, parse_big(boundText), sc);
            emit(to_json(rep), format, out);
            return rep.verdict == Verdict::Complete ? kOk : kPartial;
        }
        if (bound->parsed()) {
            const auto P = new_params(b, c);
            Json j = to_json(combined_bound(P), P);
            if (auto pub = published_exponent_bound(b, c)) j["publishedSharpBound"] = *pub;
            emit(j, format, out);
            return kOk;
        }
        if (frey->parsed()) {
            const auto P = new_params(b, c);
            const auto h = make_hypothesis(P, freyN, allowSmall);
            const auto fc = select_case(h);
            const auto src = printed ? FormulaSource::Printed : FormulaSource::Corrected;
            const auto model = build_model(h, fc, src);
            const BigInt disc = model_discriminant(model);
            Json j{{"schema", "lps.frey_report/1"},
                   {"params", params_json(P)},
                   {"n", freyN},
                   {"u", to_decimal(h.u)},
                   {"v", to_decimal(h.v)},
                   {"case", Json{{"id", fc.id}, {"description", fc.description},
                                 {"alphaExponent", fc.alphaExponent}, {"wSign", fc.wSign}}},
                   {"model", to_json(model)},
                   {"modelDiscriminant", to_decimal(disc)},
                   {"deltaIdentity", disc == model.paperDelta},
                   {"conductorBound", to_decimal(conductor_bound(P))}};
            Json errata = Json::array();
            for (const auto& e : frey_errata())
                if (e.caseId == fc.id) errata.push_back(Json{{"printed", e.printed}, {"corrected", e.corrected}});
            j["errata"] = errata;
            emit(j, format, out);
            return kOk;
        }
        if (dims->parsed()) {
            Json j{{"schema", "lps.dims_report/1"},
                   {"N", level},
                   {"psiN", dedekind_psi_u64(level)},
                   {"genus", genus_x0(level)},
                   {"dimNew", dim_s2_new(level)},
                   {"sturmBound", sturm_bound(level, weight)},
                   {"weight", weight},
                   {"irrationalCoeffPrimeBound", irrational_coeff_prime_bound(level)}};
            emit(j, format, out);
            return kOk;
        }
        if (search->parsed()) {
            Json pairs = Json::array();
            for (auto [bb, cc] : search_unit_discriminant_sequences(boundOnB))
                pairs.push_back(Json{{"b", bb}, {"c", cc}, {"radC", to_decimal(radical(from_i64(cc)))}});
            emit(Json{{"schema", "lps.search_report/1"}, {"boundOnB", boundOnB}, {"pairs", pairs}}, format, out);
            return kOk;
        }
        if (thue->parsed()) {
            const auto P = new_params(b, c);
            const auto form = thue_form(P, p);
            Json coeffs = Json::array();
            for (unsigned i = 0; i <= p; ++i)
                coeffs.push_back(Json{{"xExponent", i}, {"yExponent", p - i}, {"coefficient", to_decimal(form.coefficients[i])}});
            Json j{{"schema", "lps.thue_report/1"}, {"b", b}, {"c", c}, {"p", p}, {"coefficients", coeffs}};
            if (!thueB.empty()) {
                j["B"] = to_decimal(parse_big(thueB));
                j["indexBound"] = to_decimal(thue_index_bound(P, p, parse_big(thueB)));
            } else if (thueLogB >= 0) {
                j["logB"] = thueLogB;
                j["indexBound"] = to_decimal(thue_index_bound_from_log(P, p, thueLogB));
            }
            emit(j, format, out);
            return kOk;
        }
        if (repro->parsed()) {
            auto checks = run_repro(withSieve, format == "text" ? &out : nullptr);
            bool all = true;
            Json arr = Json::array();
            for (const auto& ch : checks) {
                all = all && ch.pass;
                arr.push_back(Json{{"name", ch.name}, {"pass", ch.pass}, {"detail", ch.detail}, {"seconds", ch.seconds}});
            }
            if (format == "json") emit(Json{{"schema", "lps.repro_report/1"}, {"checks", arr}, {"allPassed", all}}, format, out);
            else out << (all ? "all checks passed\n" : "some checks FAILED\n");
            return all ? kOk : kPartial;
        }
    } catch (const Error& e) {
        emit(error_json(e.kind(), e.what()), format, err);
        return kInvalid;
    } catch (const std::exception& e) {
        emit(error_json("InternalError", e.what()), format, err);
        return kInternal;
    }
    return kInvalid;
}

} // namespace lps::cli
