#pragma once

// JSON forms of the library's reports. Big integers are decimal strings;
// every object carries a "schema" tag matching a file under docs/schemas/.

#include <json.hpp>

#include <string>
#include <vector>

#include "lps/bigint.hpp"
#include "lps/bounds.hpp"
#include "lps/frey.hpp"
#include "lps/sieve.hpp"

namespace lps {

using Json = nlohmann::ordered_json;

inline std::string big_str(const BigInt& x) { return to_decimal(x); }
inline BigInt big_from(const Json& j) { return parse_big(j.get<std::string>()); }

inline Json params_json(const SequenceParams& P) {
    return Json{{"b", P.b},
                {"c", P.c},
                {"disc", big_str(P.disc)},
                {"alphaAbsLog", P.alphaAbsLog},
                {"k2", P.k2},
                {"oddPart", big_str(P.oddPart)}};
}

inline Json to_json(const BoundReport& r, const SequenceParams& P) {
    return Json{{"schema", "lps.bound_report/1"},
                {"params", params_json(P)},
                {"N", big_str(r.N)},
                {"psiN", big_str(r.psiN)},
                {"avBound", big_str(r.avBound)},
                {"ellBound", big_str(r.ellBound)},
                {"ellBoundSharp", big_str(r.ellBoundSharp)},
                {"finalP", big_str(r.finalP)},
                {"largestPrimeOfN", big_str(r.largestPrimeOfN)}};
}

inline BoundReport bound_report_from_json(const Json& j) {
    BoundReport r;
    r.N = big_from(j.at("N"));
    r.psiN = big_from(j.at("psiN"));
    r.avBound = big_from(j.at("avBound"));
    r.ellBound = big_from(j.at("ellBound"));
    r.ellBoundSharp = big_from(j.at("ellBoundSharp"));
    r.finalP = big_from(j.at("finalP"));
    r.largestPrimeOfN = big_from(j.at("largestPrimeOfN"));
    return r;
}

inline bool operator==(const BoundReport& a, const BoundReport& b) {
    return a.N == b.N && a.psiN == b.psiN && a.avBound == b.avBound && a.ellBound == b.ellBound &&
           a.ellBoundSharp == b.ellBoundSharp && a.finalP == b.finalP &&
           a.largestPrimeOfN == b.largestPrimeOfN;
}

inline Json to_json(const SieveReport& r) {
    Json resolved = Json::array();
    for (const auto& x : r.resolved) {
        resolved.push_back(Json{{"n", big_str(x.n)},
                                {"isPower", x.isPower},
                                {"witness", x.witness ? Json(big_str(*x.witness)) : Json(nullptr)}});
    }
    Json unresolved = Json::array();
    for (const auto& x : r.unresolved) unresolved.push_back(big_str(x));
    Json survivors = Json::array();
    for (const auto& x : r.survivors()) survivors.push_back(big_str(x));
    return Json{{"schema", "lps.sieve_report/1"},
                {"b", r.b},
                {"c", r.c},
                {"p", r.p},
                {"indexBound", big_str(r.indexBound)},
                {"verdict", verdict_name(r.verdict)},
                {"resolved", resolved},
                {"unresolved", unresolved},
                {"survivors", survivors},
                {"finalModulus", big_str(r.finalModulus)},
                {"primesConsumed", r.primesConsumed},
                {"stats",
                 Json{{"rounds", r.rounds},
                      {"candidatePrimes", r.candidatePrimes},
                      {"filledPrimes", r.filledPrimes},
                      {"survivorsAboveBound", r.survivorsAboveBound},
                      {"eliminatedByExtraPrimes", r.eliminatedByExtraPrimes},
                      {"largestResidueSet", r.largestResidueSet},
                      {"meanPassRate", r.meanPassRate},
                      {"meanResidueDensity", r.meanResidueDensity},
                      {"elapsedSeconds", r.elapsedSeconds},
                      {"smoothModulus", r.smoothModulus},
                      {"note", r.note}}}};
}

inline SieveReport sieve_report_from_json(const Json& j) {
    SieveReport r;
    r.b = j.at("b").get<std::int64_t>();
    r.c = j.at("c").get<std::int64_t>();
    r.p = j.at("p").get<unsigned>();
    r.indexBound = big_from(j.at("indexBound"));
    r.verdict = j.at("verdict").get<std::string>() == "Complete" ? Verdict::Complete
                                                                 : Verdict::Partial;
    for (const auto& x : j.at("resolved")) {
        ResolvedIndex ri;
        ri.n = big_from(x.at("n"));
        ri.isPower = x.at("isPower").get<bool>();
        if (!x.at("witness").is_null()) ri.witness = big_from(x.at("witness"));
        r.resolved.push_back(ri);
    }
    for (const auto& x : j.at("unresolved")) r.unresolved.push_back(big_from(x));
    r.finalModulus = big_from(j.at("finalModulus"));
    r.primesConsumed = j.at("primesConsumed").get<std::uint64_t>();
    const auto& s = j.at("stats");
    r.rounds = s.at("rounds").get<std::uint64_t>();
    r.candidatePrimes = s.at("candidatePrimes").get<std::uint64_t>();
    r.filledPrimes = s.at("filledPrimes").get<std::uint64_t>();
    r.survivorsAboveBound = s.at("survivorsAboveBound").get<std::uint64_t>();
    r.eliminatedByExtraPrimes = s.at("eliminatedByExtraPrimes").get<std::uint64_t>();
    r.largestResidueSet = s.at("largestResidueSet").get<std::uint64_t>();
    r.meanPassRate = s.at("meanPassRate").get<double>();
    r.meanResidueDensity = s.at("meanResidueDensity").get<double>();
    r.elapsedSeconds = s.at("elapsedSeconds").get<double>();
    r.smoothModulus = s.at("smoothModulus").get<std::string>();
    r.note = s.at("note").get<std::string>();
    return r;
}

inline Json to_json(const ScanResult& r, const SequenceParams& P, std::uint64_t nMax) {
    Json hits = Json::array();
    for (const auto& h : r.nontrivial)
        hits.push_back(Json{{"n", h.n}, {"y", big_str(h.y)}, {"p", h.p}});
    return Json{{"schema", "lps.scan_report/1"},
                {"b", P.b},
                {"c", P.c},
                {"nMax", nMax},
                {"powers", hits},
                {"trivial", r.trivial}};
}

inline ScanResult scan_result_from_json(const Json& j) {
    ScanResult r;
    for (const auto& h : j.at("powers"))
        r.nontrivial.push_back(
            {h.at("n").get<std::uint64_t>(), big_from(h.at("y")), h.at("p").get<unsigned>()});
    r.trivial = j.at("trivial").get<std::vector<std::uint64_t>>();
    return r;
}

inline Json to_json(const FreyModel& m) {
    return Json{{"caseId", m.caseId},
                {"wSign", m.wSign},
                {"source", m.source == FormulaSource::Printed ? "printed" : "corrected"},
                {"a1", big_str(m.a1)},
                {"a2", big_str(m.a2)},
                {"a3", big_str(m.a3)},
                {"a4", big_str(m.a4)},
                {"a6", big_str(m.a6)},
                {"paperDelta", big_str(m.paperDelta)},
                {"conductorFormula",
                 Json{{"twoExponent", m.conductorFormula.twoExponent},
                      {"text", m.conductorFormula.to_string()}}}};
}

} // namespace lps
