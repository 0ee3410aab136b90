#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lps/bigint.hpp"
#include "lps/errors.hpp"
#include "lps/intarith.hpp"
#include "lps/lucas.hpp"

namespace lps {

// A hypothetical solution u_n = y^p enters every formula below only through
// u_n = y^p, so y^{2p} and y^{4p} are evaluated as u_n^2 and u_n^4. The parity
// of y is the parity of u_n.

struct SolutionHypothesis {
    SequenceParams params;
    std::uint64_t n = 0;
    BigInt u;
    BigInt v;
    bool yParityEven = false;
};

/// Builds the hypothesis for index n from the exact terms. Indices below 7 are
/// rejected unless allowSmallIndex is set.
inline SolutionHypothesis make_hypothesis(const SequenceParams& params, std::uint64_t n,
                                          bool allowSmallIndex = false) {
    if (n < 7 && !allowSmallIndex)
        throw InvalidArgument("Frey curves are attached to solutions with n >= 7 (got n=" +
                              std::to_string(n) + ")");
    TermPair t = term_pair(params, n);
    SolutionHypothesis h;
    h.params = params;
    h.n = n;
    h.u = t.u;
    h.v = t.v;
    h.yParityEven = mpz_even_p(t.u.get_mpz_t()) != 0;
    return h;
}

/// Symbols that can appear under the radical of a conductor formula.
enum class Radicand { Two, C, Disc, D, Y };

inline const char* radicand_name(Radicand r) {
    switch (r) {
    case Radicand::Two: return "2";
    case Radicand::C: return "c";
    case Radicand::Disc: return "(b^2+4c)";
    case Radicand::D: return "D";
    case Radicand::Y: return "y";
    }
    return "?";
}

/// N = 2^twoExponent * rad(product of radicands). twoExponent may be negative
/// (case 9, k = 8) when the radical itself carries the factor 2.
struct ConductorFormula {
    int twoExponent = 0;
    std::vector<Radicand> radicands;

    std::string to_string() const {
        std::string s = "2^" + std::to_string(twoExponent) + " * rad(";
        for (std::size_t i = 0; i < radicands.size(); ++i) {
            if (i) s += "*";
            s += radicand_name(radicands[i]);
        }
        return s + ")";
    }
};

struct FreyCase {
    int id = 0;
    std::string description;
    int alphaExponent = 0; ///< 2-exponent of the conductor formula for this instance
    int wSign = 1;         ///< w_n = wSign * v_n
};

/// Which reading of the coefficient and discriminant table to use. Printed
/// reproduces the table literally; Corrected applies the errata listed by
/// frey_errata() (a4 carries u_n^2 in cases 2, 7, 8, 9; case 4's discriminant
/// carries y^{4p}).
enum class FormulaSource { Corrected, Printed };

struct FreyModel {
    BigInt a1, a2, a3, a4, a6;
    int caseId = 0;
    int wSign = 1;
    BigInt paperDelta;
    ConductorFormula conductorFormula;
    FormulaSource source = FormulaSource::Corrected;
};

struct FreyErratum {
    int caseId;
    std::string printed;
    std::string corrected;
};

inline std::vector<FreyErratum> frey_errata() {
    return {
        {2, "a4 = (b^2+4c) 2^-8 u_n", "a4 = (b^2+4c) 2^-8 u_n^2"},
        {4, "Delta = 2^6 D^2 (-c)^n y^{2p}", "Delta = 2^6 D^2 (-c)^n y^{4p}"},
        {7, "a4 = D u_n", "a4 = D u_n^2"},
        {8, "a4 = 2^{k-4} D u_n", "a4 = 2^{k-4} D u_n^2"},
        {9, "a4 = 2^{k-8} D u_n", "a4 = 2^{k-8} D u_n^2"},
    };
}

namespace detail {

inline int mod4(const BigInt& x) { return static_cast<int>(mpz_fdiv_ui(x.get_mpz_t(), 4)); }
inline bool is_odd(const BigInt& x) { return mpz_odd_p(x.get_mpz_t()) != 0; }

inline std::optional<FreyCase> try_case(int id, const SolutionHypothesis& h) {
    const auto& P = h.params;
    const int disc4 = mod4(P.disc);
    const bool cOdd = (P.c % 2) != 0;
    const bool yOdd = !h.yParityEven;
    const unsigned k = P.k2;
    const int D4 = mod4(P.oddPart);
    const BigInt s = neg_c_pow(P, h.n);
    const int s4 = mod4(s);

    // Sign choice: +1 first, then -1; `pred` receives w = sign * v.
    auto pick = [&](auto pred) -> std::optional<int> {
        for (int sign : {1, -1}) {
            BigInt w = sign > 0 ? h.v : BigInt(-h.v);
            if (pred(w)) return sign;
        }
        return std::nullopt;
    };
    auto halfMod4 = [](const BigInt& w) -> int {
        if (is_odd(w)) return -1;
        return mod4(BigInt(w / 2));
    };

    FreyCase fc;
    fc.id = id;
    std::optional<int> sign;
    switch (id) {
    case 1:
        fc.description = "b^2+4c = 1 mod 4, y, w_n, c odd, w_n = -(-c)^n mod 4";
        if (disc4 != 1 || !yOdd || !cOdd) return std::nullopt;
        sign = pick([&](const BigInt& w) {
            return is_odd(w) && mod4(w) == (4 - s4) % 4;
        });
        if (!sign) return std::nullopt;
        fc.alphaExponent = (s4 == 3) ? 1 : 2;
        break;
    case 2:
        fc.description = "b^2+4c = 1,0 mod 4, y, w_n even, c odd, w_n/2 = 1 mod 4";
        if ((disc4 != 1 && disc4 != 0) || yOdd || !cOdd) return std::nullopt;
        sign = pick([&](const BigInt& w) { return halfMod4(w) == 1; });
        if (!sign) return std::nullopt;
        fc.alphaExponent = 0;
        break;
    case 3:
        fc.description = "b^2+4c = 1 mod 4, c even, y, w_n odd, w_n = 1 mod 4";
        if (disc4 != 1 || cOdd || !yOdd) return std::nullopt;
        sign = pick([&](const BigInt& w) { return mod4(w) == 1; });
        if (!sign) return std::nullopt;
        fc.alphaExponent = 0;
        break;
    case 4:
        fc.description = "k = 2, y odd, D = -1 mod 4";
        if (k != 2 || !yOdd || D4 != 3) return std::nullopt;
        sign = 1;
        fc.alphaExponent = 5;
        break;
    case 5:
        fc.description = "k = 2, y odd, D = 1 mod 4";
        if (k != 2 || !yOdd || D4 != 1) return std::nullopt;
        sign = 1;
        fc.alphaExponent = 5;
        break;
    case 6:
        fc.description = "k = 3, y odd, w_n even";
        if (k != 3 || !yOdd || is_odd(h.v)) return std::nullopt;
        sign = 1;
        fc.alphaExponent = 6;
        break;
    case 7:
        fc.description = "k = 4, y odd, w_n even, w_n/2 = -D mod 4";
        if (k != 4 || !yOdd) return std::nullopt;
        sign = pick([&](const BigInt& w) { return halfMod4(w) == (4 - D4) % 4; });
        if (!sign) return std::nullopt;
        fc.alphaExponent = (D4 == 3) ? 1 : 2;
        break;
    case 8:
        fc.description = "k = 5,6,7, y odd, w_n even, w_n/2 = 1 mod 4";
        if (k < 5 || k > 7 || !yOdd) return std::nullopt;
        sign = pick([&](const BigInt& w) { return halfMod4(w) == 1; });
        if (!sign) return std::nullopt;
        fc.alphaExponent = (k == 5) ? 4 : 2;
        break;
    case 9:
        fc.description = "k >= 8, y odd, w_n even, w_n/2 = 1 mod 4";
        if (k < 8 || !yOdd) return std::nullopt;
        sign = pick([&](const BigInt& w) { return halfMod4(w) == 1; });
        if (!sign) return std::nullopt;
        fc.alphaExponent = (k == 8) ? -1 : 0;
        break;
    default:
        return std::nullopt;
    }
    fc.wSign = *sign;
    return fc;
}

inline BigInt pow2(unsigned e) {
    BigInt r = 1;
    r <<= e;
    return r;
}

/// Exact division; a remainder means the instance is outside the table.
inline BigInt exact_div(const BigInt& num, const BigInt& den, const char* what) {
    if (!mpz_divisible_p(num.get_mpz_t(), den.get_mpz_t()))
        throw NonIntegralCoefficient(std::string(what) + ": " + to_decimal(num) +
                                     " is not divisible by " + to_decimal(den));
    BigInt q;
    mpz_divexact(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return q;
}

} // namespace detail

/// First case of the table (in printed order) whose conditions hold for h.
inline FreyCase select_case(const SolutionHypothesis& h) {
    if (std::gcd(h.params.b < 0 ? -h.params.b : h.params.b,
                 h.params.c < 0 ? -h.params.c : h.params.c) != 1)
        throw InvalidArgument("the Frey case table assumes gcd(b, c) = 1");
    for (int id = 1; id <= 9; ++id) {
        if (auto fc = detail::try_case(id, h)) return *fc;
    }
    throw NoApplicableCase("no Frey case applies to (b,c)=(" + std::to_string(h.params.b) + "," +
                           std::to_string(h.params.c) + "), n=" + std::to_string(h.n) +
                           " (k=" + std::to_string(h.params.k2) +
                           ", y " + (h.yParityEven ? "even" : "odd") + ")");
}

/// The case's discriminant formula, with y^{2p} -> u_n^2 and y^{4p} -> u_n^4.
inline BigInt case_delta(const SolutionHypothesis& h, int caseId,
                         FormulaSource source = FormulaSource::Corrected) {
    using detail::exact_div;
    using detail::pow2;
    const auto& P = h.params;
    const BigInt s = neg_c_pow(P, h.n);
    const BigInt U2 = h.u * h.u;
    const BigInt U4 = U2 * U2;
    const BigInt& D = P.oddPart;
    const unsigned k = P.k2;
    switch (caseId) {
    case 1: return pow2(4) * s * s * P.disc * U2;
    case 2: return exact_div(P.disc * P.disc * s * U4, pow2(16), "case 2 Delta");
    case 3: return exact_div(s * s * P.disc * U2, pow2(8), "case 3 Delta");
    case 4: return pow2(6) * D * D * s * (source == FormulaSource::Printed ? U2 : U4);
    case 5: return pow2(6) * D * s * s * U2;
    case 6: return pow2(8) * D * D * s * U4;
    case 7: return pow2(4) * D * D * s * U4;
    case 8: return pow2(2 * k - 4) * D * D * s * U4;
    case 9:
        if (2 * k >= 16) return pow2(2 * k - 16) * D * D * s * U4;
        return exact_div(D * D * s * U4, pow2(16 - 2 * k), "case 9 Delta");
    default: throw InvalidArgument("Frey case id must be in 1..9");
    }
}

inline ConductorFormula case_conductor(const FreyCase& fc) {
    using R = Radicand;
    ConductorFormula f;
    f.twoExponent = fc.alphaExponent;
    switch (fc.id) {
    case 1: f.radicands = {R::Two, R::C, R::Disc, R::Y}; break;
    case 2:
    case 3: f.radicands = {R::C, R::Disc, R::Y}; break;
    case 4:
    case 5: f.radicands = {R::C, R::D, R::Y}; break;
    default: f.radicands = {R::C, R::Two, R::D, R::Y}; break;
    }
    return f;
}

/// Evaluates a conductor formula for a concrete y.
inline BigInt evaluate_conductor(const ConductorFormula& f, const SequenceParams& P,
                                 const BigInt& y) {
    BigInt prod = 1;
    for (auto r : f.radicands) {
        switch (r) {
        case Radicand::Two: prod *= 2; break;
        case Radicand::C: prod *= from_i64(P.c); break;
        case Radicand::Disc: prod *= P.disc; break;
        case Radicand::D: prod *= P.oddPart; break;
        case Radicand::Y: prod *= y; break;
        }
    }
    BigInt rad = radical(prod);
    if (f.twoExponent >= 0) return rad << static_cast<mp_bitcnt_t>(f.twoExponent);
    return detail::exact_div(rad, detail::pow2(static_cast<unsigned>(-f.twoExponent)),
                             "conductor");
}

inline FreyModel build_model(const SolutionHypothesis& h, const FreyCase& fc,
                             FormulaSource source = FormulaSource::Corrected) {
    using detail::exact_div;
    using detail::pow2;
    const auto& P = h.params;
    const bool printed = source == FormulaSource::Printed;
    const BigInt s = neg_c_pow(P, h.n);
    const BigInt w = fc.wSign > 0 ? h.v : BigInt(-h.v);
    const BigInt& D = P.oddPart;
    const BigInt U2 = h.u * h.u;
    const unsigned k = P.k2;

    FreyModel m;
    m.caseId = fc.id;
    m.wSign = fc.wSign;
    m.source = source;
    m.a1 = m.a2 = m.a3 = m.a4 = m.a6 = 0;
    auto what = [&](const char* coeff) {
        return "case " + std::to_string(fc.id) + " " + coeff;
    };
    switch (fc.id) {
    case 1:
        m.a2 = w;
        m.a4 = s;
        break;
    case 2: {
        BigInt wh = exact_div(w, 2, what("w_n/2").c_str());
        m.a1 = 1;
        m.a2 = exact_div(wh - 1, 4, what("a2").c_str());
        m.a4 = exact_div(P.disc * (printed ? h.u : U2), pow2(8), what("a4").c_str());
        break;
    }
    case 3:
        m.a1 = 1;
        m.a2 = exact_div(w - 1, 4, what("a2").c_str());
        m.a4 = exact_div(s, pow2(4), what("a4").c_str());
        break;
    case 4:
        m.a2 = w;
        m.a4 = D * U2;
        break;
    case 5:
        m.a2 = w;
        m.a4 = s;
        break;
    case 6:
        m.a2 = w;
        m.a4 = 2 * D * U2;
        break;
    case 7:
        m.a2 = exact_div(w, 2, what("w_n/2").c_str());
        m.a4 = D * (printed ? h.u : U2);
        break;
    case 8:
        m.a2 = exact_div(w, 2, what("w_n/2").c_str());
        m.a4 = pow2(k - 4) * D * (printed ? h.u : U2);
        break;
    case 9: {
        BigInt wh = exact_div(w, 2, what("w_n/2").c_str());
        m.a1 = 1;
        m.a2 = exact_div(wh - 1, 4, what("a2").c_str());
        m.a4 = pow2(k - 8) * D * (printed ? h.u : U2);
        break;
    }
    default: throw InvalidArgument("Frey case id must be in 1..9");
    }
    m.paperDelta = case_delta(h, fc.id, source);
    m.conductorFormula = case_conductor(fc);
    return m;
}

/// Discriminant of Y^2 + a1 XY + a3 Y = X^3 + a2 X^2 + a4 X + a6.
inline BigInt weierstrass_discriminant(const BigInt& a1, const BigInt& a2, const BigInt& a3,
                                       const BigInt& a4, const BigInt& a6) {
    BigInt b2 = a1 * a1 + 4 * a2;
    BigInt b4 = 2 * a4 + a1 * a3;
    BigInt b6 = a3 * a3 + 4 * a6;
    BigInt b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    return -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
}

inline BigInt model_discriminant(const FreyModel& m) {
    return weierstrass_discriminant(m.a1, m.a2, m.a3, m.a4, m.a6);
}

/// True iff the discriminant of the case's model equals the case's discriminant
/// formula for this hypothesis.
inline bool check_delta_identity(const SolutionHypothesis& h, const FreyCase& fc,
                                 FormulaSource source = FormulaSource::Corrected) {
    FreyModel m = build_model(h, fc, source);
    return model_discriminant(m) == m.paperDelta;
}

/// N = 2^8 rad'(c) rad'(b^2+4c).
inline BigInt conductor_bound(const SequenceParams& P) {
    return BigInt(256) * odd_radical(from_i64(P.c)) * odd_radical(P.disc);
}

/// Sharper level for gcd(b, c) = A > 1:
/// 2^gamma rad'(A')^2 rad'(c (b^2+4c) / A^2), A' the squarefree part of A.
/// gamma defaults to its upper bound 8.
inline BigInt conductor_bound_noncoprime(const SequenceParams& P, unsigned gamma = 8) {
    if (gamma > 8) throw InvalidArgument("gamma is at most 8");
    const std::int64_t A = std::gcd(P.b < 0 ? -P.b : P.b, P.c < 0 ? -P.c : P.c);
    const BigInt bigA = from_i64(A);
    BigInt radA = odd_radical(squarefree_part(bigA));
    BigInt rest = detail::exact_div(from_i64(P.c) * P.disc, bigA * bigA, "c(b^2+4c)/A^2");
    return detail::pow2(gamma) * radA * radA * odd_radical(rest);
}

/// Pairs (b, c) with b odd in [3, boundOnB], c = (1 - b^2)/4 and
/// rad(c) in {2, 6, 10, 22}, ordered by b.
inline std::vector<std::pair<std::int64_t, std::int64_t>>
search_unit_discriminant_sequences(std::int64_t boundOnB) {
    if (boundOnB < 3) throw InvalidArgument("boundOnB must be at least 3");
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    for (std::int64_t b = 3; b <= boundOnB; b += 2) {
        const std::int64_t c = (1 - b * b) / 4;
        const BigInt r = radical(from_i64(c));
        if (r == 2 || r == 6 || r == 10 || r == 22) out.emplace_back(b, c);
    }
    return out;
}

} // namespace lps
