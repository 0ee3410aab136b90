#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "lps/bigint.hpp"
#include "lps/errors.hpp"
#include "lps/frey.hpp"
#include "lps/intarith.hpp"
#include "lps/lucas.hpp"

namespace lps {

// ---------------------------------------------------------------------------
// Directed rounding helpers
// ---------------------------------------------------------------------------

namespace detail {

/// ceil(x) after nudging x up by a few ulps, so a value computed with rounding
/// error never rounds down past the true bound.
inline BigInt ceil_up(long double x) {
    long double bumped = x;
    for (int i = 0; i < 4; ++i) bumped = std::nextafter(bumped, HUGE_VALL);
    bumped += std::fabs(x) * 1e-15L;
    return ceil_to_big(bumped);
}

inline std::uint64_t ceil_up_u64(long double x) { return to_u64(ceil_up(x)); }

} // namespace detail

// ---------------------------------------------------------------------------
// Modular curve dimensions
// ---------------------------------------------------------------------------

/// Genus of X_0(N): 1 + psi/12 - nu2/4 - nu3/3 - nuInf/2.
inline std::uint64_t genus_x0(std::uint64_t N) {
    if (N < 1) throw InvalidArgument("genus_x0 requires N >= 1");
    const auto fac = factor_u64(N);
    std::int64_t psi = 1, nu2 = 1, nu3 = 1, nuInf = 1;
    for (auto [p, e] : fac) {
        std::int64_t pe1 = 1;
        for (unsigned i = 1; i < e; ++i) pe1 *= static_cast<std::int64_t>(p);
        psi *= pe1 * static_cast<std::int64_t>(p + 1);

        // nu2: 0 if 4 | N, else prod (1 + (-1/p))
        if (p == 2) nu2 *= (e >= 2) ? 0 : 1;
        else nu2 *= (p % 4 == 1) ? 2 : 0;
        // nu3: 0 if 9 | N, else prod (1 + (-3/p))
        if (p == 3) nu3 *= (e >= 2) ? 0 : 1;
        else if (p == 2) nu3 *= 0;
        else nu3 *= (p % 3 == 1) ? 2 : 0;

        // cusps: sum_{i=0..e} phi(p^{min(i, e-i)})
        std::int64_t cusps = 0;
        for (unsigned i = 0; i <= e; ++i) {
            unsigned m = std::min(i, e - i);
            std::int64_t phi = 1;
            if (m > 0) {
                phi = static_cast<std::int64_t>(p - 1);
                for (unsigned j = 1; j < m; ++j) phi *= static_cast<std::int64_t>(p);
            }
            cusps += phi;
        }
        nuInf *= cusps;
    }
    // 12 g = 12 + psi - 3 nu2 - 4 nu3 - 6 nuInf
    const std::int64_t twelve_g = 12 + psi - 3 * nu2 - 4 * nu3 - 6 * nuInf;
    if (twelve_g < 0 || twelve_g % 12 != 0)
        throw InvalidArgument("genus formula produced a non-integer for N=" + std::to_string(N));
    return static_cast<std::uint64_t>(twelve_g / 12);
}

namespace detail {

inline std::vector<std::uint64_t> divisors_u64(std::uint64_t N) {
    std::vector<std::uint64_t> divs{1};
    for (auto [p, e] : factor_u64(N)) {
        const std::size_t base = divs.size();
        std::uint64_t pk = 1;
        for (unsigned i = 1; i <= e; ++i) {
            pk *= p;
            for (std::size_t j = 0; j < base; ++j) divs.push_back(divs[j] * pk);
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

/// Multiplicative weights with beta(p) = -2, beta(p^2) = 1, beta(p^k) = 0 for
/// k >= 3; the Dirichlet inverse of sigma_0.
inline std::int64_t newform_weight(std::uint64_t m) {
    std::int64_t r = 1;
    for (auto [p, e] : factor_u64(m)) {
        if (e == 1) r *= -2;
        else if (e == 2) r *= 1;
        else return 0;
    }
    return r;
}

} // namespace detail

/// dim S_2(Gamma_0(N))^new = sum_{M | N} beta(N/M) genus(M).
inline std::uint64_t dim_s2_new(std::uint64_t N) {
    if (N < 1) throw InvalidArgument("dim_s2_new requires N >= 1");
    std::int64_t total = 0;
    for (auto M : detail::divisors_u64(N))
        total += detail::newform_weight(N / M) * static_cast<std::int64_t>(genus_x0(M));
    if (total < 0) throw InvalidArgument("negative new dimension for N=" + std::to_string(N));
    return static_cast<std::uint64_t>(total);
}

/// floor(k psi(N) / 12).
inline std::uint64_t sturm_bound(std::uint64_t N, std::uint64_t k) {
    if (N < 1 || k < 1) throw InvalidArgument("sturm_bound requires N, k >= 1");
    return k * dedekind_psi_u64(N) / 12;
}

/// Largest prime <= psi(N)/6, or 0 when the window holds no prime.
inline std::uint64_t irrational_coeff_prime_bound(std::uint64_t N) {
    if (N < 1) throw InvalidArgument("irrational_coeff_prime_bound requires N >= 1");
    return largest_prime_at_most(dedekind_psi_u64(N) / 6);
}

// ---------------------------------------------------------------------------
// Exponent bounds
// ---------------------------------------------------------------------------

/// Results above this many bits are refused rather than materialized.
inline constexpr std::uint64_t kMaxBoundBits = std::uint64_t{1} << 28;

/// psi(N)^(floor(psi(N)/12) + 1), exact.
inline BigInt av_bound(const BigInt& N) {
    if (N < 1) throw InvalidArgument("av_bound requires N >= 1");
    const BigInt psi = dedekind_psi(N);
    const BigInt expo = psi / 12 + 1;
    const double bits = static_cast<double>(bit_length(psi)) * expo.get_d();
    if (!fits_u64(expo) || bits > static_cast<double>(kMaxBoundBits))
        throw BoundTooLarge("psi(N)^(psi(N)/12+1) for psi(N)=" + to_decimal(psi) +
                            " exceeds " + std::to_string(kMaxBoundBits) + " bits");
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), psi.get_mpz_t(), to_u64(expo));
    return r;
}

/// B(l) C(l) = l * normsB * prod normsC for one auxiliary prime l; the caller
/// takes the gcd of these contributions across l.
inline BigInt lemma46_gcd(std::uint64_t ell, const BigInt& normsB,
                          const std::vector<BigInt>& normsC) {
    if (normsC.empty()) throw EmptyNorms("lemma46_gcd: no C(l) norms supplied");
    BigInt r = from_u64(ell) * normsB;
    for (const auto& x : normsC) r *= x;
    return r;
}

/// gcd of per-prime contributions, skipping zero ones (no information).
inline BigInt lemma46_combine(const std::vector<BigInt>& contributions) {
    BigInt g = 0;
    for (const auto& x : contributions) {
        if (sgn(x) == 0) continue;
        g = gcd(g, x);
    }
    return abs(g);
}

/// max{30, max(primes) + 1}.
inline std::uint64_t smooth_index_bound(const std::vector<std::uint64_t>& primes) {
    if (primes.empty()) throw EmptyList("smooth_index_bound: empty prime list");
    const std::uint64_t pm = *std::max_element(primes.begin(), primes.end());
    return std::max<std::uint64_t>(30, pm + 1);
}

/// ceil(4 n ln|alpha|).
inline std::uint64_t p_from_n_bound(const SequenceParams& P, std::uint64_t n) {
    if (n < 1) throw InvalidArgument("p_from_n_bound requires n >= 1");
    return detail::ceil_up_u64(4.0L * static_cast<long double>(n) * P.alphaAbsLog);
}

namespace detail {

inline BigInt ell_formula(const SequenceParams& P, const BigInt& level) {
    const BigInt m = level + 1 > 30 ? BigInt(level + 1) : BigInt(30);
    const long double x = 4.0L * static_cast<long double>(P.alphaAbsLog) *
                          std::exp(log_abs(m));
    BigInt r = (fits_u64(m) && to_u64(m) < (std::uint64_t{1} << 63))
                   ? ceil_up(4.0L * static_cast<long double>(P.alphaAbsLog) *
                             static_cast<long double>(to_u64(m)))
                   : ceil_up(x);
    return r < 17 ? BigInt(17) : r;
}

inline BigInt largest_prime_factor(const BigInt& N) {
    auto f = factorize(N);
    return f.pairs.empty() ? BigInt(1) : f.pairs.back().prime;
}

} // namespace detail

/// max{17, ceil(4 ln|alpha| max{30, N + 1})}, N = conductor_bound(P).
inline BigInt ell_bound(const SequenceParams& P) {
    return detail::ell_formula(P, conductor_bound(P));
}

/// Same formula with N replaced by its largest prime factor.
inline BigInt ell_bound_sharp(const SequenceParams& P) {
    return detail::ell_formula(P, detail::largest_prime_factor(conductor_bound(P)));
}

struct BoundReport {
    BigInt N;
    BigInt psiN;
    BigInt avBound;
    BigInt ellBound;
    BigInt ellBoundSharp;
    BigInt finalP;
    BigInt largestPrimeOfN;
};

inline BoundReport combined_bound(const SequenceParams& P) {
    BoundReport r;
    r.N = conductor_bound(P);
    r.psiN = dedekind_psi(r.N);
    r.avBound = av_bound(r.N);
    r.ellBound = ell_bound(P);
    r.ellBoundSharp = ell_bound_sharp(P);
    r.largestPrimeOfN = detail::largest_prime_factor(r.N);
    r.finalP = 17;
    if (r.avBound > r.finalP) r.finalP = r.avBound;
    if (r.ellBound > r.finalP) r.finalP = r.ellBound;
    return r;
}

/// Published sharp exponent bounds for 1 <= b, c <= 10 with gcd(b, c) = 1:
/// p <= 19 in general and p <= 17 when c = 1. Not recomputed here; the
/// underlying newform data is external.
inline std::optional<unsigned> published_exponent_bound(std::int64_t b, std::int64_t c) {
    if (b < 1 || b > 10 || c < 1 || c > 10 || std::gcd(b, c) != 1) return std::nullopt;
    return c == 1 ? 17u : 19u;
}

// ---------------------------------------------------------------------------
// Thue forms
// ---------------------------------------------------------------------------

/// Degree-p binary form sum coefficients[i] X^i Y^(p-i).
struct ThueForm {
    unsigned p = 0;
    std::int64_t b = 0;
    std::vector<BigInt> coefficients; ///< index i = exponent of X

    BigInt evaluate(const BigInt& X, const BigInt& Y) const {
        BigInt acc = 0;
        for (unsigned i = 0; i <= p; ++i) {
            BigInt xi, yj;
            mpz_pow_ui(xi.get_mpz_t(), X.get_mpz_t(), i);
            mpz_pow_ui(yj.get_mpz_t(), Y.get_mpz_t(), p - i);
            acc += coefficients[i] * xi * yj;
        }
        return acc;
    }
};

inline BigInt binomial(unsigned n, unsigned k) {
    BigInt r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

/// b * sum_k (-4)^((p-2k-1)/2) C(p,2k) X^{2k} Y^{p-2k}
///   + sum_k (-4)^((p-2k-1)/2) C(p,2k+1) X^{2k+1} Y^{p-2k-1}.
inline ThueForm thue_form(const SequenceParams& P, unsigned p) {
    if (p < 3 || p % 2 == 0 || !is_prime_u64(p))
        throw InvalidArgument("thue_form requires an odd prime p");
    ThueForm f;
    f.p = p;
    f.b = P.b;
    f.coefficients.assign(p + 1, BigInt(0));
    for (unsigned k = 0; k <= p / 2; ++k) {
        BigInt w;
        mpz_ui_pow_ui(w.get_mpz_t(), 4, (p - 2 * k - 1) / 2);
        if (((p - 2 * k - 1) / 2) % 2) w = -w;
        f.coefficients[2 * k] += from_i64(P.b) * w * binomial(p, 2 * k);
        f.coefficients[2 * k + 1] += w * binomial(p, 2 * k + 1);
    }
    return f;
}

/// ceil(log(sqrt(5^p d) B^p + sqrt(d)) / ln|alpha|) with d = b^2 + 4c, given
/// ln B (so B may be far beyond anything representable).
inline BigInt thue_index_bound_from_log(const SequenceParams& P, unsigned p, long double logB) {
    if (p < 2 || !is_prime_u64(p)) throw InvalidArgument("thue_index_bound requires prime p");
    if (!(logB >= 0)) throw InvalidArgument("thue_index_bound requires B >= 1");
    const long double logd = log_abs(P.disc);
    const long double main = 0.5L * (static_cast<long double>(p) * std::log(5.0L) + logd) +
                             static_cast<long double>(p) * logB;
    // log(X + sqrt d) = log X + log1p(sqrt(d)/X), X = sqrt(5^p d) B^p
    const long double ratio = std::exp(0.5L * logd - main);
    const long double total = main + std::log1p(ratio);
    return detail::ceil_up(total / static_cast<long double>(P.alphaAbsLog));
}

inline BigInt thue_index_bound(const SequenceParams& P, unsigned p, const BigInt& B) {
    if (B < 1) throw InvalidArgument("thue_index_bound requires B >= 1");
    return thue_index_bound_from_log(P, p, log_abs(B));
}

} // namespace lps
