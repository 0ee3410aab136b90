#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "lps/bigint.hpp"
#include "lps/errors.hpp"

namespace lps {

// ---------------------------------------------------------------------------
// Primes
// ---------------------------------------------------------------------------

inline constexpr std::uint32_t kPrimeWheelLimit = 1'000'000;

/// All primes below kPrimeWheelLimit, built on first use and shared read-only.
inline const std::vector<std::uint32_t>& small_primes() {
    static const std::vector<std::uint32_t> primes = [] {
        std::vector<bool> composite(kPrimeWheelLimit, false);
        std::vector<std::uint32_t> out;
        out.reserve(78'500);
        for (std::uint32_t i = 2; i < kPrimeWheelLimit; ++i) {
            if (composite[i]) continue;
            out.push_back(i);
            for (std::uint64_t j = std::uint64_t{i} * i; j < kPrimeWheelLimit; j += i)
                composite[j] = true;
        }
        return out;
    }();
    return primes;
}

/// Deterministic Miller-Rabin for 64-bit integers.
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t sp : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % sp == 0) return n == sp;
    }
    std::uint64_t d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

inline bool is_prime(const BigInt& n) {
    if (n < 2) return false;
    if (fits_u64(n)) return is_prime_u64(to_u64(n));
    return mpz_probab_prime_p(n.get_mpz_t(), 30) != 0;
}

/// Largest prime <= n, or 0 when there is none.
inline std::uint64_t largest_prime_at_most(std::uint64_t n) {
    for (std::uint64_t k = n; k >= 2; --k) {
        if (is_prime_u64(k)) return k;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// Factorization
// ---------------------------------------------------------------------------

struct PrimePower {
    BigInt prime;
    unsigned exponent = 0;
};

/// Prime factorization of |m|: primes strictly increasing, exponents >= 1.
struct Factorization {
    std::vector<PrimePower> pairs;

    BigInt product() const {
        BigInt r = 1;
        for (const auto& pp : pairs) {
            BigInt t;
            mpz_pow_ui(t.get_mpz_t(), pp.prime.get_mpz_t(), pp.exponent);
            r *= t;
        }
        return r;
    }
};

using SmallFactorization = std::vector<std::pair<std::uint64_t, unsigned>>;

namespace detail {

inline std::uint64_t pollard_brent_u64(std::uint64_t n) {
    if (n % 2 == 0) return 2;
    for (std::uint64_t c = 1;; ++c) {
        auto f = [&](std::uint64_t x) { return (mulmod(x, x, n) + c) % n; };
        std::uint64_t y = 2, x = 2, g = 1, q = 1, ys = 2;
        std::uint64_t r = 1;
        const std::uint64_t m = 128;
        do {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i) y = f(y);
            std::uint64_t k = 0;
            do {
                ys = y;
                for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
                k += m;
            } while (k < r && g == 1);
            r <<= 1;
        } while (g == 1);
        if (g == n) {
            do {
                ys = f(ys);
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

inline void factor_rec_u64(std::uint64_t n, std::vector<std::uint64_t>& out) {
    if (n == 1) return;
    if (is_prime_u64(n)) {
        out.push_back(n);
        return;
    }
    std::uint64_t d = pollard_brent_u64(n);
    factor_rec_u64(d, out);
    factor_rec_u64(n / d, out);
}

inline BigInt pollard_brent_big(const BigInt& n) {
    if (mpz_even_p(n.get_mpz_t())) return 2;
    for (unsigned long c = 1;; ++c) {
        auto f = [&](const BigInt& x) {
            BigInt t = x * x + c;
            mpz_mod(t.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
            return t;
        };
        BigInt y = 2, x = 2, g = 1, q = 1, ys = 2;
        unsigned long r = 1;
        const unsigned long m = 128;
        do {
            x = y;
            for (unsigned long i = 0; i < r; ++i) y = f(y);
            unsigned long k = 0;
            do {
                ys = y;
                for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    BigInt diff = abs(x - y);
                    q = (q * diff) % n;
                }
                g = gcd(q, n);
                k += m;
            } while (k < r && g == 1);
            r <<= 1;
        } while (g == 1);
        if (g == n) {
            do {
                ys = f(ys);
                g = gcd(abs(x - ys), n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

inline void factor_rec_big(const BigInt& n, std::vector<BigInt>& out) {
    if (n == 1) return;
    if (fits_u64(n)) {
        std::vector<std::uint64_t> small;
        factor_rec_u64(to_u64(n), small);
        for (auto s : small) out.push_back(from_u64(s));
        return;
    }
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    BigInt d = pollard_brent_big(n);
    factor_rec_big(d, out);
    factor_rec_big(n / d, out);
}

} // namespace detail

/// Factorization of a 64-bit integer n >= 1 (empty for n = 1).
inline SmallFactorization factor_u64(std::uint64_t n) {
    SmallFactorization out;
    if (n == 0) throw ZeroArgument("factor_u64: zero has no factorization");
    for (std::uint32_t p : small_primes()) {
        if (std::uint64_t{p} * p > n) break;
        if (p > 1000 && n > (std::uint64_t{1} << 40)) break;
        if (n % p) continue;
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    if (n > 1) {
        std::vector<std::uint64_t> rest;
        detail::factor_rec_u64(n, rest);
        std::sort(rest.begin(), rest.end());
        for (auto q : rest) {
            if (!out.empty() && out.back().first == q) ++out.back().second;
            else out.emplace_back(q, 1);
        }
    }
    return out;
}

/// Factorization of |m| for m != 0: trial division by the prime wheel, then
/// Pollard-Brent rho on whatever cofactor remains.
inline Factorization factorize(const BigInt& m) {
    if (sgn(m) == 0) throw ZeroArgument("factorize: zero has no factorization");
    BigInt n = abs(m);
    Factorization f;
    if (fits_u64(n)) {
        for (auto& [p, e] : factor_u64(to_u64(n))) f.pairs.push_back({from_u64(p), e});
        return f;
    }
    for (std::uint32_t p : small_primes()) {
        if (!mpz_divisible_ui_p(n.get_mpz_t(), p)) continue;
        unsigned e = 0;
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
            ++e;
        }
        f.pairs.push_back({BigInt(p), e});
        if (n == 1) break;
    }
    if (n > 1) {
        std::vector<BigInt> rest;
        detail::factor_rec_big(n, rest);
        std::sort(rest.begin(), rest.end());
        for (auto& q : rest) {
            if (!f.pairs.empty() && f.pairs.back().prime == q) ++f.pairs.back().exponent;
            else f.pairs.push_back({q, 1});
        }
    }
    return f;
}

// ---------------------------------------------------------------------------
// Arithmetic functions
// ---------------------------------------------------------------------------

inline BigInt radical(const BigInt& m) {
    if (sgn(m) == 0) throw ZeroArgument("radical(0) is undefined");
    BigInt r = 1;
    for (const auto& pp : factorize(m).pairs) r *= pp.prime;
    return r;
}

/// Product of the distinct odd primes dividing m.
inline BigInt odd_radical(const BigInt& m) {
    if (sgn(m) == 0) throw ZeroArgument("odd_radical(0) is undefined");
    BigInt r = 1;
    for (const auto& pp : factorize(m).pairs)
        if (pp.prime != 2) r *= pp.prime;
    return r;
}

inline unsigned ord2(const BigInt& m) {
    if (sgn(m) == 0) throw ZeroArgument("ord2(0) is undefined");
    return static_cast<unsigned>(mpz_scan1(m.get_mpz_t(), 0));
}

/// The squarefree m' with m = m' * s^2, carrying the sign of m.
inline BigInt squarefree_part(const BigInt& m) {
    if (sgn(m) == 0) throw ZeroArgument("squarefree_part(0) is undefined");
    BigInt r = 1;
    for (const auto& pp : factorize(m).pairs)
        if (pp.exponent % 2) r *= pp.prime;
    return sgn(m) < 0 ? BigInt(-r) : r;
}

/// Dedekind psi: n * prod_{p | n} (1 + 1/p), exact.
inline BigInt dedekind_psi(const BigInt& n) {
    if (n < 1) throw InvalidArgument("dedekind_psi requires n >= 1");
    BigInt r = n;
    for (const auto& pp : factorize(n).pairs) {
        r /= pp.prime;
        r *= pp.prime + 1;
    }
    return r;
}

inline std::uint64_t dedekind_psi_u64(std::uint64_t n) {
    std::uint64_t r = n;
    for (auto [p, e] : factor_u64(n)) r = r / p * (p + 1);
    return r;
}

// ---------------------------------------------------------------------------
// Roots and powers
// ---------------------------------------------------------------------------

struct RootResult {
    BigInt root;
    bool exact = false;
};

/// floor(x^(1/k)) for x >= 0, k >= 1, with an exactness flag.
inline RootResult integer_root(const BigInt& x, unsigned long k) {
    if (sgn(x) < 0) throw InvalidArgument("integer_root of a negative number");
    if (k == 0) throw InvalidArgument("integer_root with k = 0");
    RootResult out;
    BigInt rem;
    mpz_rootrem(out.root.get_mpz_t(), rem.get_mpz_t(), x.get_mpz_t(), k);
    out.exact = sgn(rem) == 0;
    return out;
}

struct PowerSplit {
    BigInt y;
    unsigned p = 0;
};

/// Writes x >= 2 as y^p with p the largest prime for which that is possible.
inline std::optional<PowerSplit> perfect_power_split(const BigInt& x) {
    if (x < 2) throw InvalidArgument("perfect_power_split requires x >= 2");
    if (!mpz_perfect_power_p(x.get_mpz_t())) return std::nullopt;
    const auto max_p = static_cast<std::uint64_t>(bit_length(x) - 1); // floor(log2 x)
    for (std::uint64_t p = max_p; p >= 2; --p) {
        if (!is_prime_u64(p)) continue;
        auto r = integer_root(x, p);
        if (r.exact) return PowerSplit{std::move(r.root), static_cast<unsigned>(p)};
    }
    return std::nullopt;
}

/// Every prime p with x = y^p for some integer y (x may be negative; only odd p
/// can then apply). |x| <= 1 is excluded.
inline std::vector<PowerSplit> all_prime_power_splits(const BigInt& x) {
    std::vector<PowerSplit> out;
    BigInt ax = abs(x);
    if (ax < 2) return out;
    auto top = perfect_power_split(ax);
    if (!top) return out;
    for (std::uint64_t p = 2; p <= top->p; ++p) {
        if (!is_prime_u64(p)) continue;
        if (sgn(x) < 0 && p == 2) continue;
        auto r = integer_root(ax, p);
        if (!r.exact) continue;
        out.push_back({sgn(x) < 0 ? BigInt(-r.root) : r.root, static_cast<unsigned>(p)});
    }
    return out;
}

// ---------------------------------------------------------------------------
// CRT
// ---------------------------------------------------------------------------

struct Residue {
    BigInt value;
    BigInt modulus;
};

/// The residue mod lcm(m1, m2) congruent to r1 mod m1 and r2 mod m2, or
/// nullopt when r1 and r2 disagree modulo gcd(m1, m2).
inline std::optional<Residue> crt_combine(const BigInt& r1, const BigInt& m1, const BigInt& r2,
                                          const BigInt& m2) {
    if (m1 < 1 || m2 < 1) throw InvalidArgument("crt_combine requires moduli >= 1");
    BigInt g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), m1.get_mpz_t(), m2.get_mpz_t());
    BigInt diff = r2 - r1;
    if (!mpz_divisible_p(diff.get_mpz_t(), g.get_mpz_t())) return std::nullopt;
    BigInt l = m1 / g * m2;
    // x = r1 + m1 * s * (r2 - r1) / g, since s*m1 = g (mod m2)
    BigInt x = r1 + m1 * ((s * (diff / g)) % (m2 / g));
    mpz_mod(x.get_mpz_t(), x.get_mpz_t(), l.get_mpz_t());
    return Residue{x, l};
}

} // namespace lps
