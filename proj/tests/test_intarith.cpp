#include <lps/intarith.hpp>

#include <gtest/gtest.h>

#include <numeric>
#include <random>

using namespace lps;

namespace {

// Trial-division oracle, independent of the wheel and Pollard rho.
std::vector<std::pair<std::uint64_t, unsigned>> naive_factor(std::uint64_t n) {
    std::vector<std::pair<std::uint64_t, unsigned>> out;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        unsigned e = 0;
        while (n % d == 0) {
            n /= d;
            ++e;
        }
        if (e) out.emplace_back(d, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

std::uint64_t naive_radical(std::uint64_t n) {
    std::uint64_t r = 1;
    for (auto [p, e] : naive_factor(n)) r *= p;
    return r;
}

std::uint64_t naive_psi(std::uint64_t n) {
    std::uint64_t r = n;
    for (auto [p, e] : naive_factor(n)) r = r / p * (p + 1);
    return r;
}

} // namespace

TEST(Radical, Examples) {
    EXPECT_EQ(radical(72), 6);
    EXPECT_EQ(radical(1), 1);
    EXPECT_EQ(radical(-20), 10);
    EXPECT_THROW(radical(0), ZeroArgument);
}

TEST(OddRadical, Examples) {
    EXPECT_EQ(odd_radical(-72), 3);
    EXPECT_EQ(odd_radical(2), 1);
    EXPECT_EQ(odd_radical(5), 5);
    EXPECT_THROW(odd_radical(0), ZeroArgument);
}

TEST(DedekindPsi, Examples) {
    EXPECT_EQ(dedekind_psi(1), 1);
    EXPECT_EQ(dedekind_psi(256), 384);
    EXPECT_EQ(dedekind_psi(1280), 2304);
    EXPECT_EQ(dedekind_psi_u64(1280), 2304u);
}

TEST(Ord2, Examples) {
    EXPECT_EQ(ord2(8), 3u);
    EXPECT_EQ(ord2(1), 0u);
    EXPECT_EQ(ord2(-72), 3u);
    EXPECT_THROW(ord2(0), ZeroArgument);
}

TEST(SquarefreePart, Examples) {
    EXPECT_EQ(squarefree_part(12), 3);
    EXPECT_EQ(squarefree_part(1), 1);
    EXPECT_EQ(squarefree_part(-18), -2);
    EXPECT_THROW(squarefree_part(0), ZeroArgument);
}

TEST(IntegerRoot, Examples) {
    auto r = integer_root(169, 2);
    EXPECT_EQ(r.root, 13);
    EXPECT_TRUE(r.exact);
    r = integer_root(0, 5);
    EXPECT_EQ(r.root, 0);
    EXPECT_TRUE(r.exact);
    r = integer_root(145, 2);
    EXPECT_EQ(r.root, 12);
    EXPECT_FALSE(r.exact);
}

TEST(PerfectPowerSplit, Examples) {
    auto s = perfect_power_split(144);
    ASSERT_TRUE(s);
    EXPECT_EQ(s->y, 12);
    EXPECT_EQ(s->p, 2u);
    s = perfect_power_split(8);
    ASSERT_TRUE(s);
    EXPECT_EQ(s->y, 2);
    EXPECT_EQ(s->p, 3u);
    EXPECT_FALSE(perfect_power_split(6));
}

TEST(PerfectPowerSplit, PicksLargestPrimeExponent) {
    // 2^15 is a cube and a fifth power
    auto s = perfect_power_split(32768);
    ASSERT_TRUE(s);
    EXPECT_EQ(s->p, 5u);
    EXPECT_EQ(s->y, 8);
}

TEST(CrtCombine, Examples) {
    auto r = crt_combine(0, 10, 0, 12);
    ASSERT_TRUE(r);
    EXPECT_EQ(r->value, 0);
    EXPECT_EQ(r->modulus, 60);
    r = crt_combine(2, 10, 8, 12);
    ASSERT_TRUE(r);
    EXPECT_EQ(r->value, 32);
    EXPECT_EQ(r->modulus, 60);
    EXPECT_FALSE(crt_combine(1, 4, 2, 6));
}

TEST(Factorize, MatchesTrialDivision) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 300; ++i) {
        const std::uint64_t n = 2 + rng() % 5'000'000'000ULL;
        auto f = factorize(from_u64(n));
        auto expect = naive_factor(n);
        ASSERT_EQ(f.pairs.size(), expect.size()) << n;
        for (std::size_t j = 0; j < expect.size(); ++j) {
            EXPECT_EQ(f.pairs[j].prime, from_u64(expect[j].first)) << n;
            EXPECT_EQ(f.pairs[j].exponent, expect[j].second) << n;
        }
        EXPECT_EQ(f.product(), from_u64(n));
    }
}

TEST(Factorize, LargeSemiprime) {
    // two primes above the wheel
    const BigInt p("1000000007"), q("998244353");
    auto f = factorize(p * q * q);
    ASSERT_EQ(f.pairs.size(), 2u);
    EXPECT_EQ(f.pairs[0].prime, q);
    EXPECT_EQ(f.pairs[0].exponent, 2u);
    EXPECT_EQ(f.pairs[1].prime, p);
    EXPECT_EQ(f.product(), p * q * q);
}

TEST(IsPrime, AgreesWithTrialDivision) {
    for (std::uint64_t n = 0; n < 20000; ++n) {
        const bool naive = n >= 2 && naive_factor(n).size() == 1 && naive_factor(n)[0].second == 1;
        ASSERT_EQ(is_prime_u64(n), naive) << n;
    }
    EXPECT_TRUE(is_prime_u64(18446744073709551557ULL));
    EXPECT_FALSE(is_prime_u64(3215031751ULL)); // strong pseudoprime to bases 2, 3, 5, 7
}

TEST(Multiplicativity, CoprimePairs) {
    std::mt19937_64 rng(7);
    int checked = 0;
    while (checked < 400) {
        const std::uint64_t a = 1 + rng() % 1'000'000, b = 1 + rng() % 1'000'000;
        if (std::gcd(a, b) != 1) continue;
        ++checked;
        const BigInt A = from_u64(a), B = from_u64(b);
        EXPECT_EQ(radical(A * B), radical(A) * radical(B));
        EXPECT_EQ(odd_radical(A * B), odd_radical(A) * odd_radical(B));
        EXPECT_EQ(dedekind_psi(A * B), dedekind_psi(A) * dedekind_psi(B));
        EXPECT_EQ(squarefree_part(A * B), squarefree_part(A) * squarefree_part(B));
        EXPECT_EQ(radical(A), from_u64(naive_radical(a)));
        EXPECT_EQ(dedekind_psi(A), from_u64(naive_psi(a)));
    }
}

TEST(OddRadical, RelationToRadical) {
    for (std::int64_t m = -3000; m <= 3000; ++m) {
        if (m == 0) continue;
        const BigInt M = from_i64(m);
        const unsigned twos = std::min(1u, ord2(M));
        EXPECT_EQ(odd_radical(M), radical(M) >> twos) << m;
    }
}

TEST(SquarefreePart, Reconstructs) {
    for (std::int64_t m = -2000; m <= 2000; ++m) {
        if (m == 0) continue;
        const BigInt s = squarefree_part(m);
        const BigInt q = from_i64(m) / s;
        ASSERT_EQ(from_i64(m) % s, 0) << m;
        EXPECT_TRUE(integer_root(q, 2).exact) << m;
        EXPECT_EQ(radical(s), abs(s)) << m;
    }
}

TEST(IntegerRoot, Brackets) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 2000; ++i) {
        BigInt x = from_u64(rng());
        x = x * x * from_u64(rng() % 1000 + 1);
        const unsigned long k = 1 + rng() % 12;
        auto r = integer_root(x, k);
        BigInt lo, hi;
        mpz_pow_ui(lo.get_mpz_t(), r.root.get_mpz_t(), k);
        BigInt next = r.root + 1;
        mpz_pow_ui(hi.get_mpz_t(), next.get_mpz_t(), k);
        EXPECT_LE(lo, x);
        EXPECT_LT(x, hi);
        EXPECT_EQ(r.exact, lo == x);
    }
}

TEST(PerfectPowerSplit, RecoversRandomPowers) {
    std::mt19937_64 rng(5);
    const unsigned primes[] = {2, 3, 5, 7, 11, 13};
    for (int i = 0; i < 600; ++i) {
        const std::uint64_t y = 2 + rng() % 999'999;
        const unsigned p = primes[rng() % 6];
        BigInt x;
        mpz_pow_ui(x.get_mpz_t(), from_u64(y).get_mpz_t(), p);
        auto s = perfect_power_split(x);
        ASSERT_TRUE(s) << y << "^" << p;
        EXPECT_GE(s->p, p);
        BigInt back;
        mpz_pow_ui(back.get_mpz_t(), s->y.get_mpz_t(), s->p);
        EXPECT_EQ(back, x);
    }
}

TEST(PerfectPowerSplit, NonPowersBelowTenThousand) {
    for (std::uint64_t x = 2; x < 10000; ++x) {
        bool power = false;
        for (std::uint64_t y = 2; y * y <= x && !power; ++y) {
            std::uint64_t t = y * y;
            while (t < x) t *= y;
            power = t == x;
        }
        EXPECT_EQ(perfect_power_split(from_u64(x)).has_value(), power) << x;
    }
}

TEST(CrtCombine, AgreesWithExhaustiveScan) {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 3000; ++i) {
        const std::uint64_t m1 = 1 + rng() % 500, m2 = 1 + rng() % 500;
        const std::uint64_t r1 = rng() % m1, r2 = rng() % m2;
        const std::uint64_t l = std::lcm(m1, m2);
        std::optional<std::uint64_t> expect;
        for (std::uint64_t x = 0; x < l; ++x) {
            if (x % m1 == r1 && x % m2 == r2) {
                expect = x;
                break;
            }
        }
        auto got = crt_combine(from_u64(r1), from_u64(m1), from_u64(r2), from_u64(m2));
        ASSERT_EQ(got.has_value(), expect.has_value()) << r1 << " " << m1 << " " << r2 << " " << m2;
        if (got) {
            EXPECT_EQ(got->value, from_u64(*expect));
            EXPECT_EQ(got->modulus, from_u64(l));
        }
    }
}
