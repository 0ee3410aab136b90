#include <lps/lucas.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace lps;

namespace {

// Oracle: the plain recurrence, u and v side by side.
struct Naive {
    std::vector<BigInt> u, v;
};

Naive iterate(std::int64_t b, std::int64_t c, std::size_t count) {
    Naive s;
    s.u = {0, 1};
    s.v = {2, from_i64(b)};
    while (s.u.size() < count) {
        const std::size_t n = s.u.size();
        s.u.push_back(from_i64(b) * s.u[n - 1] + from_i64(c) * s.u[n - 2]);
        s.v.push_back(from_i64(b) * s.v[n - 1] + from_i64(c) * s.v[n - 2]);
    }
    return s;
}

BigInt neg_c_power_naive(std::int64_t c, unsigned n) {
    BigInt r = 1;
    for (unsigned i = 0; i < n; ++i) r *= -c;
    return r;
}

const std::vector<std::pair<std::int64_t, std::int64_t>> kParams = {
    {1, 1}, {2, 1}, {3, -2}, {5, -6}, {7, -12}, {9, -20}, {17, -72}, {3, 1}, {5, 1},
    {7, 1}, {-1, 1}, {-3, 2}, {4, -3}, {6, 7}, {1, 2}, {10, -9}, {-5, -6}, {2, 3}};

} // namespace

TEST(NewParams, Examples) {
    auto P = new_params(1, 1);
    EXPECT_EQ(P.disc, 5);
    EXPECT_EQ(P.k2, 0u);
    EXPECT_EQ(P.oddPart, 5);
    P = new_params(3, -2);
    EXPECT_EQ(P.disc, 1);
    EXPECT_EQ(P.k2, 0u);
    EXPECT_EQ(P.oddPart, 1);
    EXPECT_THROW(new_params(0, 5), DegenerateSequence);
    EXPECT_THROW(new_params(3, 0), DegenerateSequence);
    EXPECT_THROW(new_params(1, -1), DegenerateSequence);
}

TEST(NewParams, Fields) {
    for (auto [b, c] : kParams) {
        auto P = new_params(b, c);
        EXPECT_EQ(P.disc, from_i64(b) * b + 4 * from_i64(c));
        EXPECT_EQ(P.disc, P.oddPart << P.k2);
        EXPECT_TRUE(mpz_odd_p(P.oddPart.get_mpz_t()));
        const double expect = std::log((std::fabs(double(b)) + std::sqrt(P.disc.get_d())) / 2);
        EXPECT_NEAR(P.alphaAbsLog, expect, 1e-12);
        EXPECT_GE(P.alphaAbsLog, std::log((1 + std::sqrt(5.0)) / 2) - 1e-15);
    }
}

TEST(TermPair, Examples) {
    auto t = term_pair(new_params(1, 1), 12);
    EXPECT_EQ(t.u, 144);
    EXPECT_EQ(t.v, 322);
    t = term_pair(new_params(7, -12), 0);
    EXPECT_EQ(t.u, 0);
    EXPECT_EQ(t.v, 2);
    t = term_pair(new_params(3, -2), 5);
    EXPECT_EQ(t.u, 31);
    EXPECT_EQ(t.v, 33);
}

TEST(TermPairMod, Examples) {
    auto P = new_params(1, 1);
    EXPECT_EQ(term_pair_mod(P, std::uint64_t{8}, 11), std::make_pair(10ul, 3ul));
    EXPECT_EQ(term_pair_mod(P, std::uint64_t{0}, 7), std::make_pair(0ul, 2ul));
    EXPECT_EQ(term_pair_mod(new_params(3, -2), std::uint64_t{10}, 5), std::make_pair(3ul, 0ul));
}

TEST(TermPairMod, BigIndexUsesClosedForm) {
    // u_n = 2^n - 1 and v_n = 2^n + 1 for (3, -2)
    const auto P = new_params(3, -2);
    const BigInt n = parse_big("1e40") + 17;
    for (std::uint64_t q : {3ul, 5ul, 101ul, 1000003ul}) {
        BigInt e;
        mpz_powm(e.get_mpz_t(), BigInt(2).get_mpz_t(), n.get_mpz_t(), from_u64(q).get_mpz_t());
        const std::uint64_t two_n = to_u64(e);
        auto [u, v] = term_pair_mod(P, n, q);
        EXPECT_EQ(u, (two_n + q - 1) % q);
        EXPECT_EQ(v, (two_n + 1) % q);
    }
}

TEST(VerifyIdentities, Examples) {
    EXPECT_TRUE(verify_identities(new_params(1, 1), 6));
    EXPECT_TRUE(verify_identities(new_params(5, -6), 0));
    EXPECT_TRUE(verify_identities(new_params(2, 1), 3));
    auto t = term_pair(new_params(2, 1), 6);
    EXPECT_EQ(t.u, 70);
}

TEST(TermPair, AgreesWithRecurrence) {
    for (auto [b, c] : kParams) {
        auto P = new_params(b, c);
        auto s = iterate(b, c, 1001);
        for (std::uint64_t n = 0; n <= 1000; n += (n < 60 ? 1 : 37)) {
            auto t = term_pair(P, n);
            ASSERT_EQ(t.u, s.u[n]) << b << "," << c << " n=" << n;
            ASSERT_EQ(t.v, s.v[n]) << b << "," << c << " n=" << n;
        }
        auto t = term_pair(P, 1000);
        EXPECT_EQ(t.u, s.u[1000]);
        EXPECT_EQ(t.v, s.v[1000]);
    }
}

TEST(Identities, HoldUpTo200) {
    for (auto [b, c] : kParams) {
        auto P = new_params(b, c);
        auto s = iterate(b, c, 401);
        for (unsigned n = 0; n <= 200; ++n) {
            // checked directly against the iterated terms
            ASSERT_EQ(s.u[2 * n], s.u[n] * s.v[n]) << b << "," << c << " n=" << n;
            ASSERT_EQ(P.disc * s.u[n] * s.u[n], s.v[n] * s.v[n] - 4 * neg_c_power_naive(c, n));
            ASSERT_TRUE(verify_identities(P, n)) << b << "," << c << " n=" << n;
            ASSERT_EQ(neg_c_pow(P, n), neg_c_power_naive(c, n));
        }
    }
}

TEST(TermPairMod, AgreesWithExactTerms) {
    for (auto [b, c] : {std::pair<std::int64_t, std::int64_t>{1, 1}, {3, -2}, {5, 1}, {-3, 2}}) {
        auto P = new_params(b, c);
        auto s = iterate(b, c, 1001);
        for (std::uint64_t q = 2; q <= 10000; q += (q < 200 ? 1 : 97)) {
            for (std::uint64_t n = 0; n <= 1000; n += (q < 200 ? 13 : 1)) {
                auto [u, v] = term_pair_mod(P, n, q);
                ASSERT_EQ(u, mod_u64(((s.u[n] % from_u64(q)) + from_u64(q)) % from_u64(q), q))
                    << b << "," << c << " q=" << q << " n=" << n;
                BigInt vr = s.v[n] % from_u64(q);
                if (vr < 0) vr += from_u64(q);
                ASSERT_EQ(v, to_u64(vr)) << b << "," << c << " q=" << q << " n=" << n;
            }
        }
    }
}

TEST(Coprimality, UnitDiscriminant) {
    for (auto [b, c] : {std::pair<std::int64_t, std::int64_t>{3, -2}, {5, -6}, {7, -12}, {9, -20},
                        {17, -72}, {11, -30}}) {
        auto s = iterate(b, c, 201);
        const BigInt C = from_i64(c);
        for (unsigned n = 1; n <= 200; ++n) {
            BigInt g;
            mpz_gcd(g.get_mpz_t(), s.u[n].get_mpz_t(), s.v[n].get_mpz_t());
            EXPECT_EQ(g, 1) << b << "," << c << " n=" << n;
            mpz_gcd(g.get_mpz_t(), s.u[n].get_mpz_t(), C.get_mpz_t());
            EXPECT_EQ(g, 1);
            mpz_gcd(g.get_mpz_t(), s.v[n].get_mpz_t(), C.get_mpz_t());
            EXPECT_EQ(g, 1);
        }
    }
}

TEST(TermIterator, MatchesMatrixPower) {
    auto P = new_params(5, 1);
    TermIterator it(P);
    for (std::uint64_t n = 0; n < 300; ++n, it.advance()) {
        auto t = term_pair(P, n);
        ASSERT_EQ(it.u(), t.u);
        ASSERT_EQ(it.v(), t.v);
        ASSERT_EQ(it.index(), n);
    }
}
