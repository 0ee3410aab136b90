#include <lps/bounds.hpp>
#include <lps/sieve.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

using namespace lps;

namespace {

std::uint64_t naive_psi(std::uint64_t n) {
    std::uint64_t r = n, m = n;
    for (std::uint64_t d = 2; d * d <= m; ++d) {
        if (m % d) continue;
        r = r / d * (d + 1);
        while (m % d == 0) m /= d;
    }
    if (m > 1) r = r / m * (m + 1);
    return r;
}

std::uint64_t naive_phi(std::uint64_t n) {
    std::uint64_t r = 0;
    for (std::uint64_t k = 1; k <= n; ++k) r += std::gcd(k, n) == 1;
    return r;
}

// Genus by counting solutions of x^2 + 1 and x^2 + x + 1 mod N directly.
std::int64_t genus_oracle(std::uint64_t N) {
    std::int64_t nu2 = 0, nu3 = 0, cusps = 0;
    if (N % 4 != 0)
        for (std::uint64_t x = 0; x < N; ++x) nu2 += (x * x + 1) % N == 0;
    if (N % 9 != 0)
        for (std::uint64_t x = 0; x < N; ++x) nu3 += (x * x + x + 1) % N == 0;
    for (std::uint64_t d = 1; d <= N; ++d)
        if (N % d == 0) cusps += static_cast<std::int64_t>(naive_phi(std::gcd(d, N / d)));
    // 12 g = 12 + psi - 3 nu2 - 4 nu3 - 6 cusps
    const std::int64_t twelve_g = 12 + static_cast<std::int64_t>(naive_psi(N)) - 3 * nu2 -
                                  4 * nu3 - 6 * cusps;
    EXPECT_EQ(twelve_g % 12, 0) << N;
    return twelve_g / 12;
}

std::uint64_t sigma0(std::uint64_t n) {
    std::uint64_t c = 0;
    for (std::uint64_t d = 1; d * d <= n; ++d)
        if (n % d == 0) c += (d * d == n) ? 1 : 2;
    return c;
}

BigInt pow_big(const BigInt& base, unsigned long e) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

} // namespace

TEST(Genus, Examples) {
    EXPECT_EQ(genus_x0(1), 0u);
    EXPECT_EQ(genus_x0(2), 0u);
    EXPECT_EQ(genus_x0(11), 1u);
    EXPECT_EQ(genus_x0(22), 2u);
    EXPECT_EQ(genus_x0(37), 2u);
}

TEST(Genus, AgreesWithDirectCount) {
    for (std::uint64_t N = 1; N <= 1500; ++N)
        ASSERT_EQ(static_cast<std::int64_t>(genus_x0(N)), genus_oracle(N)) << N;
}

TEST(DimNew, Examples) {
    for (std::uint64_t N : {2, 6, 10, 22}) EXPECT_EQ(dim_s2_new(N), 0u) << N;
    EXPECT_EQ(dim_s2_new(11), 1u);
    EXPECT_EQ(dim_s2_new(1), 0u);
    EXPECT_EQ(dim_s2_new(33), 1u); // genus 3, the level-11 form appears twice
    EXPECT_EQ(dim_s2_new(37), 2u);
}

TEST(DimNew, InequalityAndDivisorSum) {
    for (std::uint64_t N = 1; N <= 10000; ++N) {
        const std::uint64_t d = dim_s2_new(N);
        ASSERT_LE(12 * d, 12 + dedekind_psi_u64(N)) << N;
        std::uint64_t total = 0;
        for (std::uint64_t m = 1; m <= N; ++m)
            if (N % m == 0) total += sigma0(N / m) * dim_s2_new(m);
        ASSERT_EQ(total, genus_x0(N)) << N;
        if (N > 2000) N += 6; // sample the upper range
    }
}

TEST(Sturm, Examples) {
    EXPECT_EQ(sturm_bound(11, 2), 2u);
    EXPECT_EQ(sturm_bound(1, 12), 1u);
    EXPECT_EQ(sturm_bound(256, 2), 64u);
}

TEST(IrrationalCoeffPrime, Examples) {
    EXPECT_EQ(irrational_coeff_prime_bound(1280), 383u);
    EXPECT_EQ(irrational_coeff_prime_bound(2), 0u);
    EXPECT_EQ(irrational_coeff_prime_bound(256), 61u);
}

TEST(AvBound, Examples) {
    EXPECT_EQ(av_bound(256), pow_big(384, 33));
    EXPECT_EQ(av_bound(1), 1);
    EXPECT_EQ(av_bound(1280), pow_big(2304, 193));
    // psi not a multiple of 12: exponent is floor(psi / 12) + 1
    EXPECT_EQ(av_bound(5), pow_big(6, 1));
    EXPECT_EQ(av_bound(13), pow_big(14, 2));
    EXPECT_THROW(av_bound(parse_big("1e12")), BoundTooLarge);
}

TEST(Lemma46, Examples) {
    EXPECT_EQ(lemma46_gcd(2, 1, {1, 1, 1, 1, 1}), 2);
    EXPECT_EQ(lemma46_gcd(3, 5, {2, 1, 1, 1, 1, 1, 1}), 30);
    EXPECT_EQ(lemma46_gcd(5, 7, {3, 0, 2}), 0);
    EXPECT_THROW(lemma46_gcd(2, 1, {}), EmptyNorms);
    EXPECT_EQ(lemma46_combine({30, 0, 42}), 6);
    EXPECT_EQ(lemma46_combine({0}), 0);
}

TEST(SmoothIndex, Examples) {
    EXPECT_EQ(smooth_index_bound({2, 3, 5}), 30u);
    EXPECT_EQ(smooth_index_bound({2, 257}), 258u);
    EXPECT_EQ(smooth_index_bound({29}), 30u);
    EXPECT_THROW(smooth_index_bound({}), EmptyList);
}

TEST(PFromN, Examples) {
    EXPECT_EQ(p_from_n_bound(new_params(1, 1), 12), 24u);
    EXPECT_EQ(p_from_n_bound(new_params(3, -2), 1), 3u);
    EXPECT_EQ(p_from_n_bound(new_params(1, 1), 1), 2u);
}

TEST(PFromN, CoversActualPowers) {
    for (auto [b, c] : std::vector<std::pair<std::int64_t, std::int64_t>>{
             {1, 1}, {2, 1}, {9, -20}, {3, 1}, {1, 2}, {4, -3}, {5, -4}, {6, -8}}) {
        auto P = new_params(b, c);
        const auto hits = scan_powers(P, 500).nontrivial;
        for (const auto& h : hits) EXPECT_LE(h.p, p_from_n_bound(P, h.n)) << b << "," << c;
    }
}

TEST(EllBound, Examples) {
    EXPECT_EQ(ell_bound(new_params(3, -2)), 713);
    EXPECT_EQ(ell_bound(new_params(1, 1)), 2466);
    for (std::int64_t b = 1; b <= 10; ++b)
        for (std::int64_t c = 1; c <= 10; ++c) EXPECT_GE(ell_bound(new_params(b, c)), 17);
}

TEST(EllBound, RoundsUp) {
    for (std::int64_t b = 1; b <= 12; ++b) {
        for (std::int64_t c = -3; c <= 12; ++c) {
            if (c == 0 || b * b + 4 * c <= 0) continue;
            auto P = new_params(b, c);
            const BigInt N = conductor_bound(P);
            const long double exact = 4.0L * std::log((b + std::sqrt((long double)(b * b + 4 * c))) / 2) *
                                      std::max<long double>(30, N.get_d() + 1);
            const BigInt e = ell_bound(P);
            EXPECT_GE(e.get_d(), static_cast<double>(exact));
            EXPECT_LE(e.get_d(), std::max<double>(17, static_cast<double>(exact) + 1));
        }
    }
}

TEST(CombinedBound, Examples) {
    auto r = combined_bound(new_params(3, -2));
    EXPECT_EQ(r.N, 256);
    EXPECT_EQ(r.psiN, 384);
    EXPECT_EQ(r.ellBound, 713);
    EXPECT_EQ(r.avBound, pow_big(384, 33));
    EXPECT_EQ(r.finalP, pow_big(384, 33));
    EXPECT_EQ(r.largestPrimeOfN, 2);
    r = combined_bound(new_params(1, 1));
    EXPECT_EQ(r.finalP, pow_big(2304, 193));
    EXPECT_EQ(r.largestPrimeOfN, 5);
}

TEST(CombinedBound, FinalIsMaximum) {
    for (std::int64_t b = 1; b <= 8; ++b) {
        for (std::int64_t c = -2; c <= 8; ++c) {
            if (c == 0 || b * b + 4 * c <= 0) continue;
            auto P = new_params(b, c);
            if (dedekind_psi(conductor_bound(P)) > 20000) continue;
            auto r = combined_bound(P);
            BigInt m = 17;
            if (r.avBound > m) m = r.avBound;
            if (r.ellBound > m) m = r.ellBound;
            EXPECT_EQ(r.finalP, m);
            EXPECT_GE(r.finalP, 17);
            EXPECT_LE(r.ellBoundSharp, r.ellBound);
        }
    }
}

TEST(CombinedBound, ConductorMonotoneInItsRadicals) {
    // N depends on (c, b^2+4c) only through rad'(c) and rad'(b^2+4c):
    // growing either under divisibility never shrinks N
    std::vector<SequenceParams> ps;
    for (std::int64_t b = 1; b <= 25; ++b)
        for (std::int64_t c = -30; c <= 30; ++c)
            if (c != 0 && b * b + 4 * c > 0) ps.push_back(new_params(b, c));
    for (const auto& x : ps) {
        for (const auto& y : ps) {
            const bool cDiv = from_i64(y.c) % odd_radical(from_i64(x.c)) == 0;
            const bool dDiv = y.disc % odd_radical(x.disc) == 0;
            if (!cDiv || !dDiv) continue;
            const BigInt Nx = conductor_bound(x), Ny = conductor_bound(y);
            ASSERT_EQ(Ny % Nx, 0) << x.b << "," << x.c << " vs " << y.b << "," << y.c;
        }
    }
}

TEST(PublishedBound, Table) {
    EXPECT_EQ(published_exponent_bound(3, 1), 17u);
    EXPECT_EQ(published_exponent_bound(3, 2), 19u);
    EXPECT_FALSE(published_exponent_bound(2, 4));
    EXPECT_FALSE(published_exponent_bound(11, 1));
}

TEST(ThueForm, Examples) {
    auto f = thue_form(new_params(3, 1), 5);
    EXPECT_EQ(f.coefficients[0], 48);
    EXPECT_EQ(f.coefficients[5], 1);
    EXPECT_EQ(f.evaluate(0, 1), 48);
    for (std::int64_t b : {1, 2, 7, -4}) EXPECT_EQ(thue_form(new_params(b, 1), 5).coefficients[5], 1);
    EXPECT_THROW(thue_form(new_params(3, 1), 4), InvalidArgument);
    EXPECT_THROW(thue_form(new_params(3, 1), 2), InvalidArgument);
}

TEST(ThueForm, AgreesWithDirectSums) {
    std::mt19937_64 rng(17);
    for (unsigned p : {3u, 5u, 7u}) {
        for (std::int64_t b : {1, 2, 3, 5, -7}) {
            auto f = thue_form(new_params(b, 1), p);
            for (int t = 0; t < 40; ++t) {
                const BigInt X = static_cast<long>(rng() % 201) - 100;
                const BigInt Y = static_cast<long>(rng() % 201) - 100;
                // both printed sums, k = 0 .. floor(p/2), evaluated term by term
                BigInt direct = 0;
                for (unsigned k = 0; k <= p / 2; ++k) {
                    const unsigned e = (p - 2 * k - 1) / 2;
                    const BigInt w = pow_big(BigInt(-4), e);
                    direct += from_i64(b) * w * binomial(p, 2 * k) * pow_big(X, 2 * k) *
                              pow_big(Y, p - 2 * k);
                    direct += w * binomial(p, 2 * k + 1) * pow_big(X, 2 * k + 1) *
                              pow_big(Y, p - 2 * k - 1);
                }
                ASSERT_EQ(f.evaluate(X, Y), direct) << "p=" << p << " b=" << b;
            }
        }
    }
}

TEST(ThueIndexBound, Examples) {
    auto P = new_params(3, 1);
    EXPECT_EQ(thue_index_bound(P, 5, 10), 15);
    const BigInt small = thue_index_bound(new_params(1, 1), 3, 1);
    EXPECT_GE(small, 1);
    EXPECT_THROW(thue_index_bound(P, 5, 0), InvalidArgument);
}

TEST(ThueIndexBound, MonotoneAndLogForm) {
    auto P = new_params(3, 1);
    BigInt prev = 0;
    for (int e = 0; e <= 60; e += 3) {
        const BigInt B = parse_big("1e" + std::to_string(e));
        const BigInt bound = thue_index_bound(P, 7, B);
        EXPECT_GE(bound, prev);
        prev = bound;
        EXPECT_EQ(thue_index_bound_from_log(P, 7, e * std::log(10.0L)), bound) << e;
    }
    // astronomically large B through its logarithm only
    const BigInt huge = thue_index_bound_from_log(P, 17, 1e6L);
    EXPECT_GT(huge, parse_big("1e7"));
    EXPECT_LT(huge, parse_big("1e800"));
}

TEST(ThueIndexBound, DominatesExactValue) {
    // direct evaluation with mpfr-free big-integer sandwiching: the bound n
    // must satisfy alpha^n >= sqrt(5^p d) B^p + sqrt(d)
    for (std::int64_t b : {1, 3, 5}) {
        auto P = new_params(b, 1);
        for (unsigned p : {3u, 5u, 7u}) {
            for (int B = 1; B <= 1000; B *= 7) {
                const BigInt n = thue_index_bound(P, p, B);
                const long double lhs = to_u64(n) * static_cast<long double>(P.alphaAbsLog);
                const long double d = static_cast<long double>(b * b + 4);
                const long double rhs =
                    std::log(std::sqrt(std::pow(5.0L, p) * d) * std::pow((long double)B, p) +
                             std::sqrt(d));
                EXPECT_GE(lhs, rhs);
                EXPECT_LT(lhs - rhs, static_cast<long double>(P.alphaAbsLog) + 1e-9L);
            }
        }
    }
}
