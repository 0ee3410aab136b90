#pragma once

#include <gmpxx.h>

#include <climits>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "lps/errors.hpp"

namespace lps {

using BigInt = mpz_class;

inline std::string to_decimal(const BigInt& x) { return x.get_str(10); }

inline BigInt from_u64(std::uint64_t v) {
    BigInt r;
    mpz_import(r.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
    return r;
}

inline BigInt from_i64(std::int64_t v) {
    BigInt r = from_u64(v < 0 ? static_cast<std::uint64_t>(0) - static_cast<std::uint64_t>(v)
                              : static_cast<std::uint64_t>(v));
    if (v < 0) r = -r;
    return r;
}

inline bool fits_u64(const BigInt& x) {
    return sgn(x) >= 0 && mpz_sizeinbase(x.get_mpz_t(), 2) <= 64;
}

inline std::uint64_t to_u64(const BigInt& x) {
    if (!fits_u64(x)) throw InvalidArgument("value does not fit in 64 bits: " + to_decimal(x));
    std::uint64_t v = 0;
    mpz_export(&v, nullptr, 1, sizeof(v), 0, 0, x.get_mpz_t());
    return v;
}

/// Parses a decimal integer, optionally signed, or the shorthand `1e<k>`
/// (and more generally `<digits>e<k>`) for d·10^k.
inline BigInt parse_big(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw InvalidArgument("empty integer literal");
    auto epos = s.find_first_of("eE");
    if (epos != std::string::npos) {
        BigInt mant = parse_big(std::string_view(s).substr(0, epos));
        std::string exps = s.substr(epos + 1);
        if (exps.empty() || exps.find_first_not_of("0123456789") != std::string::npos)
            throw InvalidArgument("bad exponent in integer literal '" + s + "'");
        unsigned long k = std::stoul(exps);
        BigInt ten_k;
        mpz_ui_pow_ui(ten_k.get_mpz_t(), 10, k);
        return mant * ten_k;
    }
    std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (start == s.size() || s.find_first_not_of("0123456789", start) != std::string::npos)
        throw InvalidArgument("not an integer: '" + s + "'");
    BigInt r;
    r.set_str(s[0] == '+' ? s.substr(1) : s, 10);
    return r;
}

inline std::size_t bit_length(const BigInt& x) {
    return sgn(x) == 0 ? 0 : mpz_sizeinbase(x.get_mpz_t(), 2);
}

/// Natural log of |x| for x != 0, accurate to long double precision even when
/// x is far outside the double range.
inline long double log_abs(const BigInt& x) {
    long exp2 = 0;
    double mant = mpz_get_d_2exp(&exp2, x.get_mpz_t());
    return std::log(std::fabs(static_cast<long double>(mant))) +
           static_cast<long double>(exp2) * std::log(2.0L);
}

/// Smallest integer >= x for a finite, non-negative long double of any size.
inline BigInt ceil_to_big(long double x) {
    if (!(x >= 0) || !std::isfinite(x)) throw InvalidArgument("ceil_to_big: bad value");
    long double c = std::ceil(x);
    if (c < 1.8e19L) {
        return from_u64(static_cast<std::uint64_t>(c));
    }
    int e = 0;
    long double m = std::frexp(c, &e); // c = m * 2^e, m in [0.5, 1)
    auto mant = static_cast<std::uint64_t>(std::ldexp(m, 64));
    BigInt r = from_u64(mant);
    if (e >= 64) r <<= static_cast<mp_bitcnt_t>(e - 64);
    else r >>= static_cast<mp_bitcnt_t>(64 - e);
    return r;
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    base %= m;
    while (e) {
        if (e & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        e >>= 1;
    }
    return r;
}

/// Least non-negative residue of x modulo m (m >= 1).
inline std::uint64_t mod_u64(const BigInt& x, std::uint64_t m) {
    if (m <= ULONG_MAX) return mpz_fdiv_ui(x.get_mpz_t(), static_cast<unsigned long>(m));
    BigInt r = x % from_u64(m);
    if (r < 0) r += from_u64(m);
    return to_u64(r);
}

inline std::uint64_t mod_i64(std::int64_t x, std::uint64_t m) {
    auto r = static_cast<__int128>(x) % static_cast<__int128>(m);
    if (r < 0) r += m;
    return static_cast<std::uint64_t>(r);
}

} // namespace lps
