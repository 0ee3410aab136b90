#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include "lps/bigint.hpp"
#include "lps/errors.hpp"
#include "lps/intarith.hpp"

namespace lps {

/// Coefficients (b, c) of u_n = b u_{n-1} + c u_{n-2} together with the
/// derived discriminant data. Only constructed through new_params().
struct SequenceParams {
    std::int64_t b = 0;
    std::int64_t c = 0;
    BigInt disc;          ///< b^2 + 4c
    double alphaAbsLog = 0; ///< ln |alpha|, alpha the dominant root
    unsigned k2 = 0;      ///< ord_2(disc)
    BigInt oddPart;       ///< disc / 2^k2
};

struct TermPair {
    std::uint64_t n = 0;
    BigInt u;
    BigInt v;
};

inline constexpr std::int64_t kMaxCoefficient = std::int64_t{1} << 62;

inline SequenceParams new_params(std::int64_t b, std::int64_t c) {
    if (b == 0 || c == 0)
        throw DegenerateSequence("b and c must be nonzero (got b=" + std::to_string(b) +
                                 ", c=" + std::to_string(c) + ")");
    if (b <= -kMaxCoefficient || b >= kMaxCoefficient || c <= -kMaxCoefficient ||
        c >= kMaxCoefficient)
        throw InvalidArgument("coefficient magnitude must be below 2^62");
    SequenceParams p;
    p.b = b;
    p.c = c;
    BigInt bb = from_i64(b);
    p.disc = bb * bb + 4 * from_i64(c);
    if (sgn(p.disc) <= 0)
        throw DegenerateSequence("b^2 + 4c must be positive (got " + to_decimal(p.disc) + ")");
    p.k2 = ord2(p.disc);
    p.oddPart = p.disc >> p.k2;

    // |alpha| = (|b| + sqrt(disc)) / 2, evaluated in long double
    long double absb = std::fabs(static_cast<long double>(b));
    long double sq = std::sqrt(static_cast<long double>(p.disc.get_d()));
    if (fits_u64(p.disc) && to_u64(p.disc) < (std::uint64_t{1} << 63))
        sq = std::sqrt(static_cast<long double>(to_u64(p.disc)));
    p.alphaAbsLog = static_cast<double>(std::log((absb + sq) / 2.0L));
    return p;
}

namespace detail {

using Mat2 = std::array<BigInt, 4>; // row-major

inline Mat2 mat_mul(const Mat2& x, const Mat2& y) {
    return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
            x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
}

using Mat2Mod = std::array<std::uint64_t, 4>;

inline Mat2Mod mat_mul_mod(const Mat2Mod& x, const Mat2Mod& y, std::uint64_t q) {
    auto mm = [q](std::uint64_t a, std::uint64_t b) { return mulmod(a, b, q); };
    auto add = [q](std::uint64_t a, std::uint64_t b) {
        std::uint64_t s = a + b;
        return (s >= q || s < a) ? s - q : s;
    };
    return {add(mm(x[0], y[0]), mm(x[1], y[2])), add(mm(x[0], y[1]), mm(x[1], y[3])),
            add(mm(x[2], y[0]), mm(x[3], y[2])), add(mm(x[2], y[1]), mm(x[3], y[3]))};
}

} // namespace detail

/// Exact (u_n, v_n) from the n-th power of the companion matrix [[b, c], [1, 0]],
/// whose entries are [[u_{n+1}, c u_n], [u_n, c u_{n-1}]].
inline TermPair term_pair(const SequenceParams& params, std::uint64_t n) {
    detail::Mat2 result{BigInt(1), BigInt(0), BigInt(0), BigInt(1)};
    detail::Mat2 base{from_i64(params.b), from_i64(params.c), BigInt(1), BigInt(0)};
    for (std::uint64_t e = n; e; e >>= 1) {
        if (e & 1) result = detail::mat_mul(result, base);
        if (e > 1) base = detail::mat_mul(base, base);
    }
    TermPair t;
    t.n = n;
    t.u = result[2];
    // v_n = u_{n+1} + c u_{n-1} = 2 u_{n+1} - b u_n
    t.v = 2 * result[0] - from_i64(params.b) * t.u;
    return t;
}

/// (u_n mod q, v_n mod q) for an index of any size.
inline std::pair<std::uint64_t, std::uint64_t> term_pair_mod(const SequenceParams& params,
                                                            const BigInt& n, std::uint64_t q) {
    if (q < 2) throw InvalidArgument("term_pair_mod requires q >= 2");
    if (sgn(n) < 0) throw InvalidArgument("term_pair_mod requires n >= 0");
    detail::Mat2Mod result{1, 0, 0, 1};
    detail::Mat2Mod base{mod_i64(params.b, q), mod_i64(params.c, q), 1, 0};
    const std::size_t bits = bit_length(n);
    for (std::size_t i = bits; i-- > 0;) {
        result = detail::mat_mul_mod(result, result, q);
        if (mpz_tstbit(n.get_mpz_t(), i)) result = detail::mat_mul_mod(result, base, q);
    }
    std::uint64_t u = result[2];
    std::uint64_t bu = mulmod(mod_i64(params.b, q), u, q);
    std::uint64_t two_next = mulmod(2, result[0], q);
    std::uint64_t v = two_next >= bu ? two_next - bu : two_next + (q - bu);
    return {u, v};
}

inline std::pair<std::uint64_t, std::uint64_t> term_pair_mod(const SequenceParams& params,
                                                            std::uint64_t n, std::uint64_t q) {
    return term_pair_mod(params, from_u64(n), q);
}

/// (-c)^n with the sign taken from the parity of n.
inline BigInt neg_c_pow(const SequenceParams& params, std::uint64_t n) {
    BigInt absc = abs(from_i64(params.c));
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), absc.get_mpz_t(), n);
    const bool negative = params.c > 0 && (n % 2 == 1);
    return negative ? BigInt(-r) : r;
}

/// Checks u_{2n} = u_n v_n and disc u_n^2 = v_n^2 - 4(-c)^n exactly.
inline bool verify_identities(const SequenceParams& params, std::uint64_t n) {
    TermPair t = term_pair(params, n);
    TermPair t2 = term_pair(params, 2 * n);
    if (t2.u != t.u * t.v) return false;
    return params.disc * t.u * t.u == t.v * t.v - 4 * neg_c_pow(params, n);
}

/// Streams (n, u_n, v_n) for n = 0, 1, 2, ... by the linear recurrence.
class TermIterator {
public:
    explicit TermIterator(const SequenceParams& params)
        : b_(from_i64(params.b)), c_(from_i64(params.c)), u_(0), uNext_(1), v_(2),
          vNext_(b_) {}

    std::uint64_t index() const { return n_; }
    const BigInt& u() const { return u_; }
    const BigInt& v() const { return v_; }

    void advance() {
        BigInt u2 = b_ * uNext_ + c_ * u_;
        BigInt v2 = b_ * vNext_ + c_ * v_;
        u_.swap(uNext_);
        uNext_.swap(u2);
        v_.swap(vNext_);
        vNext_.swap(v2);
        ++n_;
    }

private:
    BigInt b_, c_;
    BigInt u_, uNext_, v_, vNext_;
    std::uint64_t n_ = 0;
};

} // namespace lps
