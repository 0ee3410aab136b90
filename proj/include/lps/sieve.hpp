#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "lps/bigint.hpp"
#include "lps/errors.hpp"
#include "lps/intarith.hpp"
#include "lps/lucas.hpp"
#include "lps/sieve_cache.hpp"
#include "lps/sieve_types.hpp"

namespace lps {

/// M kept in factored form, so that divisors can be enumerated directly.
struct SmoothModulus {
    std::vector<std::pair<std::uint64_t, unsigned>> factors; ///< sorted by prime

    static SmoothModulus from_value(const BigInt& M) {
        if (M < 1) throw InvalidArgument("smooth modulus must be positive");
        SmoothModulus s;
        for (auto& pp : factorize(M).pairs) s.factors.emplace_back(to_u64(pp.prime), pp.exponent);
        return s;
    }

    BigInt value() const {
        BigInt r = 1;
        for (auto [p, e] : factors) {
            BigInt t;
            mpz_ui_pow_ui(t.get_mpz_t(), p, e);
            r *= t;
        }
        return r;
    }

    unsigned exponent_of(std::uint64_t prime) const {
        for (auto [p, e] : factors)
            if (p == prime) return e;
        return 0;
    }

    void multiply(std::uint64_t prime, unsigned by = 1) {
        for (auto& [p, e] : factors) {
            if (p == prime) {
                e += by;
                return;
            }
        }
        factors.emplace_back(prime, by);
        std::sort(factors.begin(), factors.end());
    }

    std::string to_string() const {
        std::string s;
        for (auto [p, e] : factors) {
            if (!s.empty()) s += "*";
            s += std::to_string(p);
            if (e > 1) s += "^" + std::to_string(e);
        }
        return s.empty() ? "1" : s;
    }
};

namespace detail {

inline Mat2Mod mat_pow_mod(const SequenceParams& P, std::uint64_t e, std::uint64_t q) {
    Mat2Mod result{1 % q, 0, 0, 1 % q};
    Mat2Mod base{mod_i64(P.b, q), mod_i64(P.c, q), 1 % q, 0};
    while (e) {
        if (e & 1) result = mat_mul_mod(result, base, q);
        base = mat_mul_mod(base, base, q);
        e >>= 1;
    }
    return result;
}

inline bool is_identity(const Mat2Mod& m, std::uint64_t q) {
    return m[0] == 1 % q && m[1] == 0 && m[2] == 0 && m[3] == 1 % q;
}

inline bool is_regular_prime(const SequenceParams& P, std::uint64_t q) {
    if (q == 2) return false;
    if (mod_i64(P.c, q) == 0) return false;
    return mod_u64(P.disc, q) != 0;
}

inline bool disc_is_qr(const SequenceParams& P, std::uint64_t q) {
    const std::uint64_t d = mod_u64(P.disc, q);
    return d != 0 && powmod(d, (q - 1) / 2, q) == 1;
}

/// Multiplicative order of the companion matrix given a multiple `n` of it,
/// whose prime factors are supplied.
inline std::uint64_t matrix_order(const SequenceParams& P, std::uint64_t q, std::uint64_t n,
                                  const SmallFactorization& nf) {
    for (auto [ell, e] : nf) {
        for (unsigned i = 0; i < e; ++i) {
            if (n % ell != 0) break;
            if (!is_identity(mat_pow_mod(P, n / ell, q), q)) break;
            n /= ell;
        }
    }
    return n;
}

inline std::uint64_t primitive_root(std::uint64_t q) {
    if (q == 2) return 1;
    const auto fac = factor_u64(q - 1);
    for (std::uint64_t g = 2;; ++g) {
        bool ok = true;
        for (auto [ell, e] : fac) {
            if (powmod(g, (q - 1) / ell, q) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) return g;
    }
}

} // namespace detail

/// K(q): least K >= 1 with (u_K, u_{K+1}) = (0, 1) mod q.
inline std::uint64_t period_mod(const SequenceParams& P, std::uint64_t q) {
    if (!is_prime_u64(q)) throw InvalidArgument("period_mod requires a prime q");
    if (!detail::is_regular_prime(P, q))
        throw IrregularPrime("q=" + std::to_string(q) + " divides 2c(b^2+4c)");
    if (detail::disc_is_qr(P, q)) {
        // roots lie in F_q^*, so the order divides q - 1
        return detail::matrix_order(P, q, q - 1, factor_u64(q - 1));
    }
    if (q > (std::uint64_t{1} << 32))
        throw InvalidArgument("period_mod: inert primes above 2^32 are not supported");
    // roots lie in F_{q^2}^*, so the order divides q^2 - 1
    SmallFactorization f = factor_u64(q - 1);
    for (auto [ell, e] : factor_u64(q + 1)) {
        auto it = std::find_if(f.begin(), f.end(), [ell = ell](auto& x) { return x.first == ell; });
        if (it != f.end()) it->second += e;
        else f.emplace_back(ell, e);
    }
    std::sort(f.begin(), f.end());
    return detail::matrix_order(P, q, (q - 1) * (q + 1), f);
}

namespace detail {

/// Divisors d of M with d <= limit and d divisible by `required`; when
/// `mustContain` = (prime, exponent) is given, only divisors whose exponent of
/// that prime equals `exponent` are produced.
inline void enumerate_divisors(const SmoothModulus& M, std::uint64_t limit,
                               std::uint64_t required,
                               std::optional<std::pair<std::uint64_t, unsigned>> mustContain,
                               std::vector<std::uint64_t>& out) {
    const auto& f = M.factors;
    // recursive DFS over prime exponents
    struct Frame {
        const SmoothModulus& M;
        std::uint64_t limit;
        std::uint64_t required;
        std::optional<std::pair<std::uint64_t, unsigned>> mustContain;
        std::vector<std::uint64_t>& out;
        void go(std::size_t idx, std::uint64_t d) {
            // factors are ascending: once the next prime exceeds limit / d the rest are zero
            if (idx == M.factors.size() || M.factors[idx].first > limit / d) {
                if (mustContain && mustContain->second > 0 && d % mustContain->first != 0) return;
                if (d % required == 0) out.push_back(d);
                return;
            }
            auto [p, e] = M.factors[idx];
            unsigned lo = 0, hi = e;
            if (mustContain && mustContain->first == p) lo = hi = mustContain->second;
            std::uint64_t dd = d;
            for (unsigned i = 0; i < lo; ++i) {
                if (dd > limit / p) return;
                dd *= p;
            }
            for (unsigned i = lo; i <= hi; ++i) {
                go(idx + 1, dd);
                if (i == hi || dd > limit / p) break;
                dd *= p;
            }
        }
    };
    (void)f;
    Frame{M, limit, required, mustContain, out}.go(0, 1);
}

inline SievePrime make_skeleton(const SequenceParams& P, std::uint64_t q) {
    SievePrime sp;
    sp.q = q;
    sp.period = period_mod(P, q);
    return sp;
}

/// Keeps q = d + 1 that are prime, regular and split (disc a nonzero square).
inline std::vector<SievePrime> skeletons_from_divisors(const SequenceParams& P,
                                                       const std::vector<std::uint64_t>& divs) {
    std::vector<SievePrime> out;
    for (auto d : divs) {
        const std::uint64_t q = d + 1;
        if (q < 3 || !is_prime_u64(q)) continue;
        if (!is_regular_prime(P, q) || !disc_is_qr(P, q)) continue;
        out.push_back(make_skeleton(P, q));
    }
    return out;
}

} // namespace detail

/// Primes q with q - 1 | M that are regular for the sequence and split
/// (b^2+4c a nonzero square mod q, so K(q) | q - 1); at most `cap` of them,
/// largest period first. Divisors above maxPrime - 1 are not considered.
inline std::vector<SievePrime> find_sieve_primes(const SequenceParams& P, const SmoothModulus& M,
                                                 std::size_t cap,
                                                 std::uint64_t maxPrime = UINT64_MAX - 1) {
    std::vector<std::uint64_t> divs;
    detail::enumerate_divisors(M, maxPrime - 1, 1, std::nullopt, divs);
    auto out = detail::skeletons_from_divisors(P, divs);
    std::sort(out.begin(), out.end(), [](const SievePrime& x, const SievePrime& y) {
        return x.period != y.period ? x.period > y.period : x.q < y.q;
    });
    if (out.size() > cap) out.resize(cap);
    return out;
}

inline std::vector<SievePrime> find_sieve_primes(const SequenceParams& P, const BigInt& M,
                                                 std::size_t cap) {
    if (M < 2) throw InvalidArgument("find_sieve_primes requires M >= 2");
    return find_sieve_primes(P, SmoothModulus::from_value(M), cap);
}

/// Fills in the residues r < K(q) at which u_r mod q is a p-th power in F_q
/// (zero included).
inline SievePrime residue_classes(const SequenceParams& P, unsigned p, const SievePrime& skeleton) {
    const std::uint64_t q = skeleton.q;
    if (p < 2 || !is_prime_u64(p)) throw InvalidArgument("residue_classes requires prime p");
    if ((q - 1) % p != 0)
        throw UselessPrime("p=" + std::to_string(p) + " does not divide q-1=" +
                           std::to_string(q - 1));
    if (q > (std::uint64_t{1} << 40))
        throw InvalidArgument("residue_classes: q too large for a power table");

    // p-th powers of F_q^*: the subgroup generated by g^p
    // q < 2^40 here; below 2^32 products fit in 64 bits
    const bool small = q < (std::uint64_t{1} << 32);
    auto mul = [&](std::uint64_t a, std::uint64_t b) { return small ? a * b % q : mulmod(a, b, q); };

    Bitmap powers(q);
    const std::uint64_t h = powmod(detail::primitive_root(q), p, q);
    const std::uint64_t groupSize = (q - 1) / p;
    std::uint64_t x = 1;
    for (std::uint64_t i = 0; i < groupSize; ++i) {
        powers.set(x);
        x = mul(x, h);
    }
    powers.set(0);

    SievePrime sp = skeleton;
    sp.p = p;
    sp.residues = Bitmap(sp.period);
    const std::uint64_t bq = mod_i64(P.b, q), cq = mod_i64(P.c, q);
    std::uint64_t u0 = 0, u1 = 1;
    for (std::uint64_t r = 0; r < sp.period; ++r) {
        if (powers.test(u0)) sp.residues.set(r);
        std::uint64_t u2 = mul(bq, u1) + mul(cq, u0);
        if (u2 >= q) u2 -= q;
        u0 = u1;
        u1 = u2;
    }
    sp.residueCount = sp.residues.count();
    sp.rejectionRatio = static_cast<double>(sp.residueCount) / static_cast<double>(sp.period);
    return sp;
}

/// Residues of n modulo K(S) not yet excluded, for S the primes consumed.
struct SieveState {
    BigInt modulus = 1;
    std::vector<BigInt> residues{BigInt(0)}; ///< sorted, each < modulus
    std::vector<std::shared_ptr<const SievePrime>> primesUsed;
};

inline constexpr std::uint64_t kDefaultExplosionCap = 1'000'000;

/// Intersects the state with one more prime's residue classes via CRT.
inline SieveState sieve_step(const SieveState& state, std::shared_ptr<const SievePrime> sp,
                             std::uint64_t explosionCap = kDefaultExplosionCap) {
    if (!sp || sp->is_skeleton()) throw InvalidArgument("sieve_step needs filled residue classes");
    const std::uint64_t k = sp->period;
    const std::uint64_t g = mpz_gcd_ui(nullptr, state.modulus.get_mpz_t(), k);
    const std::uint64_t lift = k / g;
    const std::uint64_t mk = mod_u64(state.modulus, k);

    std::vector<std::uint64_t> rk;
    rk.reserve(state.residues.size());
    for (const auto& r : state.residues) rk.push_back(mod_u64(r, k));

    SieveState next;
    next.modulus = state.modulus * from_u64(lift);
    next.residues.clear();
    next.primesUsed = state.primesUsed;
    next.primesUsed.push_back(sp);

    // x = r + modulus * t, t < lift; iterating t outermost keeps x sorted
    BigInt offset = 0;
    const BigInt step = state.modulus;
    std::uint64_t shift = 0; // modulus * t mod k
    for (std::uint64_t t = 0; t < lift; ++t) {
        for (std::size_t i = 0; i < rk.size(); ++i) {
            std::uint64_t xk = rk[i] + shift;
            if (xk >= k) xk -= k;
            if (!sp->residues.test(xk)) continue;
            next.residues.push_back(state.residues[i] + offset);
            if (next.residues.size() > explosionCap)
                throw ResidueExplosion("more than " + std::to_string(explosionCap) +
                                       " residues modulo " + to_decimal(next.modulus));
        }
        offset += step;
        shift += mk;
        if (shift >= k) shift -= k;
    }
    return next;
}

// ---------------------------------------------------------------------------
// Exact scanning
// ---------------------------------------------------------------------------

struct PowerHit {
    std::uint64_t n = 0;
    BigInt y;
    unsigned p = 0;
};

struct ScanResult {
    std::vector<PowerHit> nontrivial;
    std::vector<std::uint64_t> trivial; ///< indices with u_n in {0, 1, -1}
};

/// All (n, y, p) with 2 <= n <= nMax, p prime, u_n = y^p and |y| >= 2.
inline ScanResult scan_powers(const SequenceParams& P, std::uint64_t nMax) {
    ScanResult out;
    TermIterator it(P);
    for (std::uint64_t n = 0; n <= nMax; ++n, it.advance()) {
        const BigInt& u = it.u();
        if (abs(u) <= 1) {
            out.trivial.push_back(n);
            continue;
        }
        if (n < 2) continue;
        for (auto& s : all_prime_power_splits(u)) out.nontrivial.push_back({n, s.y, s.p});
    }
    return out;
}

/// Whether u is a p-th power of an integer; the root goes to *witness.
inline bool is_pth_power(const BigInt& u, unsigned p, BigInt* witness = nullptr) {
    if (sgn(u) < 0 && p == 2) return false;
    auto r = integer_root(abs(u), p);
    if (!r.exact) return false;
    if (witness) *witness = sgn(u) < 0 ? BigInt(-r.root) : r.root;
    return true;
}

// ---------------------------------------------------------------------------
// Driver
// ---------------------------------------------------------------------------

struct SieveConfig {
    std::uint64_t explosionCap = kDefaultExplosionCap;
    std::uint64_t softTarget = 4096;        ///< preferred survivor count while growing
    std::uint64_t exactCheckLimit = 20'000; ///< largest n whose u_n is evaluated exactly
    std::uint64_t maxPrime = 2'000'000;     ///< sieving primes q stay below this
    std::size_t maxPrimes = 0;              ///< 0 = unlimited primes consumed
    unsigned maxRounds = 2'000;             ///< growth steps of the smooth modulus
    std::optional<SmoothModulus> initialModulus;
    std::vector<std::uint64_t> multipliers; ///< overrides the default schedule
    unsigned threads = 0;                   ///< 0 = LPS_THREADS or hardware
    std::string cachePath;                  ///< optional LPSV1 cache file
};

struct ResolvedIndex {
    BigInt n;
    bool isPower = false;
    std::optional<BigInt> witness;
};

enum class Verdict { Complete, Partial };

inline const char* verdict_name(Verdict v) { return v == Verdict::Complete ? "Complete" : "Partial"; }

struct SieveReport {
    std::int64_t b = 0;
    std::int64_t c = 0;
    unsigned p = 0;
    BigInt indexBound;
    std::vector<ResolvedIndex> resolved;
    std::vector<BigInt> unresolved;
    BigInt finalModulus;
    std::uint64_t primesConsumed = 0;
    Verdict verdict = Verdict::Partial;

    // diagnostics
    std::uint64_t rounds = 0;
    std::uint64_t candidatePrimes = 0;
    std::uint64_t filledPrimes = 0; ///< candidates whose residue classes were computed
    std::uint64_t survivorsAboveBound = 0;
    std::uint64_t eliminatedByExtraPrimes = 0;
    std::uint64_t largestResidueSet = 0;
    double meanPassRate = 0; ///< mean fraction of non-trivial lifts kept per consumed prime
    double meanResidueDensity = 0; ///< mean residueCount / period over consumed primes
    double elapsedSeconds = 0;
    std::string smoothModulus;
    std::string note;

    /// Survivors that may still be p-th powers: resolved powers plus unresolved.
    std::vector<BigInt> survivors() const {
        std::vector<BigInt> out;
        for (const auto& r : resolved)
            if (r.isPower) out.push_back(r.n);
        out.insert(out.end(), unresolved.begin(), unresolved.end());
        std::sort(out.begin(), out.end());
        return out;
    }
};

inline unsigned worker_count(unsigned requested) {
    if (requested) return requested;
    if (const char* env = std::getenv("LPS_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace detail {

/// Fills residue classes for a batch of skeletons on up to `threads` workers.
inline std::vector<std::shared_ptr<const SievePrime>>
fill_residues_parallel(const SequenceParams& P, unsigned p, std::vector<SievePrime> skeletons,
                       unsigned threads, SieveCache* cache) {
    std::vector<std::shared_ptr<const SievePrime>> out(skeletons.size());
    std::vector<char> todo(skeletons.size(), 1);
    if (cache) {
        for (std::size_t i = 0; i < skeletons.size(); ++i) {
            if (auto hit = cache->find(P.b, P.c, skeletons[i].q, p)) {
                out[i] = std::make_shared<const SievePrime>(std::move(*hit));
                todo[i] = 0;
            }
        }
    }
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < skeletons.size(); i = next++) {
            if (!todo[i]) continue;
            out[i] = std::make_shared<const SievePrime>(residue_classes(P, p, skeletons[i]));
        }
    };
    const unsigned n = std::min<std::size_t>(threads, std::max<std::size_t>(1, skeletons.size()));
    if (n <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < n; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (cache) {
        for (std::size_t i = 0; i < skeletons.size(); ++i)
            if (todo[i]) cache->insert(P.b, P.c, *out[i]);
    }
    return out;
}

/// Default growth schedule: the primes 2, 3, 5, 7, 11, ... in turn, with an
/// extra factor 2 and 3 interleaved every few steps.
inline std::uint64_t schedule_multiplier(unsigned round) {
    static const std::vector<std::uint32_t>& primes = small_primes();
    // pattern per block of 4: next prime, next prime, next prime, (2 or 3)
    const unsigned block = round / 4, pos = round % 4;
    if (pos == 3) return block % 2 == 0 ? 2 : 3;
    return primes.at(block * 3 + pos);
}

} // namespace detail

/// Sieves n modulo growing K(S) until K(S) > B, then settles every surviving
/// index n <= B exactly when u_n is small enough.
inline SieveReport sieve_run(const SequenceParams& P, unsigned p, const BigInt& B,
                             const SieveConfig& cfg = {}) {
    if (p < 2 || !is_prime_u64(p)) throw InvalidArgument("sieve_run requires a prime p");
    if (B < 1) throw InvalidArgument("sieve_run requires B >= 1");
    const auto t0 = std::chrono::steady_clock::now();
    const unsigned threads = worker_count(cfg.threads);

    std::optional<SieveCache> cache;
    if (!cfg.cachePath.empty()) cache = SieveCache::load_or_empty(cfg.cachePath);

    SieveReport report;
    report.b = P.b;
    report.c = P.c;
    report.p = p;
    report.indexBound = B;

    SmoothModulus M;
    if (cfg.initialModulus) M = *cfg.initialModulus;
    else M.factors = {{2, 4}, {3, 2}, {5, 1}};
    if (M.exponent_of(p) == 0) M.multiply(p);

    struct Candidate {
        SievePrime skeleton;
        std::shared_ptr<const SievePrime> sp; ///< filled lazily
        bool used = false;
    };
    std::vector<Candidate> pool;
    std::set<std::uint64_t> seen;

    auto add_candidates = [&](const std::vector<std::uint64_t>& divs) {
        std::vector<std::uint64_t> fresh;
        for (auto d : divs)
            if (seen.insert(d + 1).second) fresh.push_back(d);
        for (auto& sk : detail::skeletons_from_divisors(P, fresh)) pool.push_back({sk, nullptr, false});
        report.candidatePrimes = pool.size();
    };

    // Fills residue classes for the given candidates, in parallel.
    auto fill = [&](const std::vector<Candidate*>& cands) {
        std::vector<SievePrime> skel;
        std::vector<Candidate*> todo;
        for (auto* c : cands)
            if (!c->sp) {
                skel.push_back(c->skeleton);
                todo.push_back(c);
            }
        if (todo.empty()) return;
        auto filled = detail::fill_residues_parallel(P, p, std::move(skel), threads,
                                                     cache ? &*cache : nullptr);
        report.filledPrimes += todo.size();
        for (std::size_t i = 0; i < todo.size(); ++i) {
            todo[i]->sp = std::move(filled[i]);
            // a prime that rejects nothing carries no information
            if (todo[i]->sp->residueCount == todo[i]->sp->period) todo[i]->used = true;
        }
    };

    {
        std::vector<std::uint64_t> divs;
        detail::enumerate_divisors(M, cfg.maxPrime - 1, p, std::nullopt, divs);
        add_candidates(divs);
    }

    SieveState state;
    double passRateSum = 0;
    std::uint64_t passRateSteps = 0;
    double densitySum = 0;
    const double target = static_cast<double>(std::min(cfg.softTarget, cfg.explosionCap));

    unsigned futileShrinks = 0;
    std::size_t floorSize = 2; ///< survivor count below which shrinking stopped paying

    auto ratio_of = [&](const Candidate& c) {
        if (c.sp) return c.sp->rejectionRatio;
        return 1.0 / p + 1.0 / static_cast<double>(c.skeleton.period);
    };

    // Picks the next prime: the largest modulus growth whose expected survivor
    // count stays under the soft target; otherwise the strongest prime whose
    // period already divides the modulus; otherwise the smallest expected size.
    auto consume_round = [&](const BigInt& goal) {
        for (;;) {
            if (state.modulus > goal) return;
            if (cfg.maxPrimes && report.primesConsumed >= cfg.maxPrimes) return;
            const double size = static_cast<double>(state.residues.size());
            Candidate* grow = nullptr;
            std::uint64_t growLift = 0;
            double growEst = 0;
            bool growCrosses = false;
            Candidate* smallest = nullptr;
            double smallestEst = 0;
            std::vector<Candidate*> shrinkers;
            for (auto& cand : pool) {
                if (cand.used) continue;
                const std::uint64_t k = cand.skeleton.period;
                const std::uint64_t lift = k / mpz_gcd_ui(nullptr, state.modulus.get_mpz_t(), k);
                const double est = size * static_cast<double>(lift) * ratio_of(cand);
                if (lift == 1) {
                    shrinkers.push_back(&cand);
                    continue;
                }
                // once a lift crosses the goal, only the expected survivor count matters
                const bool crosses = state.modulus * from_u64(lift) > goal;
                const bool better = !grow || (crosses && growCrosses ? est < growEst
                                              : crosses != growCrosses ? crosses
                                              : lift > growLift || (lift == growLift && est < growEst));
                if (est <= target && better) {
                    growCrosses = crosses;
                    grow = &cand;
                    growLift = lift;
                    growEst = est;
                }
                if (est <= static_cast<double>(cfg.explosionCap) && (!smallest || est < smallestEst)) {
                    smallest = &cand;
                    smallestEst = est;
                }
            }
            Candidate* pick = grow;
            // some classes never die (0, 1, -1, ...); stop shrinking once it stops paying
            if (!pick && size > floorSize && !shrinkers.empty()) {
                // fill a small batch, longest periods first; short ones rarely add information
                std::vector<Candidate*> batch;
                for (auto* s : shrinkers)
                    if (s->sp) batch.push_back(s);
                std::vector<Candidate*> unfilled;
                for (auto* s : shrinkers)
                    if (!s->sp) unfilled.push_back(s);
                const std::size_t want = std::min<std::size_t>(unfilled.size(), 2 * threads);
                std::partial_sort(unfilled.begin(), unfilled.begin() + want, unfilled.end(),
                                  [](const Candidate* x, const Candidate* y) {
                                      return x->skeleton.period > y->skeleton.period;
                                  });
                unfilled.resize(want);
                fill(unfilled);
                batch.insert(batch.end(), unfilled.begin(), unfilled.end());
                for (auto* s : batch)
                    if (!s->used && (!pick || s->sp->rejectionRatio < pick->sp->rejectionRatio)) pick = s;
            }
            if (!pick) pick = smallest;
            if (!pick) return;
            fill({pick});
            if (pick->used) continue;
            pick->used = true;
            const std::uint64_t k = pick->sp->period;
            const std::uint64_t lift = k / mpz_gcd_ui(nullptr, state.modulus.get_mpz_t(), k);
            const double examined = size * static_cast<double>(lift);
            if (examined * pick->sp->rejectionRatio > static_cast<double>(cfg.explosionCap)) continue;
            try {
                state = sieve_step(state, pick->sp, cfg.explosionCap);
            } catch (const ResidueExplosion&) {
                continue;
            }
            if (lift == 1) {
                futileShrinks = state.residues.size() * 10 < size * 9 ? 0 : futileShrinks + 1;
                if (futileShrinks >= 4) floorSize = std::max(floorSize, state.residues.size());
            }
            if (examined > 2 && state.residues.size() >= 2) {
                passRateSum += (static_cast<double>(state.residues.size()) - 2) / (examined - 2);
                ++passRateSteps;
            }
            densitySum += pick->sp->rejectionRatio;
            ++report.primesConsumed;
            report.largestResidueSet =
                std::max<std::uint64_t>(report.largestResidueSet, state.residues.size());
        }
    };

    unsigned round = 0;
    auto grow_until = [&](const BigInt goal) {
        consume_round(goal);
        while (state.modulus <= goal && round < cfg.maxRounds &&
               !(cfg.maxPrimes && report.primesConsumed >= cfg.maxPrimes)) {
            const std::uint64_t ell = cfg.multipliers.empty()
                                          ? detail::schedule_multiplier(round)
                                          : cfg.multipliers[round % cfg.multipliers.size()];
            ++round;
            M.multiply(ell);
            std::vector<std::uint64_t> divs;
            detail::enumerate_divisors(M, cfg.maxPrime - 1, p,
                                       std::make_pair(ell, M.exponent_of(ell)), divs);
            add_candidates(divs);
            consume_round(goal);
        }
    };

    bool complete_modulus = false;
    auto classify = [&] {
        report.resolved.clear();
        report.unresolved.clear();
        report.survivorsAboveBound = 0;
        report.eliminatedByExtraPrimes = 0;
        complete_modulus = state.modulus > B;
        for (const auto& r : state.residues) {
            if (complete_modulus && r > B) {
                ++report.survivorsAboveBound;
                continue;
            }
            if (r <= 1) {
                report.resolved.push_back({r, true, r});
                continue;
            }
            if (!complete_modulus) {
                report.unresolved.push_back(r);
                continue;
            }
            // r is the only index <= B in its class; test it against the unused primes
            bool eliminated = false;
            for (const auto& cand : pool) {
                if (cand.used) continue;
                const std::uint64_t q = cand.skeleton.q;
                if ((q - 1) % p != 0) continue;
                const std::uint64_t k = cand.skeleton.period;
                if (cand.sp) {
                    if (!cand.sp->residues.test(mod_u64(r, k))) {
                        eliminated = true;
                        break;
                    }
                    continue;
                }
                const std::uint64_t u = term_pair_mod(P, mod_u64(r, k), q).first;
                if (u != 0 && powmod(u, (q - 1) / p, q) != 1) {
                    eliminated = true;
                    break;
                }
            }
            if (eliminated) {
                ++report.eliminatedByExtraPrimes;
                continue;
            }
            if (r <= from_u64(cfg.exactCheckLimit)) {
                const TermPair t = term_pair(P, to_u64(r));
                BigInt y;
                const bool power = is_pth_power(t.u, p, &y);
                report.resolved.push_back({r, power, power ? std::optional<BigInt>(y) : std::nullopt});
            } else {
                report.unresolved.push_back(r);
            }
        }
    };

    // Some classes survive every prime (for instance n = K/2 + {-1, 0, 1} when
    // c = 1); they drop out only once the modulus outgrows them.
    grow_until(B);
    classify();
    for (int extra = 0; extra < 8 && complete_modulus && !report.unresolved.empty() &&
                        round < cfg.maxRounds;
         ++extra) {
        grow_until(state.modulus);
        classify();
    }
    report.rounds = round;
    report.smoothModulus = M.to_string();
    report.finalModulus = state.modulus;
    if (passRateSteps) report.meanPassRate = passRateSum / static_cast<double>(passRateSteps);
    if (report.primesConsumed)
        report.meanResidueDensity = densitySum / static_cast<double>(report.primesConsumed);

    report.verdict = (complete_modulus && report.unresolved.empty()) ? Verdict::Complete
                                                                      : Verdict::Partial;
    if (!complete_modulus)
        report.note = "prime pool exhausted before the modulus exceeded B";
    else if (!report.unresolved.empty())
        report.note = "survivors below B too large to check exactly";

    if (cache) cache->save(cfg.cachePath);
    report.elapsedSeconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

} // namespace lps
