#pragma once

#include <cstdint>
#include <vector>

namespace lps {

/// Fixed-size bit set over [0, size).
class Bitmap {
public:
    Bitmap() = default;
    explicit Bitmap(std::uint64_t size) : size_(size), words_((size + 63) / 64, 0) {}

    std::uint64_t size() const { return size_; }
    bool test(std::uint64_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::uint64_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    std::uint64_t count() const {
        std::uint64_t n = 0;
        for (auto w : words_) n += static_cast<std::uint64_t>(__builtin_popcountll(w));
        return n;
    }
    const std::vector<std::uint64_t>& words() const { return words_; }
    std::vector<std::uint64_t>& words() { return words_; }

    friend bool operator==(const Bitmap&, const Bitmap&) = default;

private:
    std::uint64_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

/// A sieving prime q with the period K(q) of (u_n mod q) and, once filled in
/// by residue_classes(), the set of r mod K(q) for which u_r is a p-th power
/// in F_q. A skeleton has an empty residue set.
struct SievePrime {
    std::uint64_t q = 0;
    std::uint64_t period = 0;
    unsigned p = 0;
    Bitmap residues;
    std::uint64_t residueCount = 0;
    double rejectionRatio = 1.0; ///< residueCount / period

    bool is_skeleton() const { return residues.size() == 0; }
    std::vector<std::uint64_t> residue_list() const {
        std::vector<std::uint64_t> out;
        out.reserve(residueCount);
        for (std::uint64_t r = 0; r < residues.size(); ++r)
            if (residues.test(r)) out.push_back(r);
        return out;
    }
};

} // namespace lps
