#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "lps/errors.hpp"
#include "lps/sieve_types.hpp"

namespace lps {

/// On-disk cache of residue classes keyed by (b, c, q, p).
///
/// Layout, all integers little-endian:
///   "LPSV1"                      5-byte magic and version
///   u32 entryCount
///   entryCount times:
///     i64 b, i64 c, u64 q, u32 p, u64 period, u64 byteLength,
///     byteLength bytes of residue bitmap (bit r is bit r%8 of byte r/8)
class SieveCache {
public:
    using Key = std::tuple<std::int64_t, std::int64_t, std::uint64_t, unsigned>;

    static constexpr char kMagic[5] = {'L', 'P', 'S', 'V', '1'};

    std::optional<SievePrime> find(std::int64_t b, std::int64_t c, std::uint64_t q,
                                   unsigned p) const {
        auto it = entries_.find({b, c, q, p});
        if (it == entries_.end()) return std::nullopt;
        return it->second;
    }

    void insert(std::int64_t b, std::int64_t c, const SievePrime& sp) {
        entries_[{b, c, sp.q, sp.p}] = sp;
    }

    std::size_t size() const { return entries_.size(); }

    std::vector<std::uint8_t> serialize() const {
        std::vector<std::uint8_t> out(kMagic, kMagic + 5);
        put(out, static_cast<std::uint32_t>(entries_.size()));
        for (const auto& [key, sp] : entries_) {
            auto [b, c, q, p] = key;
            put(out, static_cast<std::uint64_t>(b));
            put(out, static_cast<std::uint64_t>(c));
            put(out, q);
            put(out, static_cast<std::uint32_t>(p));
            put(out, sp.period);
            const std::uint64_t bytes = (sp.period + 7) / 8;
            put(out, bytes);
            for (std::uint64_t i = 0; i < bytes; ++i) {
                const std::uint64_t word = sp.residues.words()[i / 8];
                out.push_back(static_cast<std::uint8_t>(word >> (8 * (i % 8))));
            }
        }
        return out;
    }

    static SieveCache deserialize(const std::vector<std::uint8_t>& in) {
        std::size_t pos = 0;
        if (in.size() < 9 || std::memcmp(in.data(), kMagic, 5) != 0)
            throw CacheFormatError("missing LPSV1 header");
        pos = 5;
        SieveCache cache;
        const auto count = get<std::uint32_t>(in, pos);
        for (std::uint32_t e = 0; e < count; ++e) {
            const auto b = static_cast<std::int64_t>(get<std::uint64_t>(in, pos));
            const auto c = static_cast<std::int64_t>(get<std::uint64_t>(in, pos));
            SievePrime sp;
            sp.q = get<std::uint64_t>(in, pos);
            sp.p = get<std::uint32_t>(in, pos);
            sp.period = get<std::uint64_t>(in, pos);
            const auto bytes = get<std::uint64_t>(in, pos);
            if (bytes != (sp.period + 7) / 8 || in.size() - pos < bytes)
                throw CacheFormatError("bitmap length does not match period");
            sp.residues = Bitmap(sp.period);
            for (std::uint64_t i = 0; i < bytes; ++i) {
                sp.residues.words()[i / 8] |= std::uint64_t{in[pos + i]} << (8 * (i % 8));
            }
            pos += bytes;
            sp.residueCount = sp.residues.count();
            sp.rejectionRatio = sp.period ? static_cast<double>(sp.residueCount) /
                                                static_cast<double>(sp.period)
                                          : 1.0;
            cache.insert(b, c, sp);
        }
        if (pos != in.size()) throw CacheFormatError("trailing bytes after last entry");
        return cache;
    }

    static SieveCache load_or_empty(const std::string& path) {
        std::ifstream f(path, std::ios::binary);
        if (!f) return {};
        std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(f)),
                                       std::istreambuf_iterator<char>());
        return deserialize(data);
    }

    void save(const std::string& path) const {
        const auto data = serialize();
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        f.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
        if (!f) throw CacheFormatError("could not write cache file " + path);
    }

private:
    template <class T>
    static void put(std::vector<std::uint8_t>& out, T v) {
        for (std::size_t i = 0; i < sizeof(T); ++i)
            out.push_back(static_cast<std::uint8_t>(static_cast<std::uint64_t>(v) >> (8 * i)));
    }

    template <class T>
    static T get(const std::vector<std::uint8_t>& in, std::size_t& pos) {
        if (in.size() - pos < sizeof(T)) throw CacheFormatError("truncated cache file");
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) v |= std::uint64_t{in[pos + i]} << (8 * i);
        pos += sizeof(T);
        return static_cast<T>(v);
    }

    std::map<Key, SievePrime> entries_;
};

} // namespace lps
