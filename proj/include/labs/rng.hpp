#pragma once

#include <array>
#include <cstdint>
#include <cstddef>
#include <string_view>

namespace labsearch {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256** seeded via splitmix64. Raw output is identical on every
// platform, which keeps seeded runs reproducible across builds.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        std::uint64_t sm = seed ^ (0xa0761d6478bd642fULL * (stream + 1));
        for (auto& w : s_) w = splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0, n), n > 0; Lemire multiply-shift, no modulo bias worth
    // caring about at these ranges
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    std::int8_t next_sign() { return (next_u64() >> 63) ? std::int8_t{1} : std::int8_t{-1}; }

    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::array<std::uint64_t, 4> s_{};
};

// FNV-1a with a splitmix finalizer; used for config fingerprints and other
// one-off byte hashing.
inline std::uint64_t hash_bytes(const void* data, std::size_t len, std::uint64_t seed = 0) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ULL ^ seed;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    std::uint64_t s = h;
    return splitmix64(s);
}

inline std::uint64_t hash_bytes(std::string_view sv, std::uint64_t seed = 0) {
    return hash_bytes(sv.data(), sv.size(), seed);
}

// Tabulation hashing over (position, sign) pairs. The canonical hash of a
// sequence is the XOR of one table entry per element, so flipping element i
// updates the hash in O(1) via flip_mask(i). Two independent tables give the
// pair of hashes the Bloom filter wants.
class TabulationHash {
public:
    static constexpr int kMaxLen = 1024;

    static const TabulationHash& instance();

    std::uint64_t entry(int pos, std::int8_t sign, int table) const {
        return t_[table][pos][sign > 0 ? 1 : 0];
    }
    std::uint64_t flip_mask(int pos, int table) const {
        return t_[table][pos][0] ^ t_[table][pos][1];
    }
    std::uint64_t length_salt(int len, int table) const { return salt_[table][len]; }

    template <typename SignRange>
    std::uint64_t hash(const SignRange& signs, int table) const {
        std::uint64_t h = salt_[table][signs.size()];
        int i = 0;
        for (auto s : signs) h ^= entry(i++, s, table);
        return h;
    }

private:
    TabulationHash();
    std::uint64_t t_[2][kMaxLen][2];
    std::uint64_t salt_[2][kMaxLen + 2];
};

} // namespace labsearch
