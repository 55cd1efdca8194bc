#pragma once

#include <cstdint>
#include <vector>

namespace labsearch {

/// Fixed-size Bloom filter keyed by a pair of 64-bit hashes, combined by
/// double hashing (h1 + i*h2). No false negatives, ever; false positives at
/// the usual (1 - e^{-kn/m})^k rate.
class BloomFilter {
public:
    BloomFilter(std::size_t bit_count, int hash_count);

    /// Sizes a filter for `capacity` insertions at false-positive rate
    /// `fpr`: m = -n ln(p) / ln(2)^2, k = round(m/n * ln 2).
    static BloomFilter with_capacity(std::size_t capacity, double fpr);

    void insert(std::uint64_t h1, std::uint64_t h2);
    bool maybe_contains(std::uint64_t h1, std::uint64_t h2) const;
    void clear();

    std::size_t bit_count() const { return bits_; }
    int hash_count() const { return k_; }
    std::uint64_t inserted() const { return inserted_; }
    const std::vector<std::uint64_t>& words() const { return w_; }

    /// Analytic false-positive probability after n insertions.
    static double expected_fpr(std::size_t bit_count, int hash_count, std::uint64_t n);

private:
    std::size_t bits_;
    int k_;
    std::uint64_t inserted_ = 0;
    std::vector<std::uint64_t> w_;
};

} // namespace labsearch
