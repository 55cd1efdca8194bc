#include "labs/bloom.hpp"

#include <cmath>
#include <stdexcept>

namespace labsearch {

BloomFilter::BloomFilter(std::size_t bit_count, int hash_count)
    : bits_(bit_count), k_(hash_count) {
    if (bit_count == 0 || hash_count < 1)
        throw std::invalid_argument("BloomFilter: need bit_count > 0 and hash_count >= 1");
    w_.assign((bits_ + 63) / 64, 0);
}

BloomFilter BloomFilter::with_capacity(std::size_t capacity, double fpr) {
    if (capacity == 0) capacity = 1;
    if (fpr <= 0 || fpr >= 1) throw std::invalid_argument("BloomFilter: fpr must be in (0,1)");
    const double ln2 = std::log(2.0);
    const double m = -static_cast<double>(capacity) * std::log(fpr) / (ln2 * ln2);
    const auto bits = static_cast<std::size_t>(std::ceil(m));
    int k = static_cast<int>(std::lround(m / static_cast<double>(capacity) * ln2));
    if (k < 1) k = 1;
    return BloomFilter(bits < 64 ? 64 : bits, k);
}

void BloomFilter::insert(std::uint64_t h1, std::uint64_t h2) {
    for (int i = 0; i < k_; ++i) {
        const std::uint64_t idx = (h1 + static_cast<std::uint64_t>(i) * h2) % bits_;
        w_[idx >> 6] |= (1ULL << (idx & 63));
    }
    ++inserted_;
}

bool BloomFilter::maybe_contains(std::uint64_t h1, std::uint64_t h2) const {
    for (int i = 0; i < k_; ++i) {
        const std::uint64_t idx = (h1 + static_cast<std::uint64_t>(i) * h2) % bits_;
        if (!(w_[idx >> 6] & (1ULL << (idx & 63)))) return false;
    }
    return true;
}

void BloomFilter::clear() {
    std::fill(w_.begin(), w_.end(), 0);
    inserted_ = 0;
}

double BloomFilter::expected_fpr(std::size_t bit_count, int hash_count, std::uint64_t n) {
    const double kn_m = static_cast<double>(hash_count) * static_cast<double>(n) /
                        static_cast<double>(bit_count);
    return std::pow(1.0 - std::exp(-kn_m), hash_count);
}

} // namespace labsearch
