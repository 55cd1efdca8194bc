#include "labs/oracle.hpp"

#include <bit>

namespace labsearch {

OracleResult oracle_exhaustive(int length) {
    if (length < 2) throw std::invalid_argument("oracle_exhaustive: length must be >= 2");
    if (length > 28)
        throw std::invalid_argument("oracle_exhaustive: length > 28 is not enumerable here");

    BinarySequence seq(std::vector<Sign>(static_cast<std::size_t>(length), Sign{1}));
    CorrelationState state(seq);
    Energy best = state.energy();
    std::uint64_t best_code = 0;

    const std::uint64_t total = 1ULL << (length - 1);
    for (std::uint64_t g = 1; g < total; ++g) {
        // Gray step: flip the position matching the lowest set bit (s_0 stays +1)
        const int bit = std::countr_zero(g) + 1;
        apply_flip(seq, state, bit);
        if (state.energy() < best) {
            best = state.energy();
            best_code = g ^ (g >> 1);  // Gray code of the current configuration
        }
    }

    std::vector<Sign> signs(static_cast<std::size_t>(length), Sign{1});
    for (int j = 1; j < length; ++j)
        if ((best_code >> (j - 1)) & 1) signs[static_cast<std::size_t>(j)] = -1;
    BinarySequence arg(std::move(signs));
    if (autocorrelation(arg).energy() != best)
        throw std::logic_error("oracle_exhaustive: Gray reconstruction mismatch");
    return OracleResult{best, std::move(arg)};
}

OracleResult oracle_skew_exhaustive(int length) {
    if (length < 3 || length % 2 == 0)
        throw std::invalid_argument("oracle_skew_exhaustive: length must be odd and >= 3");
    if (length > 41)
        throw std::invalid_argument("oracle_skew_exhaustive: length > 41 is not enumerable here");
    const int k = (length - 1) / 2;

    SkewHalf start(std::vector<Sign>(static_cast<std::size_t>(k + 1), Sign{1}));
    BinarySequence seq = expand_skew(start);
    CorrelationState state(seq);
    Energy best = state.energy();
    std::uint64_t best_code = 0;

    const std::uint64_t total = 1ULL << k;
    for (std::uint64_t g = 1; g < total; ++g) {
        const int hp = std::countr_zero(g) + 1;  // half position; element 0 fixed
        apply_skew_flip(seq, state, hp);
        if (state.energy() < best) {
            best = state.energy();
            best_code = g ^ (g >> 1);
        }
    }

    std::vector<Sign> half(static_cast<std::size_t>(k + 1), Sign{1});
    for (int j = 1; j <= k; ++j)
        if ((best_code >> (j - 1)) & 1) half[static_cast<std::size_t>(j)] = -1;
    BinarySequence arg = expand_skew(SkewHalf(std::move(half)));
    if (autocorrelation(arg).energy() != best)
        throw std::logic_error("oracle_skew_exhaustive: Gray reconstruction mismatch");
    return OracleResult{best, std::move(arg)};
}

} // namespace labsearch
