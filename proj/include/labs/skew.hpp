#pragma once

#include "labs/sequence.hpp"

namespace labsearch {

/// Compact form of a skew-symmetric sequence of odd length L = 2k+1: the
/// first k+1 elements. The back half is determined by
/// s[c+i] = (-1)^i * s[c-i] with c = k (0-based center), i = 1..k.
class SkewHalf {
public:
    explicit SkewHalf(std::vector<Sign> half) : h_(std::move(half)) {
        if (h_.size() < 2)
            throw std::invalid_argument("SkewHalf: need k+1 >= 2 elements (L >= 3)");
        for (Sign v : h_)
            if (v != 1 && v != -1)
                throw std::invalid_argument("SkewHalf: elements must be +1 or -1");
    }

    static SkewHalf random(int full_length, Rng& rng);

    int half_length() const { return static_cast<int>(h_.size()); }      // k+1
    int full_length() const { return 2 * half_length() - 1; }            // L
    Sign operator[](int i) const { return h_[static_cast<std::size_t>(i)]; }
    const std::vector<Sign>& signs() const { return h_; }
    void flip(int i) { h_[static_cast<std::size_t>(i)] = static_cast<Sign>(-h_[static_cast<std::size_t>(i)]); }

private:
    std::vector<Sign> h_;
};

/// Expands a half to the full odd-length sequence. Every odd-lag
/// autocorrelation of the result is exactly zero.
BinarySequence expand_skew(const SkewHalf& half);

/// Extracts the defining half of a skew-symmetric sequence.
SkewHalf half_of(const BinarySequence& seq);

bool is_skew_symmetric(const BinarySequence& seq);

/// Full-sequence positions negated by a flip of half element hp (0-based,
/// hp <= k): {hp, L-1-hp}; a single position when hp == k (the center).
inline int mirror_position(int full_length, int hp) { return full_length - 1 - hp; }

/// Exact energy change of a skew flip at half index hp, computed as two
/// sequential single-flip deltas (flip, measure, restore). seq/state are
/// taken mutably but are bit-identical on return. O(L).
Energy skew_flip_delta(BinarySequence& seq, CorrelationState& state, int hp);

/// Same value as skew_flip_delta via a fused one-pass kernel that touches
/// even lags only (odd lags stay zero for skew-symmetric pivots). Only valid
/// when seq is skew-symmetric. O(L).
Energy skew_flip_delta_fast(const BinarySequence& seq, const CorrelationState& state, int hp);

/// Applies the skew flip (both mirrored positions; one at the center) and
/// updates the state. Returns the energy delta.
Energy apply_skew_flip(BinarySequence& seq, CorrelationState& state, int hp);

} // namespace labsearch
