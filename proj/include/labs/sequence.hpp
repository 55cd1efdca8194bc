#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "labs/rng.hpp"

namespace labsearch {

using Sign = std::int8_t;          // always +1 or -1
using Energy = std::int64_t;       // E = sum_k C_k^2, exact integer

class Rng;

/// A +-1 sequence of length >= 2. Elements are stored as signed bytes; all
/// arithmetic on correlations and energies is exact integer arithmetic.
class BinarySequence {
public:
    explicit BinarySequence(std::vector<Sign> signs) : s_(std::move(signs)) {
        if (s_.size() < 2)
            throw std::invalid_argument("BinarySequence: length must be >= 2, got " +
                                        std::to_string(s_.size()));
        for (Sign v : s_)
            if (v != 1 && v != -1)
                throw std::invalid_argument("BinarySequence: elements must be +1 or -1");
    }

    static BinarySequence random(int length, Rng& rng) {
        std::vector<Sign> v(static_cast<std::size_t>(length));
        for (auto& x : v) x = rng.next_sign();
        return BinarySequence(std::move(v));
    }

    int length() const { return static_cast<int>(s_.size()); }
    Sign operator[](int i) const { return s_[static_cast<std::size_t>(i)]; }
    const std::vector<Sign>& signs() const { return s_; }
    const Sign* data() const { return s_.data(); }

    void flip(int i) { s_[static_cast<std::size_t>(i)] = static_cast<Sign>(-s_[static_cast<std::size_t>(i)]); }

    bool operator==(const BinarySequence& o) const { return s_ == o.s_; }

    std::uint64_t canonical_hash(int table = 0) const {
        return TabulationHash::instance().hash(s_, table);
    }

private:
    std::vector<Sign> s_;
};

/// Aperiodic autocorrelations C_k (k = 1..L-1) of a sequence plus their
/// energy E = sum C_k^2, kept consistent incrementally under flips.
class CorrelationState {
public:
    explicit CorrelationState(const BinarySequence& seq);

    Energy correlation(int k) const { return c_[static_cast<std::size_t>(k)]; }
    Energy energy() const { return energy_; }
    int length() const { return static_cast<int>(c_.size()); }

    // internal mutators used by the flip kernels
    void add_to_correlation(int k, Energy d) { c_[static_cast<std::size_t>(k)] += d; }
    void add_to_energy(Energy d) { energy_ += d; }

private:
    std::vector<Energy> c_;   // c_[k] = C_k for k >= 1; c_[0] = L
    Energy energy_ = 0;
};

struct FlipDelta {
    int index;       // flip position (full-sequence or half index, per producer)
    Energy delta;    // exact change in E if the flip were applied
};

/// C_1..C_{L-1} and E by direct summation, O(L^2).
CorrelationState autocorrelation(const BinarySequence& seq);

class infinite_merit_error : public std::domain_error {
public:
    infinite_merit_error() : std::domain_error("merit factor is infinite (E = 0)") {}
};

/// F = L^2 / (2E). Throws infinite_merit_error when E = 0.
double merit_factor(int length, Energy energy);
double merit_factor(const BinarySequence& seq);

/// E_l for a target merit factor: the largest integer energy with F >= target.
Energy energy_threshold_for_merit(int length, double target_merit);

/// Exact energy change of negating element i, without mutating. O(L).
Energy flip_delta(const BinarySequence& seq, const CorrelationState& state, int i);

/// Negates element i and updates the correlation state in place. O(L).
/// Returns the applied energy delta.
Energy apply_flip(BinarySequence& seq, CorrelationState& state, int i);

bool state_consistent(const BinarySequence& seq, const CorrelationState& state);

BinarySequence negated(const BinarySequence& seq);
BinarySequence reversed(const BinarySequence& seq);
BinarySequence rotated_left(const BinarySequence& seq, int offset);

} // namespace labsearch
