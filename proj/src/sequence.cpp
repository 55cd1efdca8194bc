#include "labs/sequence.hpp"

#include <algorithm>
#include <cmath>

namespace labsearch {

CorrelationState::CorrelationState(const BinarySequence& seq) {
    const int n = seq.length();
    const Sign* x = seq.data();
    c_.assign(static_cast<std::size_t>(n), 0);
    c_[0] = n;
    for (int k = 1; k < n; ++k) {
        Energy c = 0;
        for (int i = 0; i + k < n; ++i) c += static_cast<Energy>(x[i]) * x[i + k];
        c_[static_cast<std::size_t>(k)] = c;
        energy_ += c * c;
    }
}

CorrelationState autocorrelation(const BinarySequence& seq) {
    return CorrelationState(seq);
}

double merit_factor(int length, Energy energy) {
    if (energy < 0) throw std::invalid_argument("merit_factor: negative energy");
    if (energy == 0) throw infinite_merit_error();
    return static_cast<double>(length) * static_cast<double>(length) /
           (2.0 * static_cast<double>(energy));
}

double merit_factor(const BinarySequence& seq) {
    return merit_factor(seq.length(), autocorrelation(seq).energy());
}

Energy energy_threshold_for_merit(int length, double target_merit) {
    if (target_merit <= 0) throw std::invalid_argument("target merit must be positive");
    const double l2 = static_cast<double>(length) * length;
    return static_cast<Energy>(std::floor(l2 / (2.0 * target_merit)));
}

Energy flip_delta(const BinarySequence& seq, const CorrelationState& state, int i) {
    const int n = seq.length();
    if (i < 0 || i >= n) throw std::out_of_range("flip_delta: index out of range");
    const Sign* x = seq.data();
    const Energy si = x[i];
    Energy d = 0;
    const int kmax = std::max(i, n - 1 - i);
    for (int k = 1; k <= kmax; ++k) {
        int t = 0;
        if (i - k >= 0) t += x[i - k];
        if (i + k < n) t += x[i + k];
        if (t == 0) continue;
        const Energy dc = -2 * si * t;
        d += dc * (2 * state.correlation(k) + dc);
    }
    return d;
}

Energy apply_flip(BinarySequence& seq, CorrelationState& state, int i) {
    const int n = seq.length();
    if (i < 0 || i >= n) throw std::out_of_range("apply_flip: index out of range");
    const Sign* x = seq.data();
    const Energy si = x[i];
    Energy d = 0;
    const int kmax = std::max(i, n - 1 - i);
    for (int k = 1; k <= kmax; ++k) {
        int t = 0;
        if (i - k >= 0) t += x[i - k];
        if (i + k < n) t += x[i + k];
        if (t == 0) continue;
        const Energy dc = -2 * si * t;
        d += dc * (2 * state.correlation(k) + dc);
        state.add_to_correlation(k, dc);
    }
    state.add_to_energy(d);
    seq.flip(i);
    return d;
}

bool state_consistent(const BinarySequence& seq, const CorrelationState& state) {
    CorrelationState fresh(seq);
    if (fresh.energy() != state.energy()) return false;
    for (int k = 1; k < seq.length(); ++k)
        if (fresh.correlation(k) != state.correlation(k)) return false;
    return true;
}

BinarySequence negated(const BinarySequence& seq) {
    std::vector<Sign> v = seq.signs();
    for (auto& s : v) s = static_cast<Sign>(-s);
    return BinarySequence(std::move(v));
}

BinarySequence reversed(const BinarySequence& seq) {
    std::vector<Sign> v = seq.signs();
    std::reverse(v.begin(), v.end());
    return BinarySequence(std::move(v));
}

BinarySequence rotated_left(const BinarySequence& seq, int offset) {
    const int n = seq.length();
    offset = ((offset % n) + n) % n;
    std::vector<Sign> v;
    v.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v.push_back(seq[(i + offset) % n]);
    return BinarySequence(std::move(v));
}

} // namespace labsearch
