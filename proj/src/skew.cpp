#include "labs/skew.hpp"

namespace labsearch {

SkewHalf SkewHalf::random(int full_length, Rng& rng) {
    if (full_length < 3 || full_length % 2 == 0)
        throw std::invalid_argument("SkewHalf::random: full length must be odd and >= 3");
    const int kp1 = (full_length + 1) / 2;
    std::vector<Sign> v(static_cast<std::size_t>(kp1));
    for (auto& x : v) x = rng.next_sign();
    return SkewHalf(std::move(v));
}

BinarySequence expand_skew(const SkewHalf& half) {
    const int kp1 = half.half_length();
    const int k = kp1 - 1;
    const int n = 2 * k + 1;
    std::vector<Sign> s(static_cast<std::size_t>(n));
    for (int i = 0; i < kp1; ++i) s[static_cast<std::size_t>(i)] = half[i];
    // 0-based translation of the 1-based rule s_{(k+1)+i} = (-1)^i s_{(k+1)-i}
    for (int i = 1; i <= k; ++i) {
        const Sign v = s[static_cast<std::size_t>(k - i)];
        s[static_cast<std::size_t>(k + i)] = (i % 2 == 0) ? v : static_cast<Sign>(-v);
    }
    return BinarySequence(std::move(s));
}

SkewHalf half_of(const BinarySequence& seq) {
    const int n = seq.length();
    if (n % 2 == 0) throw std::invalid_argument("half_of: length must be odd");
    const int kp1 = (n + 1) / 2;
    std::vector<Sign> v(seq.signs().begin(), seq.signs().begin() + kp1);
    return SkewHalf(std::move(v));
}

bool is_skew_symmetric(const BinarySequence& seq) {
    const int n = seq.length();
    if (n % 2 == 0) return false;
    const int k = (n - 1) / 2;
    for (int i = 1; i <= k; ++i) {
        const Sign expect = (i % 2 == 0) ? seq[k - i] : static_cast<Sign>(-seq[k - i]);
        if (seq[k + i] != expect) return false;
    }
    return true;
}

Energy skew_flip_delta(BinarySequence& seq, CorrelationState& state, int hp) {
    const int n = seq.length();
    const int k = (n - 1) / 2;
    if (hp < 0 || hp > k) throw std::out_of_range("skew_flip_delta: half index out of range");
    const int a = hp;
    const int b = mirror_position(n, hp);
    if (a == b) return flip_delta(seq, state, a);
    const Energy d1 = apply_flip(seq, state, a);
    const Energy d2 = flip_delta(seq, state, b);
    apply_flip(seq, state, a);  // restore
    return d1 + d2;
}

Energy skew_flip_delta_fast(const BinarySequence& seq, const CorrelationState& state, int hp) {
    const int n = seq.length();
    const int k = (n - 1) / 2;
    if (hp < 0 || hp > k) throw std::out_of_range("skew_flip_delta_fast: half index out of range");
    const Sign* x = seq.data();
    const int a = hp;
    const int b = mirror_position(n, hp);
    Energy d = 0;
    if (a == b) {
        // center flip keeps skew-symmetry on its own; odd lags stay zero
        for (int kk = 2; kk < n; kk += 2) {
            int t = 0;
            if (a - kk >= 0) t += x[a - kk];
            if (a + kk < n) t += x[a + kk];
            if (t == 0) continue;
            const Energy dc = -2 * static_cast<Energy>(x[a]) * t;
            d += dc * (2 * state.correlation(kk) + dc);
        }
        return d;
    }
    // double flip at {a, b}: a term s_j * s_{j+k} changes sign iff exactly
    // one endpoint is flipped; the pair (a, b) itself (lag b-a) is invariant
    for (int kk = 2; kk < n; kk += 2) {
        Energy dc = 0;
        if (a - kk >= 0) dc += static_cast<Energy>(x[a]) * x[a - kk];
        if (a + kk < n && a + kk != b) dc += static_cast<Energy>(x[a]) * x[a + kk];
        if (b - kk >= 0 && b - kk != a) dc += static_cast<Energy>(x[b]) * x[b - kk];
        if (b + kk < n) dc += static_cast<Energy>(x[b]) * x[b + kk];
        if (dc == 0) continue;
        dc *= -2;
        d += dc * (2 * state.correlation(kk) + dc);
    }
    return d;
}

Energy apply_skew_flip(BinarySequence& seq, CorrelationState& state, int hp) {
    const int n = seq.length();
    const int k = (n - 1) / 2;
    if (hp < 0 || hp > k) throw std::out_of_range("apply_skew_flip: half index out of range");
    const int a = hp;
    const int b = mirror_position(n, hp);
    if (a == b) return apply_flip(seq, state, a);
    const Energy d1 = apply_flip(seq, state, a);
    const Energy d2 = apply_flip(seq, state, b);
    return d1 + d2;
}

} // namespace labsearch
