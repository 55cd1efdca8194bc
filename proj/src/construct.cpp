#include "labs/construct.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace labsearch {

void ConstructConfig::validate() const {
    if (length < 5) throw std::invalid_argument("construct: target length must be >= 5");
    if (!(r_lo <= r_hi) || !(t_lo <= t_hi))
        throw std::invalid_argument("construct: invalid parameter ranges");
    if (t_lo < 0 || t_hi > 0.5 || r_lo < 0 || r_hi > 1.0)
        throw std::invalid_argument("construct: parameter ranges out of bounds");
    if (grid_steps < 0) throw std::invalid_argument("construct: grid steps must be >= 0");
    if (zero_element != 1 && zero_element != -1)
        throw std::invalid_argument("construct: zero element must be +1 or -1");
}

bool is_prime(long long q) {
    if (q < 2) return false;
    if (q % 2 == 0) return q == 2;
    for (long long d = 3; d * d <= q; d += 2)
        if (q % d == 0) return false;
    return true;
}

namespace {
int round_half_up(double x) { return static_cast<int>(std::floor(x + 0.5)); }
} // namespace

BinarySequence legendre(int q, Sign zero_element) {
    if (q < 3 || !is_prime(q)) throw std::invalid_argument("legendre: q must be an odd prime");
    std::vector<Sign> s(static_cast<std::size_t>(q), Sign{-1});
    s[0] = zero_element;
    for (long long i = 1; i <= (q - 1) / 2; ++i)
        s[static_cast<std::size_t>((i * i) % q)] = 1;
    return BinarySequence(std::move(s));
}

BinarySequence construct_sequence(int q, double r, double t, Sign zero_element,
                                  bool half_offset) {
    const int a = round_half_up(t * q);
    int rot = round_half_up(r * q) + (half_offset ? (q + 1) / 2 : 0);
    rot %= q;
    const BinarySequence base = rotated_left(legendre(q, zero_element), rot);
    std::vector<Sign> s = base.signs();
    s.insert(s.end(), base.signs().begin(), base.signs().begin() + a);
    return BinarySequence(std::move(s));
}

SeedGridResult seed_grid(const ConstructConfig& config) {
    config.validate();
    const int L = config.length;
    SeedGridResult result;

    // classify primes by whether a = L - q is round-reachable from the
    // t window; keep the nearest out-of-window prime on each side too
    std::vector<int> in_window;
    int below = 0, above = 0;
    for (int q = L - 1; q >= 3 && (L - q) <= static_cast<int>(0.14 * q) + 1; --q) {
        if (!is_prime(q)) continue;
        const int a = L - q;
        if (a < 1) continue;
        const double lo = config.t_lo * q, hi = config.t_hi * q;
        if (a + 0.5 > lo && a - 0.5 < hi) {
            in_window.push_back(q);
        } else if (a - 0.5 >= hi) {
            if (below == 0) below = q;  // first prime past the window (t too large)
        } else {
            above = q;                  // latest prime before the window (t too small)
        }
    }
    std::vector<int> admitted = in_window;
    if (below) admitted.push_back(below);
    if (above) admitted.push_back(above);
    std::sort(admitted.begin(), admitted.end());
    admitted.erase(std::unique(admitted.begin(), admitted.end()), admitted.end());
    result.primes = admitted;

    if (admitted.empty()) {
        result.diagnostic = "no prime admits target length " + std::to_string(L) +
                            " with append fraction near [" + std::to_string(config.t_lo) +
                            ", " + std::to_string(config.t_hi) + "]";
        return result;
    }

    std::unordered_set<std::uint64_t> seen;
    for (int q : admitted) {
        const int a = L - q;
        const int offset = config.half_period_offset ? (q + 1) / 2 : 0;
        const BinarySequence base = legendre(q, config.zero_element);

        std::vector<int> rotations;
        const int rot_lo = round_half_up(config.r_lo * q);
        const int rot_hi = round_half_up(config.r_hi * q);
        if (config.grid_steps == 0) {
            for (int r = rot_lo; r <= rot_hi; ++r) rotations.push_back(r);
        } else if (config.grid_steps == 1) {
            rotations.push_back(round_half_up(0.5 * (config.r_lo + config.r_hi) * q));
        } else {
            for (int i = 0; i < config.grid_steps; ++i) {
                const double r = config.r_lo +
                                 (config.r_hi - config.r_lo) * i / (config.grid_steps - 1);
                rotations.push_back(round_half_up(r * q));
            }
        }
        std::sort(rotations.begin(), rotations.end());
        rotations.erase(std::unique(rotations.begin(), rotations.end()), rotations.end());

        for (int r : rotations) {
            const BinarySequence rot = rotated_left(base, (offset + r) % q);
            std::vector<Sign> s = rot.signs();
            s.insert(s.end(), rot.signs().begin(), rot.signs().begin() + a);
            BinarySequence seq(std::move(s));
            if (!seen.insert(seq.canonical_hash()).second) continue;
            result.candidates.push_back(make_candidate(std::move(seq), Origin::construction));
        }
    }

    std::stable_sort(result.candidates.begin(), result.candidates.end(),
                     [](const Candidate& x, const Candidate& y) { return x.energy < y.energy; });
    return result;
}

} // namespace labsearch
