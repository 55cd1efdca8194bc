#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <unordered_set>

#include "labs/bloom.hpp"
#include "labs/candidate.hpp"
#include "labs/skew.hpp"

namespace labsearch {

/// A restriction class: the first p half-elements are pinned, the rest of
/// the half is free, the back half follows from skew-symmetry.
struct PartitionPrefix {
    std::vector<Sign> signs;
    Energy potential = 0;  // ordering key, see prefix_potential

    int size() const { return static_cast<int>(signs.size()); }
};

/// Self-energy of the prefix viewed as a standalone sequence:
/// sum_{k=1}^{p-1} (sum_i s_i s_{i+k})^2. Low potential keeps the early
/// autocorrelation terms small. The ranking is pluggable via rank_prefixes.
Energy prefix_potential(const std::vector<Sign>& signs);

using PotentialFn = std::function<Energy(const std::vector<Sign>&)>;

/// Enumerates the 2^{p-1} prefixes with s_1 = +1 (global negation symmetry)
/// ordered by potential ascending, ties by enumeration order. p in [1, 30].
std::vector<PartitionPrefix> rank_prefixes(int p, const PotentialFn& potential = nullptr);

struct SawConfig {
    int length = 0;                 // odd L >= 3
    int prefix_len = -1;            // p; -1 = default max(0, ceil(log2 walkers) + 1)
    int walkers = 1;
    long long max_iterations = 0;   // T_i; 0 = default ti_multiplier * (L+1) / 2
    double ti_multiplier = 8.0;
    Energy energy_threshold = 0;    // E_l sieve; > 0 required unless target_merit set
    double target_merit = 0.0;      // when > 0: E_l = floor(L^2 / (2 * target_merit))
    double bloom_fpr = 1e-4;        // Bloom sized for T_i insertions at this rate
    std::uint64_t seed = 1;
    int threads = 1;
    long long max_restarts = 1;     // walks per walker; 0 = unlimited (needs another stop)
    double time_budget_s = 0.0;     // 0 = no time stop
    long long candidate_quota = 0;  // 0 = no quota
    Energy stop_at_energy = 0;      // 0 = off; stop pool once best <= this
    bool debug_check_energy = false;

    long long effective_iterations() const {
        if (max_iterations > 0) return max_iterations;
        return static_cast<long long>(ti_multiplier * (length + 1) / 2);
    }
    Energy effective_threshold() const {
        if (target_merit > 0.0) return energy_threshold_for_merit(length, target_merit);
        return energy_threshold;
    }
    int effective_prefix_len() const;
    void validate() const;
};

/// Visited-pivot store for one walk. The walk hands in the two canonical
/// 64-bit hashes of the pivot's defining half.
class VisitedSet {
public:
    virtual ~VisitedSet() = default;
    virtual void insert(std::uint64_t h1, std::uint64_t h2) = 0;
    virtual bool maybe_contains(std::uint64_t h1, std::uint64_t h2) const = 0;
    virtual void clear() = 0;
};

class BloomVisited final : public VisitedSet {
public:
    BloomVisited(std::size_t capacity, double fpr)
        : filter_(BloomFilter::with_capacity(capacity, fpr)) {}
    void insert(std::uint64_t h1, std::uint64_t h2) override { filter_.insert(h1, h2); }
    bool maybe_contains(std::uint64_t h1, std::uint64_t h2) const override {
        return filter_.maybe_contains(h1, h2);
    }
    void clear() override { filter_.clear(); }
    const BloomFilter& filter() const { return filter_; }

private:
    BloomFilter filter_;
};

/// Exact replacement used by tests to separate walk behaviour from Bloom
/// false positives.
class ExactVisited final : public VisitedSet {
public:
    void insert(std::uint64_t h1, std::uint64_t h2) override {
        seen_.insert(key(h1, h2));
    }
    bool maybe_contains(std::uint64_t h1, std::uint64_t h2) const override {
        return seen_.count(key(h1, h2)) > 0;
    }
    void clear() override { seen_.clear(); }

private:
    static unsigned __int128 key(std::uint64_t h1, std::uint64_t h2) {
        return (static_cast<unsigned __int128>(h1) << 64) | h2;
    }
    struct KeyHash {
        std::size_t operator()(unsigned __int128 k) const {
            return static_cast<std::size_t>(static_cast<std::uint64_t>(k) ^
                                            static_cast<std::uint64_t>(k >> 64));
        }
    };
    std::unordered_set<unsigned __int128, KeyHash> seen_;
};

/// Draws a random half with the prefix pinned and the free tail uniform.
SkewHalf init_partitioned_sequence(int length, const PartitionPrefix& prefix, Rng& rng);

/// Walk state: the expanded pivot, its correlations, and the incremental
/// half hashes the visited set is keyed by.
class SkewWalkState {
public:
    SkewWalkState(const SkewHalf& half, int prefix_len);

    const BinarySequence& sequence() const { return seq_; }
    const CorrelationState& state() const { return state_; }
    Energy energy() const { return state_.energy(); }
    int half_length() const { return half_len_; }
    int prefix_len() const { return prefix_len_; }
    std::uint64_t half_hash1() const { return h1_; }
    std::uint64_t half_hash2() const { return h2_; }

    std::uint64_t neighbour_hash1(int hp) const;
    std::uint64_t neighbour_hash2(int hp) const;

    /// Flips half position hp (and its mirror) and updates hashes/state.
    Energy step(int hp);

private:
    BinarySequence seq_;
    CorrelationState state_;
    int half_len_;
    int prefix_len_;
    std::uint64_t h1_, h2_;
};

/// Lowest-delta unexplored neighbour among the free half indices
/// (hp in [p, k]); ties go to the lowest index; nullopt when every free
/// neighbour is already in the visited set.
std::optional<FlipDelta> best_neighbour(const SkewWalkState& walk, const VisitedSet& visited);

struct WalkStats {
    long long iterations = 0;
    long long emitted = 0;
    Energy best_energy = 0;
    bool neighbourhood_exhausted = false;
};

/// One self-avoiding walk from a fresh pivot. Emits the expanded sequence to
/// the sink whenever the pivot energy drops below the E_l sieve.
WalkStats run_walk(const SawConfig& config, const PartitionPrefix& prefix, Rng& rng,
                   VisitedSet& visited, CandidateSink& sink);

struct PoolStats {
    long long walks = 0;
    long long iterations = 0;
    long long emitted = 0;       // pre-dedup emissions
    Energy best_energy = 0;
    double wall_seconds = 0.0;
};

/// Runs `walkers` share-nothing walkers over the ranked prefixes
/// (round-robin), each restarting with a fresh free tail until a stop
/// condition fires. Candidates are deduplicated before reaching `sink`.
PoolStats run_saw_pool(const SawConfig& config, CandidateSink& sink);

} // namespace labsearch
