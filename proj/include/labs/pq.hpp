#pragma once

#include <map>
#include <set>
#include <unordered_set>

#include "labs/candidate.hpp"

namespace labsearch {

struct PqConfig {
    long long max_stale_pivots = 0;     // T_u: pivots since last improvement; 0 = default 2*L
    int max_rotation = 5;               // T_r
    std::size_t queue_capacity = 1u << 20;
    double deadline_s = 0.0;            // 0 = no wall-clock stop
    bool debug_check_energy = false;

    long long effective_stale_limit(int length) const {
        return max_stale_pivots > 0 ? max_stale_pivots : 2LL * length;
    }
    void validate(int length) const;
};

/// Bit-packed sequence for frontier storage (64 elements per word, element i
/// in bit i of word i/64; set bit = +1).
struct PackedSeq {
    int length = 0;
    std::vector<std::uint64_t> words;

    static PackedSeq pack(const BinarySequence& seq);
    BinarySequence unpack() const;
};

/// Min-energy priority queue plus the exact visited-hash set of Algorithm
/// 2's second step. Ties pop in insertion order; when full, the worst entry
/// is discarded on push.
class SearchFrontier {
public:
    explicit SearchFrontier(std::size_t capacity) : capacity_(capacity ? capacity : 1) {}

    bool seen(std::uint64_t hash) const { return visited_.count(hash) > 0; }
    void mark(std::uint64_t hash) { visited_.insert(hash); }

    /// Pushes an entry (the hash must have been marked already). Returns
    /// false when the entry was discarded because the queue is full and the
    /// entry is no better than the current worst.
    bool push(const BinarySequence& seq, Energy energy);

    struct Entry {
        Energy energy;
        std::uint64_t order;
        PackedSeq seq;
        bool operator<(const Entry& o) const {
            return energy != o.energy ? energy < o.energy : order < o.order;
        }
    };

    bool empty() const { return queue_.empty(); }
    std::size_t size() const { return queue_.size(); }
    std::size_t visited_count() const { return visited_.size(); }

    /// Removes and returns the minimum-energy entry.
    Entry pop_min();

private:
    std::size_t capacity_;
    std::uint64_t next_order_ = 0;
    std::set<Entry> queue_;
    std::unordered_set<std::uint64_t> visited_;
};

/// Pushes the unvisited cyclic rotations of seq (left and right, offsets
/// 1..t_r) with exact energies. Correlations are updated incrementally per
/// one-step rotation, O(L) each.
void make_rotations(const BinarySequence& seq, const CorrelationState& state,
                    SearchFrontier& frontier, int t_r);

struct RefineResult {
    Candidate best;
    long long pivots = 0;
    long long pushes = 0;
    long long improvements = 0;
    bool queue_exhausted = false;
    /// (pivot index, best energy) at each strict improvement.
    std::vector<std::pair<long long, Energy>> improvement_log;
};

/// Priority-queue-guided depth-first refinement over the unrestricted
/// space. Never returns a worse sequence than the input.
RefineResult refine(const Candidate& start, const PqConfig& config);

/// The six single-step end operators: drop-front, drop-back (length L-1),
/// prepend +1/-1, append +1/-1 (length L+1), each with exact energy.
std::vector<Candidate> apply_length_operators(const BinarySequence& seq);

/// Alternates refine and the end operators, reintroducing derived sequences
/// as candidates while they strictly improve some target length's best.
/// Returns the best candidate found per target length.
std::map<int, Candidate> refine_with_operators(const Candidate& start, const PqConfig& config,
                                               const std::set<int>& target_lengths);

} // namespace labsearch
