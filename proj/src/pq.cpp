#include "labs/pq.hpp"

#include <algorithm>
#include <chrono>

namespace labsearch {

void PqConfig::validate(int length) const {
    if (effective_stale_limit(length) < 1)
        throw std::invalid_argument("pq: T_u must be >= 1");
    if (max_rotation < 0) throw std::invalid_argument("pq: T_r must be >= 0");
    if (queue_capacity < 1) throw std::invalid_argument("pq: queue capacity must be >= 1");
}

PackedSeq PackedSeq::pack(const BinarySequence& seq) {
    PackedSeq p;
    p.length = seq.length();
    p.words.assign((static_cast<std::size_t>(p.length) + 63) / 64, 0);
    for (int i = 0; i < p.length; ++i)
        if (seq[i] > 0) p.words[static_cast<std::size_t>(i) >> 6] |= 1ULL << (i & 63);
    return p;
}

BinarySequence PackedSeq::unpack() const {
    std::vector<Sign> v(static_cast<std::size_t>(length));
    for (int i = 0; i < length; ++i)
        v[static_cast<std::size_t>(i)] =
            (words[static_cast<std::size_t>(i) >> 6] >> (i & 63)) & 1 ? Sign{1} : Sign{-1};
    return BinarySequence(std::move(v));
}

bool SearchFrontier::push(const BinarySequence& seq, Energy energy) {
    if (queue_.size() >= capacity_) {
        auto worst = std::prev(queue_.end());
        if (worst->energy <= energy) return false;  // no better than current worst
        queue_.erase(worst);
    }
    queue_.insert(Entry{energy, next_order_++, PackedSeq::pack(seq)});
    return true;
}

SearchFrontier::Entry SearchFrontier::pop_min() {
    auto it = queue_.begin();
    Entry e = *it;
    queue_.erase(it);
    return e;
}

namespace {

std::uint64_t canonical_hash(const BinarySequence& seq) { return seq.canonical_hash(0); }

// One-step cyclic rotation with incremental correlation update.
// Left:  C_k' = C_k + s_0 * (s_{L-k} - s_k)           (s_0 moves to the end)
// Right: C_k' = C_k + s_{L-1} * (s_{k-1} - s_{L-1-k}) (s_{L-1} moves to front)
Energy rotate_left_once(std::vector<Sign>& s, std::vector<Energy>& c, Energy e) {
    const int n = static_cast<int>(s.size());
    const Energy s0 = s[0];
    for (int k = 1; k < n; ++k) {
        const Energy dc = s0 * (static_cast<Energy>(s[static_cast<std::size_t>(n - k)]) -
                                s[static_cast<std::size_t>(k)]);
        if (dc != 0) {
            e += dc * (2 * c[static_cast<std::size_t>(k)] + dc);
            c[static_cast<std::size_t>(k)] += dc;
        }
    }
    std::rotate(s.begin(), s.begin() + 1, s.end());
    return e;
}

Energy rotate_right_once(std::vector<Sign>& s, std::vector<Energy>& c, Energy e) {
    const int n = static_cast<int>(s.size());
    const Energy sl = s[static_cast<std::size_t>(n - 1)];
    for (int k = 1; k < n; ++k) {
        const Energy dc = sl * (static_cast<Energy>(s[static_cast<std::size_t>(k - 1)]) -
                                s[static_cast<std::size_t>(n - 1 - k)]);
        if (dc != 0) {
            e += dc * (2 * c[static_cast<std::size_t>(k)] + dc);
            c[static_cast<std::size_t>(k)] += dc;
        }
    }
    std::rotate(s.begin(), s.end() - 1, s.end());
    return e;
}

void rotation_chain(const BinarySequence& seq, const CorrelationState& state,
                    SearchFrontier& frontier, int t_r, bool left) {
    std::vector<Sign> s = seq.signs();
    const int n = static_cast<int>(s.size());
    std::vector<Energy> c(static_cast<std::size_t>(n));
    for (int k = 1; k < n; ++k) c[static_cast<std::size_t>(k)] = state.correlation(k);
    Energy e = state.energy();
    for (int r = 1; r <= t_r; ++r) {
        e = left ? rotate_left_once(s, c, e) : rotate_right_once(s, c, e);
        BinarySequence rot{s};
        const std::uint64_t h = canonical_hash(rot);
        if (frontier.seen(h)) continue;
        frontier.mark(h);
        frontier.push(rot, e);
    }
}

} // namespace

void make_rotations(const BinarySequence& seq, const CorrelationState& state,
                    SearchFrontier& frontier, int t_r) {
    if (t_r <= 0) return;
    if (t_r >= seq.length())
        throw std::invalid_argument("make_rotations: T_r must be < L");
    rotation_chain(seq, state, frontier, t_r, true);
    rotation_chain(seq, state, frontier, t_r, false);
}

RefineResult refine(const Candidate& start, const PqConfig& config) {
    const int n = start.seq.length();
    config.validate(n);
    const long long t_u = config.effective_stale_limit(n);
    const int t_r = std::min(config.max_rotation, n - 1);  // rotations need T_r < L
    const auto& tab = TabulationHash::instance();

    const bool has_deadline = config.deadline_s > 0;
    const auto deadline = std::chrono::steady_clock::now() +
                          std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                              std::chrono::duration<double>(config.deadline_s));

    RefineResult res{start, 0, 0, 0, false, {}};
    Energy e_best = start.energy;

    SearchFrontier frontier(config.queue_capacity);
    frontier.mark(canonical_hash(start.seq));
    frontier.push(start.seq, start.energy);
    ++res.pushes;

    long long u = 0;
    while (u < t_u && !frontier.empty()) {
        if (has_deadline && std::chrono::steady_clock::now() >= deadline) break;
        ++u;
        ++res.pivots;
        auto entry = frontier.pop_min();
        BinarySequence seq = entry.seq.unpack();
        CorrelationState state(seq);
        Energy e = state.energy();
        if (config.debug_check_energy && e != entry.energy)
            throw std::logic_error("pq frontier energy bookkeeping diverged");
        // rotation-pushed entries bypass the neighbour improvement check, so
        // the pivot's own energy is compared here
        if (e < e_best) {
            e_best = e;
            res.best = Candidate{seq, e, Origin::dfs, start.prefix};
            ++res.improvements;
            res.improvement_log.emplace_back(res.pivots, e_best);
            u = 0;
        }
        std::uint64_t h = canonical_hash(seq);

        for (int i = 0; i < n; ++i) {
            const std::uint64_t nh = h ^ tab.flip_mask(i, 0);
            if (frontier.seen(nh)) continue;
            const Energy d = flip_delta(seq, state, i);
            apply_flip(seq, state, i);  // seq is now the neighbour
            frontier.mark(nh);
            if (frontier.push(seq, e + d)) ++res.pushes;
            if (e + d < e_best) {
                e_best = e + d;
                res.best = Candidate{seq, e_best, Origin::dfs, start.prefix};
                ++res.improvements;
                res.improvement_log.emplace_back(res.pivots, e_best);
                u = 0;
            }
            make_rotations(seq, state, frontier, t_r);
            apply_flip(seq, state, i);  // restore the pivot
        }
    }
    res.queue_exhausted = frontier.empty();
    return res;
}

std::vector<Candidate> apply_length_operators(const BinarySequence& seq) {
    const int n = seq.length();
    if (n < 3)
        throw std::invalid_argument("apply_length_operators: need L >= 3");
    std::vector<Candidate> out;
    out.reserve(6);
    const auto& s = seq.signs();

    std::vector<Sign> v(s.begin() + 1, s.end());
    out.push_back(make_candidate(BinarySequence(v), Origin::op));
    v.assign(s.begin(), s.end() - 1);
    out.push_back(make_candidate(BinarySequence(v), Origin::op));
    for (Sign add : {Sign{1}, Sign{-1}}) {
        v.assign(1, add);
        v.insert(v.end(), s.begin(), s.end());
        out.push_back(make_candidate(BinarySequence(v), Origin::op));
    }
    for (Sign add : {Sign{1}, Sign{-1}}) {
        v.assign(s.begin(), s.end());
        v.push_back(add);
        out.push_back(make_candidate(BinarySequence(v), Origin::op));
    }
    return out;
}

std::map<int, Candidate> refine_with_operators(const Candidate& start, const PqConfig& config,
                                               const std::set<int>& target_lengths) {
    std::map<int, Candidate> best;
    auto improves = [&](const Candidate& c) {
        if (!target_lengths.count(c.seq.length())) return false;
        const auto it = best.find(c.seq.length());
        return it == best.end() || c.energy < it->second.energy;
    };

    std::vector<Candidate> seeds{start};
    std::unordered_set<std::uint64_t> seen_seeds{start.hash()};
    while (!seeds.empty()) {
        std::vector<Candidate> next;
        for (const auto& seed : seeds) {
            RefineResult r = refine(seed, config);
            if (improves(r.best)) best.insert_or_assign(r.best.seq.length(), r.best);
            if (r.best.seq.length() < 3) continue;
            for (auto& derived : apply_length_operators(r.best.seq)) {
                if (improves(derived) && seen_seeds.insert(derived.hash()).second)
                    next.push_back(std::move(derived));
            }
        }
        seeds = std::move(next);
    }
    return best;
}

} // namespace labsearch
