#include "labs/saw.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

namespace labsearch {

Energy prefix_potential(const std::vector<Sign>& signs) {
    const int p = static_cast<int>(signs.size());
    Energy e = 0;
    for (int k = 1; k < p; ++k) {
        Energy c = 0;
        for (int i = 0; i + k < p; ++i) c += static_cast<Energy>(signs[i]) * signs[i + k];
        e += c * c;
    }
    return e;
}

std::vector<PartitionPrefix> rank_prefixes(int p, const PotentialFn& potential) {
    if (p < 1) throw std::invalid_argument("rank_prefixes: p must be >= 1");
    if (p > 30) throw std::invalid_argument("rank_prefixes: p > 30 is not enumerable");
    const auto pot = potential ? potential : PotentialFn(prefix_potential);
    const std::uint64_t count = 1ULL << (p - 1);
    std::vector<PartitionPrefix> out;
    out.reserve(count);
    for (std::uint64_t bits = 0; bits < count; ++bits) {
        std::vector<Sign> signs(static_cast<std::size_t>(p), Sign{1});
        for (int j = 1; j < p; ++j)
            if ((bits >> (j - 1)) & 1) signs[static_cast<std::size_t>(j)] = -1;
        PartitionPrefix pp{std::move(signs), 0};
        pp.potential = pot(pp.signs);
        out.push_back(std::move(pp));
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const PartitionPrefix& a, const PartitionPrefix& b) {
                         return a.potential < b.potential;
                     });
    return out;
}

int SawConfig::effective_prefix_len() const {
    if (prefix_len >= 0) return prefix_len;
    int p = 1;
    while ((1 << (p - 1)) < walkers) ++p;  // ceil(log2 walkers) + 1
    return p;
}

void SawConfig::validate() const {
    if (length < 3 || length % 2 == 0)
        throw std::invalid_argument("saw: length must be odd and >= 3");
    if (walkers < 1) throw std::invalid_argument("saw: walkers must be >= 1");
    if (effective_threshold() <= 0)
        throw std::invalid_argument("saw: energy threshold E_l must be positive");
    if (effective_iterations() < 1) throw std::invalid_argument("saw: T_i must be >= 1");
    const int kp1 = (length + 1) / 2;
    if (effective_prefix_len() > kp1)
        throw std::invalid_argument("saw: prefix length exceeds half length k+1");
    if (max_restarts == 0 && time_budget_s <= 0 && candidate_quota == 0 && stop_at_energy == 0)
        throw std::invalid_argument("saw: no stop condition configured");
}

SkewHalf init_partitioned_sequence(int length, const PartitionPrefix& prefix, Rng& rng) {
    if (length < 3 || length % 2 == 0)
        throw std::invalid_argument("init_partitioned_sequence: length must be odd and >= 3");
    const int kp1 = (length + 1) / 2;
    if (prefix.size() > kp1)
        throw std::invalid_argument("init_partitioned_sequence: prefix longer than half");
    std::vector<Sign> half(static_cast<std::size_t>(kp1));
    for (int i = 0; i < prefix.size(); ++i) half[static_cast<std::size_t>(i)] = prefix.signs[static_cast<std::size_t>(i)];
    for (int i = prefix.size(); i < kp1; ++i) half[static_cast<std::size_t>(i)] = rng.next_sign();
    return SkewHalf(std::move(half));
}

SkewWalkState::SkewWalkState(const SkewHalf& half, int prefix_len)
    : seq_(expand_skew(half)),
      state_(seq_),
      half_len_(half.half_length()),
      prefix_len_(prefix_len) {
    const auto& tab = TabulationHash::instance();
    h1_ = tab.length_salt(half_len_, 0);
    h2_ = tab.length_salt(half_len_, 1);
    for (int i = 0; i < half_len_; ++i) {
        h1_ ^= tab.entry(i, half[i], 0);
        h2_ ^= tab.entry(i, half[i], 1);
    }
}

std::uint64_t SkewWalkState::neighbour_hash1(int hp) const {
    return h1_ ^ TabulationHash::instance().flip_mask(hp, 0);
}

std::uint64_t SkewWalkState::neighbour_hash2(int hp) const {
    return h2_ ^ TabulationHash::instance().flip_mask(hp, 1);
}

Energy SkewWalkState::step(int hp) {
    const Energy d = apply_skew_flip(seq_, state_, hp);
    h1_ = neighbour_hash1(hp);
    h2_ = neighbour_hash2(hp);
    return d;
}

std::optional<FlipDelta> best_neighbour(const SkewWalkState& walk, const VisitedSet& visited) {
    const int k = walk.half_length() - 1;
    std::optional<FlipDelta> best;
    for (int hp = walk.prefix_len(); hp <= k; ++hp) {
        if (visited.maybe_contains(walk.neighbour_hash1(hp), walk.neighbour_hash2(hp))) continue;
        const Energy d = skew_flip_delta_fast(walk.sequence(), walk.state(), hp);
        if (!best || d < best->delta) best = FlipDelta{hp, d};
    }
    return best;
}

WalkStats run_walk(const SawConfig& config, const PartitionPrefix& prefix, Rng& rng,
                   VisitedSet& visited, CandidateSink& sink) {
    const Energy e_l = config.effective_threshold();
    const long long t_i = config.effective_iterations();

    visited.clear();
    SkewWalkState walk(init_partitioned_sequence(config.length, prefix, rng), prefix.size());
    visited.insert(walk.half_hash1(), walk.half_hash2());

    Energy e = walk.energy();
    WalkStats stats;
    stats.best_energy = e;

    for (long long it = 0; it < t_i; ++it) {
        const auto next = best_neighbour(walk, visited);
        if (!next) {
            stats.neighbourhood_exhausted = true;
            break;
        }
        ++stats.iterations;
        walk.step(next->index);
        visited.insert(walk.half_hash1(), walk.half_hash2());
        e += next->delta;
        if (config.debug_check_energy && e != walk.energy())
            throw std::logic_error("saw walk energy bookkeeping diverged");
        stats.best_energy = std::min(stats.best_energy, e);
        if (e < e_l) {
            sink.emit(Candidate{walk.sequence(), e, Origin::saw, prefix.signs});
            ++stats.emitted;
        }
    }
    return stats;
}

namespace {

struct PoolControl {
    std::atomic<bool> stop{false};
    std::atomic<long long> emitted{0};
    std::atomic<long long> walks{0};
    std::atomic<long long> iterations{0};
    std::atomic<Energy> best{0};
    bool best_set = false;
    std::mutex best_mu;

    void offer_best(Energy e, const SawConfig& cfg) {
        std::lock_guard<std::mutex> lock(best_mu);
        if (!best_set || e < best.load()) {
            best.store(e);
            best_set = true;
            if (cfg.stop_at_energy > 0 && e <= cfg.stop_at_energy) stop.store(true);
        }
    }
};

/// Gates deliveries on the candidate quota and counts them.
class CountingSink final : public CandidateSink {
public:
    CountingSink(CandidateSink& inner, PoolControl& ctl, const SawConfig& cfg)
        : inner_(inner), ctl_(ctl), cfg_(cfg) {}
    void emit(const Candidate& c) override {
        const long long n = ++ctl_.emitted;
        if (cfg_.candidate_quota > 0) {
            if (n > cfg_.candidate_quota) {
                ctl_.stop.store(true);
                --ctl_.emitted;
                return;
            }
            if (n >= cfg_.candidate_quota) ctl_.stop.store(true);
        }
        inner_.emit(c);
    }

private:
    CandidateSink& inner_;
    PoolControl& ctl_;
    const SawConfig& cfg_;
};

void walker_loop(const SawConfig& config, const PartitionPrefix& prefix, std::uint64_t stream,
                 CandidateSink& sink, PoolControl& ctl,
                 const std::chrono::steady_clock::time_point deadline, bool has_deadline) {
    Rng rng(config.seed, stream);
    BloomVisited visited(static_cast<std::size_t>(config.effective_iterations()) + 1,
                         config.bloom_fpr);
    for (long long restart = 0;
         config.max_restarts == 0 || restart < config.max_restarts; ++restart) {
        if (ctl.stop.load(std::memory_order_relaxed)) return;
        if (has_deadline && std::chrono::steady_clock::now() >= deadline) {
            ctl.stop.store(true);
            return;
        }
        const WalkStats ws = run_walk(config, prefix, rng, visited, sink);
        ctl.walks.fetch_add(1, std::memory_order_relaxed);
        ctl.iterations.fetch_add(ws.iterations, std::memory_order_relaxed);
        ctl.offer_best(ws.best_energy, config);
    }
}

} // namespace

PoolStats run_saw_pool(const SawConfig& config, CandidateSink& sink) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    const bool has_deadline = config.time_budget_s > 0;
    const auto deadline =
        start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                    std::chrono::duration<double>(config.time_budget_s));

    const int p = config.effective_prefix_len();
    std::vector<PartitionPrefix> prefixes;
    if (p == 0) {
        prefixes.push_back(PartitionPrefix{{}, 0});
    } else {
        prefixes = rank_prefixes(p);
    }

    PoolControl ctl;
    CountingSink counting(sink, ctl, config);
    DedupSink dedup(counting);

    if (config.threads <= 1) {
        for (int w = 0; w < config.walkers && !ctl.stop.load(); ++w)
            walker_loop(config, prefixes[static_cast<std::size_t>(w) % prefixes.size()],
                        static_cast<std::uint64_t>(w), dedup, ctl, deadline, has_deadline);
    } else {
        const int nthreads = std::min(config.threads, config.walkers);
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int t = 0; t < nthreads; ++t) {
            pool.emplace_back([&, t] {
                for (int w = t; w < config.walkers; w += nthreads) {
                    if (ctl.stop.load()) break;
                    walker_loop(config, prefixes[static_cast<std::size_t>(w) % prefixes.size()],
                                static_cast<std::uint64_t>(w), dedup, ctl, deadline,
                                has_deadline);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    PoolStats stats;
    stats.walks = ctl.walks.load();
    stats.iterations = ctl.iterations.load();
    stats.emitted = ctl.emitted.load();
    stats.best_energy = ctl.best_set ? ctl.best.load() : 0;
    stats.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return stats;
}

} // namespace labsearch
