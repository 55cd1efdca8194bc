#include "labs/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "labs/hex_codec.hpp"

namespace labsearch {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = seed ^ (a * 0x9e3779b97f4a7c15ULL) ^ (b * 0xc2b2ae3d27d4eb4fULL);
    return splitmix64(s);
}

} // namespace

void RunConfig::validate() const {
    if (lengths.empty()) throw std::invalid_argument("pipeline: need at least one target length");
    for (int l : lengths)
        if (l < 3) throw std::invalid_argument("pipeline: target lengths must be >= 3");
    if (rounds <= 0 && time_budget_s <= 0 && stop_at_merit <= 0)
        throw std::invalid_argument("pipeline: need rounds, a time budget, or a target merit");
    if (deterministic && time_budget_s > 0)
        throw std::invalid_argument("pipeline: deterministic mode forbids wall-clock budgets");
    if (deterministic && rounds <= 0 && stop_at_merit <= 0)
        throw std::invalid_argument("pipeline: deterministic mode needs rounds or a target merit");
    if (saw_share <= 0 || saw_share >= 1)
        throw std::invalid_argument("pipeline: saw_share must be in (0,1)");
    if (threads < 1) throw std::invalid_argument("pipeline: threads must be >= 1");
    if (refine_top < 0 || construction_seeds < 0)
        throw std::invalid_argument("pipeline: negative candidate counts");
}

BestStore::BestStore(const std::vector<int>& lengths) {
    for (int l : lengths) records_.emplace(l, std::nullopt);
}

bool BestStore::update_if_better(const Candidate& c, double wall_seconds) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = records_.find(c.seq.length());
    if (it == records_.end()) return false;
    if (it->second && it->second->candidate.energy <= c.energy) return false;
    it->second = ResultRecord{c, wall_seconds, ""};
    return true;
}

Energy BestStore::best_energy(int length) const {
    std::lock_guard<std::mutex> lock(mu_);
    const auto it = records_.find(length);
    if (it == records_.end() || !it->second) return -1;
    return it->second->candidate.energy;
}

std::map<int, ResultRecord> BestStore::snapshot() const {
    std::lock_guard<std::mutex> lock(mu_);
    std::map<int, ResultRecord> out;
    for (const auto& [l, rec] : records_)
        if (rec) out.emplace(l, *rec);
    return out;
}

std::string config_fingerprint(const RunConfig& config) {
    std::ostringstream os;
    os << "lengths =";
    for (int l : config.lengths) os << ' ' << l;
    os << "\nsaw.prefix_len = " << config.saw.prefix_len
       << "\nsaw.walkers = " << config.saw.walkers
       << "\nsaw.max_iterations = " << config.saw.max_iterations
       << "\nsaw.energy_threshold = " << config.saw.energy_threshold
       << "\nsaw.target_merit = " << config.saw.target_merit
       << "\nsaw.bloom_fpr = " << config.saw.bloom_fpr
       << "\nsaw.max_restarts = " << config.saw.max_restarts
       << "\npq.max_stale_pivots = " << config.pq.max_stale_pivots
       << "\npq.max_rotation = " << config.pq.max_rotation
       << "\npq.queue_capacity = " << config.pq.queue_capacity
       << "\nconstruct.enabled = " << config.use_construction
       << "\nconstruct.seeds = " << config.construction_seeds
       << "\nrefine_top = " << config.refine_top
       << "\nrounds = " << config.rounds
       << "\ntime_budget_s = " << config.time_budget_s
       << "\nsaw_share = " << config.saw_share
       << "\nstop_at_merit = " << config.stop_at_merit
       << "\nseed = " << config.seed
       << "\nthreads = " << config.threads
       << "\ndeterministic = " << config.deterministic << '\n';
    const std::string text = os.str();
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(hash_bytes(text)));
    return std::string(buf);
}

namespace {

struct Agenda {
    std::vector<Candidate> items;
    std::unordered_set<std::uint64_t> seen;

    void add(const Candidate& c) {
        if (seen.insert(c.hash()).second) items.push_back(c);
    }
    void sort_by_energy() {
        std::stable_sort(items.begin(), items.end(),
                         [](const Candidate& a, const Candidate& b) { return a.energy < b.energy; });
    }
};

bool targets_reached(const RunConfig& config, const BestStore& store) {
    if (config.stop_at_merit <= 0) return false;
    for (int l : config.lengths) {
        const Energy e = store.best_energy(l);
        if (e < 0) return false;
        if (merit_factor(l, e) < config.stop_at_merit) return false;
    }
    return true;
}

// refines a batch of candidates, each against the targets adjacent to its
// own length, updating the store; parallel across candidates
void refine_batch(const std::vector<Candidate>& batch, const RunConfig& config,
                  const std::set<int>& targets, BestStore& store, Clock::time_point t0,
                  double deadline_total, long long& refine_calls,
                  std::ofstream* improvement_log) {
    if (batch.empty()) return;
    std::mutex log_mu;
    std::atomic<std::size_t> cursor{0};

    auto worker = [&] {
        while (true) {
            const std::size_t idx = cursor.fetch_add(1);
            if (idx >= batch.size()) return;
            const Candidate& cand = batch[idx];
            if (deadline_total > 0 && seconds_since(t0) >= deadline_total) return;
            if (targets_reached(config, store)) return;

            std::set<int> local_targets;
            for (int d : {-1, 0, 1})
                if (targets.count(cand.seq.length() + d)) local_targets.insert(cand.seq.length() + d);
            if (local_targets.empty()) local_targets.insert(cand.seq.length());

            PqConfig pq = config.pq;
            if (deadline_total > 0) {
                const double remain = deadline_total - seconds_since(t0);
                if (remain <= 0) return;
                pq.deadline_s = remain;
            }
            auto per_length = refine_with_operators(cand, pq, local_targets);
            const double wall = config.deterministic ? 0.0 : seconds_since(t0);
            for (auto& [l, best] : per_length) store.update_if_better(best, wall);
            // the candidate itself may already be a target-length record
            store.update_if_better(cand, wall);
            {
                std::lock_guard<std::mutex> lock(log_mu);
                ++refine_calls;
                if (improvement_log) {
                    const auto r = per_length.find(cand.seq.length());
                    if (r != per_length.end())
                        *improvement_log << cand.seq.length() << ',' << refine_calls << ','
                                         << r->second.energy << '\n';
                }
            }
        }
    };

    const int nthreads = std::max(1, std::min<int>(config.threads,
                                                   static_cast<int>(batch.size())));
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
}

} // namespace

PipelineResult run_pipeline(const RunConfig& config) {
    config.validate();
    const auto t0 = Clock::now();

    std::vector<int> targets_vec = config.lengths;
    std::sort(targets_vec.begin(), targets_vec.end());
    targets_vec.erase(std::unique(targets_vec.begin(), targets_vec.end()), targets_vec.end());
    const std::set<int> targets(targets_vec.begin(), targets_vec.end());

    // walks run at odd lengths only; even targets are reached via operators
    std::set<int> walk_lengths;
    for (int l : targets_vec) {
        if (l % 2 == 1) {
            walk_lengths.insert(l);
        } else {
            if (l - 1 >= 3) walk_lengths.insert(l - 1);
            walk_lengths.insert(l + 1);
        }
    }

    PipelineResult result;
    result.fingerprint = config_fingerprint(config);
    BestStore store(targets_vec);

    std::ofstream candidates_out;
    if (!config.candidates_path.empty()) {
        candidates_out.open(config.candidates_path);
        if (!candidates_out)
            throw std::runtime_error("cannot open candidates file: " + config.candidates_path);
    }
    std::ofstream log_out;
    if (!config.log_path.empty()) {
        log_out.open(config.log_path);
        if (!log_out) throw std::runtime_error("cannot open log file: " + config.log_path);
        log_out << "length,refine_call,best_energy\n";
    }

    std::unordered_set<std::uint64_t> candidate_hashes;
    auto persist_candidate = [&](const Candidate& c) {
        ++result.candidates;
        if (candidates_out.is_open() && candidate_hashes.insert(c.hash()).second)
            candidates_out << format_record(c) << '\n';
    };

    // construction seeding (non-skew-symmetric, so Step 2 only)
    std::vector<Candidate> construction_seeds;
    if (config.use_construction) {
        for (int l : targets_vec) {
            if (l < 20) continue;  // no usable prime/append decomposition below this
            ConstructConfig cc = config.construct;
            cc.length = l;
            const SeedGridResult grid = seed_grid(cc);
            for (std::size_t i = 0;
                 i < grid.candidates.size() &&
                 i < static_cast<std::size_t>(config.construction_seeds);
                 ++i) {
                construction_seeds.push_back(grid.candidates[i]);
                persist_candidate(grid.candidates[i]);
            }
            if (!grid.candidates.empty())
                store.update_if_better(grid.candidates.front(),
                                       config.deterministic ? 0.0 : seconds_since(t0));
        }
    }

    const double total_budget = config.time_budget_s;
    bool stop = false;
    for (long long round = 0; !stop; ++round) {
        if (config.rounds > 0 && round >= config.rounds) break;
        if (total_budget > 0 && seconds_since(t0) >= total_budget) break;
        if (targets_reached(config, store)) break;

        Agenda agenda;
        if (round == 0)
            for (const auto& c : construction_seeds) agenda.add(c);

        // Step 1: pools per odd walk length
        for (int ls : walk_lengths) {
            if (total_budget > 0 && seconds_since(t0) >= total_budget) break;
            SawConfig sc = config.saw;
            sc.length = ls;
            sc.seed = mix_seed(config.seed, static_cast<std::uint64_t>(round),
                               static_cast<std::uint64_t>(ls));
            sc.threads = config.threads;
            if (sc.energy_threshold == 0 && sc.target_merit == 0) sc.target_merit = 5.0;
            if (total_budget > 0) {
                const double remain = total_budget - seconds_since(t0);
                sc.time_budget_s = std::max(0.05, remain * config.saw_share /
                                                      static_cast<double>(walk_lengths.size()));
            }
            if (targets.count(ls))
                sc.stop_at_energy =
                    config.stop_at_merit > 0
                        ? energy_threshold_for_merit(ls, config.stop_at_merit)
                        : 0;

            CollectingSink sink;
            const PoolStats ps = run_saw_pool(sc, sink);
            result.saw_stats.walks += ps.walks;
            result.saw_stats.iterations += ps.iterations;
            result.saw_stats.emitted += ps.emitted;

            auto cands = sink.take();
            std::stable_sort(cands.begin(), cands.end(),
                             [](const Candidate& a, const Candidate& b) {
                                 return a.energy < b.energy;
                             });
            for (std::size_t i = 0; i < cands.size(); ++i) {
                persist_candidate(cands[i]);
                if (i < static_cast<std::size_t>(config.refine_top)) agenda.add(cands[i]);
                store.update_if_better(cands[i],
                                       config.deterministic ? 0.0 : seconds_since(t0));
            }
        }

        // Step 2: refinement + length operators
        agenda.sort_by_energy();
        refine_batch(agenda.items, config, targets, store, t0, total_budget,
                     result.refine_calls, log_out.is_open() ? &log_out : nullptr);

        if (targets_reached(config, store)) break;
        if (config.rounds <= 0 && total_budget <= 0 && config.stop_at_merit > 0) {
            // merit-driven run with no other budget: keep going
            continue;
        }
        if (config.rounds <= 0 && total_budget <= 0) stop = true;
    }

    result.best = store.snapshot();
    for (auto& [l, rec] : result.best) rec.fingerprint = result.fingerprint;
    result.wall_seconds = config.deterministic ? 0.0 : seconds_since(t0);

    if (!config.results_path.empty()) {
        std::ofstream out(config.results_path);
        if (!out) throw std::runtime_error("cannot open results file: " + config.results_path);
        for (const auto& [l, rec] : result.best) {
            char wall[32];
            std::snprintf(wall, sizeof wall, "%.3f", rec.wall_seconds);
            out << format_record(rec.candidate) << '\t' << wall << '\t' << rec.fingerprint
                << '\n';
        }
    }
    return result;
}

VerifyReport verify_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open records file: " + path);
    VerifyReport report;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::string err;
        const auto rec = parse_record_line(line, err);
        if (!rec) {
            report.malformed.push_back({lineno, err});
            continue;
        }
        ++report.records_checked;
        std::optional<BinarySequence> decoded;
        try {
            decoded = hex_decode(rec->hex, rec->length);
        } catch (const std::exception& ex) {
            report.mismatches.push_back({lineno, std::string("hex: ") + ex.what()});
            continue;
        }
        const BinarySequence& seq = *decoded;
        const CorrelationState st(seq);
        if (st.energy() != rec->energy) {
            report.mismatches.push_back(
                {lineno, "energy mismatch: stored " + std::to_string(rec->energy) +
                             ", recomputed " + std::to_string(st.energy())});
            continue;
        }
        const double f = merit_factor(rec->length, st.energy());
        if (std::abs(f - rec->merit) > 5e-5 + 1e-9) {
            report.mismatches.push_back({lineno, "merit mismatch: stored " +
                                                     std::to_string(rec->merit) +
                                                     ", recomputed " + std::to_string(f)});
            continue;
        }
        if (rec->origin == "saw") {
            if (!is_skew_symmetric(seq)) {
                report.mismatches.push_back({lineno, "saw record is not skew-symmetric"});
                continue;
            }
            bool odd_ok = true;
            for (int k = 1; k < seq.length(); k += 2)
                if (st.correlation(k) != 0) odd_ok = false;
            if (!odd_ok) {
                report.mismatches.push_back({lineno, "saw record has nonzero odd-lag correlation"});
                continue;
            }
        }
    }
    return report;
}

ExperimentResult experiment_compare(const ExperimentConfig& config) {
    if (config.runs < 5)
        throw std::invalid_argument("experiment: fewer than 5 runs is underpowered, refusing");
    if (config.length < 3 || config.length % 2 == 0)
        throw std::invalid_argument("experiment: length must be odd and >= 3");

    ExperimentResult result;
    for (int run = 0; run < config.runs; ++run) {
        // arm A: walks only
        SawConfig sa = config.saw;
        sa.length = config.length;
        sa.seed = mix_seed(config.seed, 0xA, static_cast<std::uint64_t>(run));
        CollectingSink sink_a;
        const PoolStats stats_a = run_saw_pool(sa, sink_a);
        result.saw_only.push_back(stats_a.best_energy);

        // arm B: same walk budget plus refinement of the sieved candidates
        SawConfig sb = config.saw;
        sb.length = config.length;
        sb.seed = config.paired_seeds ? sa.seed
                                      : mix_seed(config.seed, 0xB, static_cast<std::uint64_t>(run));
        CollectingSink sink_b;
        const PoolStats stats_b = run_saw_pool(sb, sink_b);
        Energy best_b = stats_b.best_energy;

        auto cands = sink_b.take();
        std::stable_sort(cands.begin(), cands.end(),
                         [](const Candidate& a, const Candidate& b) {
                             return a.energy < b.energy;
                         });
        std::unordered_set<std::uint64_t> seen;
        int refined = 0;
        for (const auto& c : cands) {
            if (refined >= config.refine_top) break;
            if (!seen.insert(c.hash()).second) continue;
            ++refined;
            const RefineResult r = refine(c, config.pq);
            best_b = std::min(best_b, r.best.energy);
        }
        result.dual_step.push_back(best_b);
    }

    std::vector<double> a(result.saw_only.begin(), result.saw_only.end());
    std::vector<double> b(result.dual_step.begin(), result.dual_step.end());
    result.median_saw = median(a);
    result.median_dual = median(b);
    result.test = rank_sum_test(a, b);
    return result;
}

std::string experiment_csv(const ExperimentResult& result) {
    std::ostringstream os;
    os << "run,saw_best_energy,dual_best_energy\n";
    for (std::size_t i = 0; i < result.saw_only.size(); ++i)
        os << i << ',' << result.saw_only[i] << ',' << result.dual_step[i] << '\n';
    return os.str();
}

} // namespace labsearch
