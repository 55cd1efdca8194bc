#pragma once

#include <map>

#include "labs/construct.hpp"
#include "labs/pq.hpp"
#include "labs/ranksum.hpp"
#include "labs/saw.hpp"

namespace labsearch {

struct RunConfig {
    std::vector<int> lengths;        // target lengths (odd or even)
    SawConfig saw;                   // per-length fields (length/seed) are filled in
    PqConfig pq;
    ConstructConfig construct;       // length filled per target
    bool use_construction = true;
    int construction_seeds = 3;      // top construction candidates refined per target
    int refine_top = 6;              // SAW candidates refined per round per length
    int rounds = 0;                  // 0 = run until the time budget expires
    double time_budget_s = 0.0;      // 0 = rounds only
    double saw_share = 0.4;          // fraction of a round's budget spent in Step 1
    double stop_at_merit = 0.0;      // stop once every target reaches this F
    std::uint64_t seed = 1;
    int threads = 1;
    bool deterministic = false;      // forbids wall-clock stops; records wall time as 0
    std::string results_path;
    std::string candidates_path;
    std::string log_path;

    void validate() const;
};

struct ResultRecord {
    Candidate candidate;
    double wall_seconds = 0.0;
    std::string fingerprint;
};

/// Best-seen candidate per target length. Writers race through
/// update_if_better (compare-energy-and-swap); readers may see slightly
/// stale energies via best_energy.
class BestStore {
public:
    explicit BestStore(const std::vector<int>& lengths);

    bool update_if_better(const Candidate& c, double wall_seconds);
    bool tracked(int length) const { return records_.count(length) > 0; }
    Energy best_energy(int length) const;
    std::map<int, ResultRecord> snapshot() const;

private:
    mutable std::mutex mu_;
    std::map<int, std::optional<ResultRecord>> records_;
};

struct PipelineResult {
    std::map<int, ResultRecord> best;   // per target length
    PoolStats saw_stats;                // accumulated
    long long refine_calls = 0;
    long long candidates = 0;
    double wall_seconds = 0.0;
    std::string fingerprint;
};

std::string config_fingerprint(const RunConfig& config);

/// Step 1 pool -> sieve -> Step 2 refinement -> length operators for the
/// even/adjacent targets, rounds repeating until the budget or target merit
/// is hit. Persists candidate and result records when paths are configured.
PipelineResult run_pipeline(const RunConfig& config);

struct VerifyIssue {
    int line;
    std::string what;
};

struct VerifyReport {
    long long records_checked = 0;
    std::vector<VerifyIssue> mismatches;  // decoded but inconsistent
    std::vector<VerifyIssue> malformed;   // unparseable lines
    bool clean() const { return mismatches.empty() && malformed.empty(); }
};

/// Re-derives E and F from each record's hex payload and flags any
/// disagreement with the stored fields. saw-origin records must additionally
/// be skew-symmetric with all odd-lag correlations zero.
VerifyReport verify_records(const std::string& path);

struct ExperimentConfig {
    int length = 0;
    int runs = 30;
    SawConfig saw;        // equal budget for both arms (restart-bounded)
    PqConfig pq;          // applied to arm B only
    int refine_top = 4;   // candidates refined per run in arm B
    std::uint64_t seed = 1;
    bool paired_seeds = false;  // arm B reuses arm A's per-run seeds
};

struct ExperimentResult {
    std::vector<Energy> saw_only;   // best energy per run, arm A
    std::vector<Energy> dual_step;  // best energy per run, arm B
    double median_saw = 0.0;
    double median_dual = 0.0;
    RankSumResult test;
};

/// The two-arm comparison: arm A runs the walk pool alone, arm B adds
/// priority-queue refinement of the sieved candidates under the same walk
/// budget; a two-sided rank-sum test compares the 2 x runs best energies.
ExperimentResult experiment_compare(const ExperimentConfig& config);

std::string experiment_csv(const ExperimentResult& result);

} // namespace labsearch
