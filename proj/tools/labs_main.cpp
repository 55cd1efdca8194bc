// labs: search for long binary sequences with high merit factors.
//
// Subcommands: solve (two-step pipeline), saw (walk stage only), refine
// (priority-queue stage on a candidate file), construct (rotated-appended
// Legendre seeds), oracle (exhaustive optima), verify (record checking),
// experiment (walks-only vs dual-step comparison).

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include "labs/hex_codec.hpp"
#include "labs/oracle.hpp"
#include "labs/pipeline.hpp"

namespace {

int default_threads() {
    if (const char* env = std::getenv("LABS_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

class FileSink final : public labsearch::CandidateSink {
public:
    explicit FileSink(const std::string& path) : out_(path) {
        if (!out_) throw std::runtime_error("cannot open output file: " + path);
    }
    void emit(const labsearch::Candidate& c) override {
        std::lock_guard<std::mutex> lock(mu_);
        out_ << labsearch::format_record(c) << '\n';
    }

private:
    std::mutex mu_;
    std::ofstream out_;
};

void print_record(const labsearch::Candidate& c) {
    std::cout << "L=" << c.seq.length() << "  E=" << c.energy;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", c.merit());
    std::cout << "  F=" << buf << "  hex=" << labsearch::hex_encode(c.seq) << "  origin="
              << labsearch::origin_name(c.origin) << '\n';
}

void add_saw_options(CLI::App* cmd, labsearch::SawConfig& saw) {
    cmd->add_option("--walkers", saw.walkers, "parallel walkers (restriction classes)");
    cmd->add_option("--p", saw.prefix_len, "partition prefix length (default: log2(walkers)+1)");
    cmd->add_option("--ti", saw.max_iterations, "walk iteration cap T_i (overrides --ti-mult)");
    cmd->add_option("--ti-mult", saw.ti_multiplier, "T_i = mult*(L+1)/2");
    cmd->add_option("--el", saw.energy_threshold, "candidate sieve threshold E_l");
    cmd->add_option("--target-f", saw.target_merit, "sieve via merit: E_l = floor(L^2/(2F))");
    cmd->add_option("--restarts", saw.max_restarts, "walks per walker (0 = unlimited)");
    cmd->add_option("--bloom-fpr", saw.bloom_fpr, "Bloom false-positive target");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"low-autocorrelation binary sequence search"};
    app.require_subcommand(1);

    // ---------- solve ----------
    labsearch::RunConfig run;
    run.threads = default_threads();
    auto* solve = app.add_subcommand("solve", "full two-step pipeline");
    solve->add_option("--length,-L", run.lengths, "target length(s)")->required();
    add_saw_options(solve, run.saw);
    solve->add_option("--tu", run.pq.max_stale_pivots, "refine stale-pivot cap T_u (0 = 2L)");
    solve->add_option("--tr", run.pq.max_rotation, "max rotation offset T_r");
    solve->add_option("--capacity", run.pq.queue_capacity, "frontier capacity");
    solve->add_option("--seconds", run.time_budget_s, "wall-clock budget");
    solve->add_option("--rounds", run.rounds, "pipeline rounds (0 = budget-driven)");
    solve->add_option("--refine-top", run.refine_top, "walk candidates refined per round");
    solve->add_option("--construction-seeds", run.construction_seeds,
                      "construction candidates refined per target");
    solve->add_flag("!--no-construct", run.use_construction, "disable construction seeding");
    solve->add_option("--stop-at-merit", run.stop_at_merit, "stop once every target reaches F");
    solve->add_option("--seed", run.seed, "RNG seed");
    solve->add_option("--threads", run.threads, "worker threads");
    solve->add_flag("--deterministic", run.deterministic,
                    "single order of work, wall time recorded as 0");
    solve->add_option("--out", run.results_path, "result records (TSV)");
    solve->add_option("--candidates", run.candidates_path, "candidate records (TSV)");
    solve->add_option("--log", run.log_path, "refinement improvement log (CSV)");

    // ---------- saw ----------
    labsearch::SawConfig saw;
    saw.threads = default_threads();
    std::string saw_out;
    auto* saw_cmd = app.add_subcommand("saw", "walk stage only");
    saw_cmd->add_option("--length,-L", saw.length, "odd target length")->required();
    add_saw_options(saw_cmd, saw);
    saw_cmd->add_option("--seconds", saw.time_budget_s, "wall-clock budget");
    saw_cmd->add_option("--quota", saw.candidate_quota, "stop after this many emissions");
    saw_cmd->add_option("--stop-at-energy", saw.stop_at_energy, "stop once a walk reaches E");
    saw_cmd->add_option("--seed", saw.seed, "RNG seed");
    saw_cmd->add_option("--threads", saw.threads, "worker threads");
    saw_cmd->add_option("--out", saw_out, "candidate records file (TSV)");

    // ---------- refine ----------
    labsearch::PqConfig pq;
    std::string refine_in, refine_out, refine_log;
    std::vector<int> refine_targets;
    int refine_limit = 0;
    int refine_threads = default_threads();
    auto* refine_cmd = app.add_subcommand("refine", "priority-queue stage on a candidate file");
    refine_cmd->add_option("--in", refine_in, "candidate records (TSV)")->required();
    refine_cmd->add_option("--out", refine_out, "improved records (TSV)");
    refine_cmd->add_option("--log", refine_log, "improvement log (CSV)");
    refine_cmd->add_option("--tu", pq.max_stale_pivots, "stale-pivot cap T_u (0 = 2L)");
    refine_cmd->add_option("--tr", pq.max_rotation, "max rotation offset T_r");
    refine_cmd->add_option("--capacity", pq.queue_capacity, "frontier capacity");
    refine_cmd->add_option("--deadline", pq.deadline_s, "per-candidate wall-clock cap");
    refine_cmd->add_option("--targets", refine_targets,
                           "record best per these lengths (default: input lengths)");
    refine_cmd->add_option("--top", refine_limit, "refine only the N best candidates");
    refine_cmd->add_option("--threads", refine_threads, "worker threads");

    // ---------- construct ----------
    labsearch::ConstructConfig cons;
    std::string cons_emit;
    int cons_top = 5;
    auto* cons_cmd = app.add_subcommand("construct", "rotated-appended Legendre sequences");
    cons_cmd->add_option("--length,-L", cons.length, "target length")->required();
    cons_cmd->add_option("--grid", cons.grid_steps,
                         "rotation grid points per prime (0 = every integer)");
    cons_cmd->add_option("--emit-candidates", cons_emit, "write all grid points (TSV)");
    cons_cmd->add_option("--top", cons_top, "print the N best");
    cons_cmd->add_option("--r-lo", cons.r_lo, "rotation fraction low");
    cons_cmd->add_option("--r-hi", cons.r_hi, "rotation fraction high");
    cons_cmd->add_option("--t-lo", cons.t_lo, "append fraction low");
    cons_cmd->add_option("--t-hi", cons.t_hi, "append fraction high");
    bool no_offset = false;
    cons_cmd->add_flag("--no-half-offset", no_offset, "plain quarter rotation family");
    bool zero_minus = false;
    cons_cmd->add_flag("--zero-minus", zero_minus, "use -1 at Legendre position 0");

    // ---------- oracle ----------
    int oracle_length = 0;
    bool oracle_skew = false;
    auto* oracle_cmd = app.add_subcommand("oracle", "exhaustive optimum (small L)");
    oracle_cmd->add_option("--length,-L", oracle_length, "length")->required();
    oracle_cmd->add_flag("--skew", oracle_skew, "restrict to skew-symmetric sequences");

    // ---------- verify ----------
    std::vector<std::string> verify_files;
    auto* verify_cmd = app.add_subcommand("verify", "recheck record files");
    verify_cmd->add_option("files", verify_files, "record files (TSV)")->required();

    // ---------- experiment ----------
    labsearch::ExperimentConfig exp;
    std::string exp_out;
    auto* exp_cmd = app.add_subcommand("experiment", "walks-only vs dual-step comparison");
    exp_cmd->add_option("--length,-L", exp.length, "odd length")->required();
    exp_cmd->add_option("--runs", exp.runs, "independent runs per arm");
    add_saw_options(exp_cmd, exp.saw);
    exp_cmd->add_option("--tu", exp.pq.max_stale_pivots, "refine stale-pivot cap T_u");
    exp_cmd->add_option("--tr", exp.pq.max_rotation, "max rotation offset T_r");
    exp_cmd->add_option("--refine-top", exp.refine_top, "candidates refined per run");
    exp_cmd->add_option("--seed", exp.seed, "RNG seed");
    exp_cmd->add_option("--out", exp_out, "per-run energies (CSV)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) {
            const auto result = labsearch::run_pipeline(run);
            for (const auto& [l, rec] : result.best) print_record(rec.candidate);
            std::cerr << "walks=" << result.saw_stats.walks
                      << " candidates=" << result.candidates
                      << " refine_calls=" << result.refine_calls << " wall="
                      << result.wall_seconds << "s fingerprint=" << result.fingerprint << '\n';
            return 0;
        }

        if (saw_cmd->parsed()) {
            labsearch::CollectingSink collect;
            std::unique_ptr<FileSink> file;
            labsearch::CandidateSink* sink = &collect;
            if (!saw_out.empty()) {
                file = std::make_unique<FileSink>(saw_out);
                sink = file.get();
            }
            const auto stats = labsearch::run_saw_pool(saw, *sink);
            std::cerr << "walks=" << stats.walks << " iterations=" << stats.iterations
                      << " emitted=" << stats.emitted << " bestE=" << stats.best_energy
                      << " wall=" << stats.wall_seconds << "s\n";
            if (saw_out.empty())
                for (const auto& c : collect.take()) std::cout << labsearch::format_record(c) << '\n';
            return 0;
        }

        if (refine_cmd->parsed()) {
            std::vector<std::string> errors;
            auto cands = labsearch::read_candidate_file(refine_in, &errors);
            for (const auto& e : errors) std::cerr << "warning: " << refine_in << ": " << e << '\n';
            if (cands.empty()) {
                std::cerr << "no usable candidates in " << refine_in << '\n';
                return 1;
            }
            std::stable_sort(cands.begin(), cands.end(),
                             [](const labsearch::Candidate& a, const labsearch::Candidate& b) {
                                 return a.energy < b.energy;
                             });
            if (refine_limit > 0 && static_cast<std::size_t>(refine_limit) < cands.size())
                cands.erase(cands.begin() + refine_limit, cands.end());

            std::set<int> targets(refine_targets.begin(), refine_targets.end());
            if (targets.empty())
                for (const auto& c : cands) targets.insert(c.seq.length());

            std::map<int, labsearch::Candidate> best;
            std::ofstream log;
            if (!refine_log.empty()) {
                log.open(refine_log);
                log << "candidate,pivot,best_energy\n";
            }
            for (std::size_t i = 0; i < cands.size(); ++i) {
                auto per_length = labsearch::refine_with_operators(cands[i], pq, targets);
                for (auto& [l, c] : per_length) {
                    auto it = best.find(l);
                    if (it == best.end() || c.energy < it->second.energy)
                        best.insert_or_assign(l, c);
                }
                if (log.is_open()) {
                    const auto r = labsearch::refine(cands[i], pq);
                    for (const auto& [pivot, e] : r.improvement_log)
                        log << i << ',' << pivot << ',' << e << '\n';
                }
            }
            std::unique_ptr<std::ofstream> out;
            if (!refine_out.empty()) out = std::make_unique<std::ofstream>(refine_out);
            for (const auto& [l, c] : best) {
                print_record(c);
                if (out) *out << labsearch::format_record(c) << '\n';
            }
            return 0;
        }

        if (cons_cmd->parsed()) {
            cons.half_period_offset = !no_offset;
            cons.zero_element = zero_minus ? labsearch::Sign{-1} : labsearch::Sign{1};
            const auto grid = labsearch::seed_grid(cons);
            if (!grid.diagnostic.empty()) {
                std::cerr << grid.diagnostic << '\n';
                return 1;
            }
            std::cerr << "primes:";
            for (int q : grid.primes) std::cerr << ' ' << q;
            std::cerr << "  grid points: " << grid.candidates.size() << '\n';
            for (std::size_t i = 0; i < grid.candidates.size() && i < static_cast<std::size_t>(cons_top); ++i)
                print_record(grid.candidates[i]);
            if (!cons_emit.empty()) {
                std::ofstream out(cons_emit);
                for (const auto& c : grid.candidates) out << labsearch::format_record(c) << '\n';
            }
            return 0;
        }

        if (oracle_cmd->parsed()) {
            const auto r = oracle_skew ? labsearch::oracle_skew_exhaustive(oracle_length)
                                       : labsearch::oracle_exhaustive(oracle_length);
            print_record(labsearch::make_candidate(r.sequence,
                                              oracle_skew ? labsearch::Origin::saw : labsearch::Origin::dfs));
            return 0;
        }

        if (verify_cmd->parsed()) {
            bool all_clean = true;
            for (const auto& path : verify_files) {
                const auto report = labsearch::verify_records(path);
                std::cout << path << ": " << report.records_checked << " records, "
                          << report.mismatches.size() << " mismatches, "
                          << report.malformed.size() << " malformed\n";
                for (const auto& m : report.malformed)
                    std::cout << "  malformed line " << m.line << ": " << m.what << '\n';
                for (const auto& m : report.mismatches)
                    std::cout << "  mismatch line " << m.line << ": " << m.what << '\n';
                all_clean = all_clean && report.clean();
            }
            return all_clean ? 0 : 1;
        }

        if (exp_cmd->parsed()) {
            const auto result = labsearch::experiment_compare(exp);
            std::cout << "arm A (saw only)  median best E = " << result.median_saw << '\n'
                      << "arm B (dual step) median best E = " << result.median_dual << '\n'
                      << "rank-sum z = " << result.test.z << ", two-sided p = "
                      << result.test.p_value << '\n';
            if (!exp_out.empty()) {
                std::ofstream out(exp_out);
                out << labsearch::experiment_csv(result);
            }
            return 0;
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 1;
    }
    return 0;
}
