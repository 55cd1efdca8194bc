#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "labs/hex_codec.hpp"
#include "labs/oracle.hpp"
#include "labs/pipeline.hpp"

using namespace labsearch;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("/tmp/labs_test_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("exhaustive oracle reproduces known small optima") {
    CHECK(oracle_exhaustive(3).energy == 1);
    CHECK(oracle_exhaustive(5).energy == 2);
    CHECK(oracle_exhaustive(13).energy == 6);
    CHECK(oracle_exhaustive(21).energy == 26);  // frozen from an independent enumeration
    const auto r = oracle_exhaustive(13);
    CHECK(autocorrelation(r.sequence).energy() == 6);
    CHECK_THROWS_AS(oracle_exhaustive(29), std::invalid_argument);
    CHECK_THROWS_AS(oracle_exhaustive(1), std::invalid_argument);
}

TEST_CASE("skew oracle and subset ordering") {
    const auto s5 = oracle_skew_exhaustive(5);
    CHECK(s5.energy == 2);
    CHECK(is_skew_symmetric(s5.sequence));
    CHECK(oracle_skew_exhaustive(21).energy == 26);  // frozen independent values
    CHECK(oracle_skew_exhaustive(31).energy == 79);
    for (int l : {5, 7, 9, 11, 13}) {
        CHECK(oracle_skew_exhaustive(l).energy >= oracle_exhaustive(l).energy);
    }
    CHECK_THROWS_AS(oracle_skew_exhaustive(8), std::invalid_argument);
    CHECK_THROWS_AS(oracle_skew_exhaustive(43), std::invalid_argument);
}

TEST_CASE("record format round trip and parsing") {
    Rng rng(1);
    const auto cand = make_candidate(BinarySequence::random(31, rng), Origin::saw);
    const std::string line = format_record(cand);
    std::string err;
    const auto parsed = parse_record_line(line, err);
    REQUIRE(parsed.has_value());
    CHECK(parsed->length == 31);
    CHECK(parsed->energy == cand.energy);
    CHECK(parsed->origin == "saw");
    CHECK(hex_decode(parsed->hex, 31) == cand.seq);

    CHECK_FALSE(parse_record_line("only\ttwo", err).has_value());
    CHECK_FALSE(parse_record_line("a\t1\t1.0\tFF\tsaw", err).has_value());
}

TEST_CASE("verify accepts pipeline-style records and flags corruption") {
    TempFile f("verify.tsv");
    Rng rng(2);
    const auto good = make_candidate(expand_skew(SkewHalf::random(31, rng)), Origin::saw);
    const auto good2 = make_candidate(BinarySequence::random(20, rng), Origin::dfs);
    {
        std::ofstream out(f.path);
        out << format_record(good) << "\textra\tfields\n";
        out << format_record(good2) << '\n';
    }
    const auto clean = verify_records(f.path);
    CHECK(clean.records_checked == 2);
    CHECK(clean.clean());

    // tamper: flip a hex digit, break F, break a line, non-skew saw record
    const auto bad_f = make_candidate(BinarySequence::random(16, rng), Origin::dfs);
    auto nonskew = BinarySequence::random(31, rng);
    if (is_skew_symmetric(nonskew)) nonskew.flip(1);
    {
        std::string rec = format_record(good);
        const auto tab = rec.find('\t', rec.find('\t', rec.find('\t') + 1) + 1);
        rec[tab + 1] = rec[tab + 1] == '0' ? '1' : '0';
        std::ofstream out(f.path);
        out << rec << '\n';
        out << "31\t100\t4.8050\tnot-a-record\n";
        out << format_record(bad_f).substr(0, format_record(bad_f).find('\t', 4)) << "\t9.9999\t"
            << hex_encode(bad_f.seq) << "\tdfs\n";
        out << format_record(make_candidate(nonskew, Origin::saw)) << '\n';
    }
    const auto report = verify_records(f.path);
    CHECK(report.malformed.size() == 1);
    CHECK(report.mismatches.size() >= 2);
}

TEST_CASE("pipeline solves a single odd length without construction") {
    RunConfig cfg;
    cfg.lengths = {21};
    cfg.use_construction = false;
    cfg.rounds = 2;
    cfg.saw.walkers = 4;
    cfg.saw.max_restarts = 6;
    cfg.saw.target_merit = 3.0;
    cfg.pq.max_stale_pivots = 60;
    cfg.seed = 11;
    cfg.deterministic = true;
    const auto result = run_pipeline(cfg);
    REQUIRE(result.best.count(21) == 1);
    const auto& rec = result.best.at(21);
    CHECK(rec.candidate.seq.length() == 21);
    CHECK(rec.candidate.energy == autocorrelation(rec.candidate.seq).energy());
    CHECK(result.saw_stats.walks > 0);
    CHECK(result.refine_calls > 0);
}

TEST_CASE("even targets are reached through length operators") {
    RunConfig cfg;
    cfg.lengths = {20, 21, 22};
    cfg.use_construction = false;
    cfg.rounds = 1;
    cfg.saw.walkers = 2;
    cfg.saw.max_restarts = 4;
    cfg.saw.target_merit = 3.0;
    cfg.pq.max_stale_pivots = 40;
    cfg.seed = 3;
    cfg.deterministic = true;
    const auto result = run_pipeline(cfg);
    REQUIRE(result.best.count(20) == 1);
    REQUIRE(result.best.count(21) == 1);
    REQUIRE(result.best.count(22) == 1);
    CHECK(result.best.at(20).candidate.seq.length() == 20);
    CHECK(result.best.at(22).candidate.seq.length() == 22);
}

TEST_CASE("deterministic runs write byte-identical files") {
    auto run_once = [](const std::string& tag) {
        RunConfig cfg;
        cfg.lengths = {19};
        cfg.use_construction = false;
        cfg.rounds = 2;
        cfg.saw.walkers = 3;
        cfg.saw.max_restarts = 5;
        cfg.saw.target_merit = 3.0;
        cfg.pq.max_stale_pivots = 50;
        cfg.seed = 77;
        cfg.deterministic = true;
        cfg.results_path = "/tmp/labs_test_det_results_" + tag;
        cfg.candidates_path = "/tmp/labs_test_det_cands_" + tag;
        run_pipeline(cfg);
        return std::pair{slurp(cfg.results_path), slurp(cfg.candidates_path)};
    };
    const auto a = run_once("a");
    const auto b = run_once("b");
    CHECK(a.first == b.first);
    CHECK(a.second == b.second);
    CHECK(!a.first.empty());
    CHECK(!a.second.empty());
    std::remove("/tmp/labs_test_det_results_a");
    std::remove("/tmp/labs_test_det_results_b");
    std::remove("/tmp/labs_test_det_cands_a");
    std::remove("/tmp/labs_test_det_cands_b");
}

TEST_CASE("pipeline results verify clean") {
    TempFile results("pipe_results.tsv");
    TempFile cands("pipe_cands.tsv");
    RunConfig cfg;
    cfg.lengths = {27, 28};
    cfg.use_construction = false;
    cfg.rounds = 1;
    cfg.saw.walkers = 2;
    cfg.saw.max_restarts = 4;
    cfg.saw.target_merit = 3.5;
    cfg.pq.max_stale_pivots = 40;
    cfg.seed = 5;
    cfg.deterministic = true;
    cfg.results_path = results.path;
    cfg.candidates_path = cands.path;
    run_pipeline(cfg);
    CHECK(verify_records(results.path).clean());
    CHECK(verify_records(cands.path).clean());
}

TEST_CASE("pipeline validates configuration before any work") {
    RunConfig cfg;  // no lengths
    CHECK_THROWS_AS(run_pipeline(cfg), std::invalid_argument);
    cfg.lengths = {21};
    CHECK_THROWS_AS(run_pipeline(cfg), std::invalid_argument);  // no stop condition
    cfg.rounds = 1;
    cfg.deterministic = true;
    cfg.time_budget_s = 5;
    CHECK_THROWS_AS(run_pipeline(cfg), std::invalid_argument);  // det + wall clock
}

TEST_CASE("config fingerprints distinguish configurations") {
    RunConfig a;
    a.lengths = {21};
    a.rounds = 1;
    RunConfig b = a;
    CHECK(config_fingerprint(a) == config_fingerprint(b));
    b.seed = a.seed + 1;
    CHECK(config_fingerprint(a) != config_fingerprint(b));
    CHECK(config_fingerprint(a).size() == 16);
}

TEST_CASE("experiment with refinement disabled gives identical arms") {
    ExperimentConfig cfg;
    cfg.length = 21;
    cfg.runs = 6;
    cfg.saw.walkers = 2;
    cfg.saw.max_restarts = 3;
    cfg.saw.target_merit = 3.0;
    cfg.refine_top = 0;      // arm B never refines
    cfg.paired_seeds = true; // and reuses arm A's seeds
    const auto result = experiment_compare(cfg);
    CHECK(result.saw_only == result.dual_step);
    CHECK(result.test.p_value == doctest::Approx(1.0));
    CHECK(result.median_saw == result.median_dual);
}

TEST_CASE("experiment refuses underpowered runs") {
    ExperimentConfig cfg;
    cfg.length = 21;
    cfg.runs = 4;
    CHECK_THROWS_AS(experiment_compare(cfg), std::invalid_argument);
}

TEST_CASE("experiment separates the arms when refinement helps") {
    ExperimentConfig cfg;
    cfg.length = 31;
    cfg.runs = 8;
    cfg.saw.walkers = 2;
    cfg.saw.max_restarts = 2;
    cfg.saw.target_merit = 3.0;
    cfg.pq.max_stale_pivots = 200;
    cfg.refine_top = 3;
    cfg.seed = 17;
    const auto result = experiment_compare(cfg);
    CHECK(result.median_dual <= result.median_saw);
    const auto csv = experiment_csv(result);
    CHECK(csv.find("run,saw_best_energy,dual_best_energy") == 0);
}
