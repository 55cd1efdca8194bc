#pragma once

#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "labs/sequence.hpp"

namespace labsearch {

enum class Origin { saw, op, rotation, construction, dfs };

std::string_view origin_name(Origin o);
std::optional<Origin> origin_from_name(std::string_view name);

/// A sequence plus its (verified) energy and provenance; the unit that flows
/// from the walk stage into the refinement stage.
struct Candidate {
    BinarySequence seq;
    Energy energy;
    Origin origin;
    std::vector<Sign> prefix;  // partition prefix for saw candidates, else empty

    double merit() const { return merit_factor(seq.length(), energy); }
    std::uint64_t hash() const { return seq.canonical_hash(0); }
};

Candidate make_candidate(BinarySequence seq, Origin origin, std::vector<Sign> prefix = {});

/// One record per line: L <tab> E <tab> F <tab> hex <tab> origin.
/// Extra trailing fields are permitted (result files append wall time and a
/// config fingerprint).
std::string format_record(const Candidate& c);

struct ParsedRecord {
    int length = 0;
    Energy energy = 0;
    double merit = 0.0;
    std::string hex;
    std::string origin;
    std::vector<std::string> extra;
};

/// Parses one record line; returns std::nullopt and fills `error` on
/// malformed input.
std::optional<ParsedRecord> parse_record_line(const std::string& line, std::string& error);

/// Reads a record file into candidates, skipping (and reporting) malformed
/// lines and records whose stored energy disagrees with the sequence.
std::vector<Candidate> read_candidate_file(const std::string& path,
                                           std::vector<std::string>* errors = nullptr);

class CandidateSink {
public:
    virtual ~CandidateSink() = default;
    virtual void emit(const Candidate& c) = 0;
};

class CollectingSink final : public CandidateSink {
public:
    void emit(const Candidate& c) override {
        std::lock_guard<std::mutex> lock(mu_);
        items_.push_back(c);
    }
    std::vector<Candidate> take() {
        std::lock_guard<std::mutex> lock(mu_);
        return std::move(items_);
    }
    std::size_t size() const {
        std::lock_guard<std::mutex> lock(mu_);
        return items_.size();
    }

private:
    mutable std::mutex mu_;
    std::vector<Candidate> items_;
};

/// Drops repeat emissions of the same sequence (by canonical 64-bit hash)
/// before forwarding to the wrapped sink.
class DedupSink final : public CandidateSink {
public:
    explicit DedupSink(CandidateSink& inner) : inner_(inner) {}
    void emit(const Candidate& c) override {
        {
            std::lock_guard<std::mutex> lock(mu_);
            if (!seen_.insert(c.hash()).second) return;
        }
        inner_.emit(c);
    }

private:
    std::mutex mu_;
    std::unordered_set<std::uint64_t> seen_;
    CandidateSink& inner_;
};

} // namespace labsearch
