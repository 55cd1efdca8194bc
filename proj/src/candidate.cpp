#include "labs/candidate.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>

#include "labs/hex_codec.hpp"

namespace labsearch {

std::string_view origin_name(Origin o) {
    switch (o) {
        case Origin::saw: return "saw";
        case Origin::op: return "operator";
        case Origin::rotation: return "rotation";
        case Origin::construction: return "construction";
        case Origin::dfs: return "dfs";
    }
    return "unknown";
}

std::optional<Origin> origin_from_name(std::string_view name) {
    if (name == "saw") return Origin::saw;
    if (name == "operator") return Origin::op;
    if (name == "rotation") return Origin::rotation;
    if (name == "construction") return Origin::construction;
    if (name == "dfs") return Origin::dfs;
    return std::nullopt;
}

Candidate make_candidate(BinarySequence seq, Origin origin, std::vector<Sign> prefix) {
    const Energy e = autocorrelation(seq).energy();
    return Candidate{std::move(seq), e, origin, std::move(prefix)};
}

std::string format_record(const Candidate& c) {
    char fbuf[32];
    std::snprintf(fbuf, sizeof fbuf, "%.4f", c.merit());
    std::string line = std::to_string(c.seq.length());
    line += '\t';
    line += std::to_string(c.energy);
    line += '\t';
    line += fbuf;
    line += '\t';
    line += hex_encode(c.seq);
    line += '\t';
    line += origin_name(c.origin);
    return line;
}

namespace {
std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find('\t', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}
} // namespace

std::optional<ParsedRecord> parse_record_line(const std::string& line, std::string& error) {
    const auto fields = split_tabs(line);
    if (fields.size() < 5) {
        error = "expected at least 5 tab-separated fields, got " + std::to_string(fields.size());
        return std::nullopt;
    }
    ParsedRecord r;
    auto [p1, e1] = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), r.length);
    if (e1 != std::errc{} || p1 != fields[0].data() + fields[0].size()) {
        error = "bad length field '" + fields[0] + "'";
        return std::nullopt;
    }
    auto [p2, e2] = std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), r.energy);
    if (e2 != std::errc{} || p2 != fields[1].data() + fields[1].size()) {
        error = "bad energy field '" + fields[1] + "'";
        return std::nullopt;
    }
    try {
        std::size_t used = 0;
        r.merit = std::stod(fields[2], &used);
        if (used != fields[2].size()) throw std::invalid_argument("trailing junk");
    } catch (const std::exception&) {
        error = "bad merit field '" + fields[2] + "'";
        return std::nullopt;
    }
    r.hex = fields[3];
    r.origin = fields[4];
    r.extra.assign(fields.begin() + 5, fields.end());
    return r;
}

std::vector<Candidate> read_candidate_file(const std::string& path,
                                           std::vector<std::string>* errors) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open candidate file: " + path);
    std::vector<Candidate> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::string err;
        const auto rec = parse_record_line(line, err);
        if (!rec) {
            if (errors) errors->push_back("line " + std::to_string(lineno) + ": " + err);
            continue;
        }
        try {
            BinarySequence seq = hex_decode(rec->hex, rec->length);
            const Energy e = autocorrelation(seq).energy();
            if (e != rec->energy) {
                if (errors)
                    errors->push_back("line " + std::to_string(lineno) + ": stored energy " +
                                      std::to_string(rec->energy) + " != recomputed " +
                                      std::to_string(e));
                continue;
            }
            const auto origin = origin_from_name(rec->origin);
            out.push_back(Candidate{std::move(seq), e, origin.value_or(Origin::saw), {}});
        } catch (const std::exception& ex) {
            if (errors) errors->push_back("line " + std::to_string(lineno) + ": " + ex.what());
        }
    }
    return out;
}

} // namespace labsearch
