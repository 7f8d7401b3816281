#include "fusekit/trec_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace fusekit {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream iss(line);
    std::string tok;
    while (iss >> tok) tokens.push_back(tok);
    return tokens;
}

int parse_int(const std::string& s, const char* what, std::size_t line_no) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw ParseError(std::string("non-numeric ") + what + ": '" + s + "'", line_no);
    return value;
}

double parse_double(const std::string& s, const char* what, std::size_t line_no) {
    try {
        std::size_t pos = 0;
        double value = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return value;
    } catch (const std::exception&) {
        throw ParseError(std::string("non-numeric ") + what + ": '" + s + "'", line_no);
    }
}

void sort_ranked_list(RankedList& list) {
    std::stable_sort(list.entries.begin(), list.entries.end(),
                     [](const RunEntry& a, const RunEntry& b) {
                         if (a.score != b.score) return a.score > b.score;
                         if (a.rank != b.rank) return a.rank < b.rank;
                         return a.doc_id < b.doc_id;
                     });
}

}  // namespace

void Qrels::add(const std::string& topic, const std::string& doc, int judgment) {
    by_topic_[topic][doc] = judgment;
}

std::optional<int> Qrels::judgment(const std::string& topic, const std::string& doc) const {
    auto t = by_topic_.find(topic);
    if (t == by_topic_.end()) return std::nullopt;
    auto d = t->second.find(doc);
    if (d == t->second.end()) return std::nullopt;
    return d->second;
}

bool Qrels::is_relevant(const std::string& topic, const std::string& doc) const {
    auto j = judgment(topic, doc);
    return j.has_value() && *j >= 1;
}

bool Qrels::is_judged_nonrelevant(const std::string& topic, const std::string& doc) const {
    auto j = judgment(topic, doc);
    return j.has_value() && *j == 0;
}

int Qrels::num_relevant(const std::string& topic) const {
    auto t = by_topic_.find(topic);
    if (t == by_topic_.end()) return 0;
    int n = 0;
    for (const auto& [doc, j] : t->second)
        if (j >= 1) ++n;
    return n;
}

int Qrels::num_judged_nonrelevant(const std::string& topic) const {
    auto t = by_topic_.find(topic);
    if (t == by_topic_.end()) return 0;
    int n = 0;
    for (const auto& [doc, j] : t->second)
        if (j == 0) ++n;
    return n;
}

RunSet parse_run(std::istream& in) {
    RunSet run;
    std::string line;
    std::size_t line_no = 0;
    bool tag_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        auto tokens = split_ws(line);
        if (tokens.empty()) continue;  // blank lines tolerated
        if (tokens.size() != 6)
            throw ParseError("expected 6 columns, got " + std::to_string(tokens.size()),
                             line_no);
        const std::string& topic = tokens[0];
        const std::string& doc = tokens[2];
        int rank = parse_int(tokens[3], "rank", line_no);
        double score = parse_double(tokens[4], "score", line_no);
        const std::string& tag = tokens[5];
        if (topic.empty() || doc.empty())
            throw ParseError("empty topic or document id", line_no);
        if (!tag_seen) {
            run.tag = tag;
            tag_seen = true;
        } else if (tag != run.tag) {
            throw ParseError("inconsistent run tag '" + tag + "' (expected '" +
                                 run.tag + "')",
                             line_no);
        }
        auto& list = run.lists[topic];
        for (const auto& e : list.entries)
            if (e.doc_id == doc)
                throw ParseError("duplicate document '" + doc + "' in topic " + topic,
                                 line_no);
        list.entries.push_back(RunEntry{doc, rank, score});
    }
    for (auto& [topic, list] : run.lists) sort_ranked_list(list);
    return run;
}

Qrels parse_qrels(std::istream& in) {
    Qrels qrels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto tokens = split_ws(line);
        if (tokens.empty()) continue;
        if (tokens.size() != 4)
            throw ParseError("expected 4 columns, got " + std::to_string(tokens.size()),
                             line_no);
        const std::string& topic = tokens[0];
        const std::string& doc = tokens[2];
        int judgment = parse_int(tokens[3], "judgment", line_no);
        if (judgment < 0)
            throw ParseError("negative judgment", line_no);
        if (qrels.judgment(topic, doc).has_value())
            throw ParseError("duplicate judgment for (" + topic + ", " + doc + ")",
                             line_no);
        qrels.add(topic, doc, judgment);
    }
    return qrels;
}

void write_run(const std::map<std::string, std::vector<ScoredDoc>>& fused,
               const std::string& tag, std::ostream& out) {
    char buf[64];
    for (const auto& [topic, docs] : fused) {
        std::vector<ScoredDoc> ordered = docs;
        std::sort(ordered.begin(), ordered.end(),
                  [](const ScoredDoc& a, const ScoredDoc& b) {
                      if (a.score != b.score) return a.score > b.score;
                      return a.doc_id < b.doc_id;
                  });
        int rank = 0;
        for (const auto& d : ordered) {
            std::snprintf(buf, sizeof buf, "%.6f", d.score);
            out << topic << " Q0 " << d.doc_id << ' ' << ++rank << ' ' << buf << ' '
                << tag << '\n';
        }
    }
    if (!out) throw DataError("write failure while emitting run file");
}

}  // namespace fusekit
