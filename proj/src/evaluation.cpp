#include "fusekit/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <unordered_set>

namespace fusekit {

namespace {

// First `depth` entries with duplicates removed, keeping the first
// occurrence of each document.
std::vector<std::string> truncate_dedup(const std::vector<std::string>& ranked,
                                        int depth) {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (const auto& doc : ranked) {
        if (static_cast<int>(out.size()) >= depth) break;
        if (seen.insert(doc).second) out.push_back(doc);
    }
    return out;
}

}  // namespace

double average_precision(const std::vector<std::string>& ranked, const Qrels& qrels,
                         const std::string& topic, int depth) {
    if (depth < 1) throw ConfigError("evaluation depth must be >= 1");
    int total_rel = qrels.num_relevant(topic);
    if (total_rel == 0) throw ConfigError("topic " + topic + " has no relevant documents");
    auto docs = truncate_dedup(ranked, depth);
    double sum = 0.0;
    int rel_seen = 0;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        if (qrels.is_relevant(topic, docs[i])) {
            ++rel_seen;
            sum += static_cast<double>(rel_seen) / static_cast<double>(i + 1);
        }
    }
    return sum / total_rel;
}

double bpref(const std::vector<std::string>& ranked, const Qrels& qrels,
             const std::string& topic, int depth) {
    if (depth < 1) throw ConfigError("evaluation depth must be >= 1");
    int total_rel = qrels.num_relevant(topic);
    if (total_rel == 0) throw ConfigError("topic " + topic + " has no relevant documents");
    int total_nonrel = qrels.num_judged_nonrelevant(topic);
    int cap = std::min(total_rel, total_nonrel);
    auto docs = truncate_dedup(ranked, depth);
    double sum = 0.0;
    int nonrel_above = 0;
    for (const auto& doc : docs) {
        if (qrels.is_relevant(topic, doc)) {
            if (cap == 0)
                sum += 1.0;
            else
                sum += 1.0 - static_cast<double>(std::min(nonrel_above, cap)) / cap;
        } else if (qrels.is_judged_nonrelevant(topic, doc)) {
            ++nonrel_above;
        }
        // unjudged documents are ignored entirely
    }
    return sum / total_rel;
}

EvalSummary evaluate(const std::map<std::string, FusedList>& fused, const Qrels& qrels,
                     int depth) {
    if (depth < 1) throw ConfigError("evaluation depth must be >= 1");
    EvalSummary summary;
    double ap_sum = 0.0, bpref_sum = 0.0;
    for (const auto& [topic, list] : fused) {
        if (qrels.num_relevant(topic) == 0) continue;  // skipped, not counted
        std::vector<std::string> ranked;
        ranked.reserve(list.entries.size());
        for (const auto& e : list.entries) ranked.push_back(e.doc_id);
        TopicEval te;
        te.topic_id = topic;
        te.average_precision = average_precision(ranked, qrels, topic, depth);
        te.bpref = bpref(ranked, qrels, topic, depth);
        te.num_rel = qrels.num_relevant(topic);
        te.num_judged_nonrel = qrels.num_judged_nonrelevant(topic);
        auto docs = truncate_dedup(ranked, depth);
        for (const auto& doc : docs)
            if (qrels.is_relevant(topic, doc)) ++te.num_rel_retrieved;
        ap_sum += te.average_precision;
        bpref_sum += te.bpref;
        summary.per_topic.push_back(std::move(te));
    }
    if (summary.per_topic.empty())
        throw DataError("empty evaluation: no topic has relevant documents");
    summary.map_score = ap_sum / summary.per_topic.size();
    summary.bpref_score = bpref_sum / summary.per_topic.size();
    return summary;
}

void write_eval_csv(const EvalSummary& summary, std::ostream& out) {
    char buf[96];
    out << "topic,ap,bpref,num_rel,num_rel_ret\n";
    for (const auto& te : summary.per_topic) {
        std::snprintf(buf, sizeof buf, "%.6f,%.6f", te.average_precision, te.bpref);
        out << te.topic_id << ',' << buf << ',' << te.num_rel << ','
            << te.num_rel_retrieved << '\n';
    }
    std::snprintf(buf, sizeof buf, "%.6f,%.6f", summary.map_score, summary.bpref_score);
    out << "all," << buf << ",,\n";
    if (!out) throw DataError("write failure while emitting eval CSV");
}

}  // namespace fusekit
