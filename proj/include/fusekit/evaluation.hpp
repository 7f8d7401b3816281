#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "fusekit/fusion_core.hpp"
#include "fusekit/trec_io.hpp"

namespace fusekit {

struct TopicEval {
    std::string topic_id;
    double average_precision = 0.0;
    double bpref = 0.0;
    int num_rel = 0;
    int num_judged_nonrel = 0;
    int num_rel_retrieved = 0;
};

struct EvalSummary {
    std::vector<TopicEval> per_topic;
    double map_score = 0.0;
    double bpref_score = 0.0;
};

/// Average precision over the first `depth` entries. Unjudged documents
/// count as nonrelevant; relevant documents that are not retrieved
/// contribute zero precision. R is the topic's total judged-relevant
/// count in the qrels.
double average_precision(const std::vector<std::string>& ranked, const Qrels& qrels,
                         const std::string& topic, int depth);

/// bpref with the min(R, N) denominator: each retrieved relevant document
/// contributes 1 - min(#judged-nonrelevant above it, min(R, N)) / min(R, N),
/// averaged over R. Unjudged documents are ignored entirely; when N = 0
/// every retrieved relevant contributes 1.
double bpref(const std::vector<std::string>& ranked, const Qrels& qrels,
             const std::string& topic, int depth);

/// Per-topic AP and bpref plus means over topics with at least one
/// relevant document. Topics without relevant documents are skipped;
/// if none remain the evaluation is empty and an error is raised.
EvalSummary evaluate(const std::map<std::string, FusedList>& fused, const Qrels& qrels,
                     int depth);

/// CSV with header `topic,ap,bpref,num_rel,num_rel_ret` and a trailing
/// summary row `all,<map>,<bpref>,,`.
void write_eval_csv(const EvalSummary& summary, std::ostream& out);

}  // namespace fusekit
