#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fusekit/errors.hpp"

namespace fusekit {

/// One row of a TREC run file, scoped to a topic.
struct RunEntry {
    std::string doc_id;
    int rank = 0;
    double score = 0.0;
};

/// One system's ordered results for a single topic.
struct RankedList {
    std::vector<RunEntry> entries;

    std::size_t size() const { return entries.size(); }
    bool empty() const { return entries.empty(); }
};

/// One parsed topfile: a single system's ranked lists keyed by topic.
struct RunSet {
    std::string tag;
    std::map<std::string, RankedList> lists;
};

/// Relevance judgments. Absent pairs are "unjudged", which is distinct
/// from a judgment of 0 (judged nonrelevant).
class Qrels {
public:
    void add(const std::string& topic, const std::string& doc, int judgment);

    std::optional<int> judgment(const std::string& topic, const std::string& doc) const;
    bool is_relevant(const std::string& topic, const std::string& doc) const;
    bool is_judged_nonrelevant(const std::string& topic, const std::string& doc) const;

    /// Count of judged-relevant documents for a topic.
    int num_relevant(const std::string& topic) const;
    /// Count of judged-nonrelevant documents for a topic.
    int num_judged_nonrelevant(const std::string& topic) const;

    const std::map<std::string, std::map<std::string, int>>& by_topic() const {
        return by_topic_;
    }

private:
    std::map<std::string, std::map<std::string, int>> by_topic_;
};

/// A document with its fused score.
struct ScoredDoc {
    std::string doc_id;
    double score = 0.0;
};

/// Parse a TREC run file: `topic Q0 docid rank score tag`.
/// Lists are re-sorted by (score desc, rank asc, doc_id asc); the rank
/// column in the input is not trusted.
RunSet parse_run(std::istream& in);

/// Parse a qrels file: `topic 0 docid judgment`.
Qrels parse_qrels(std::istream& in);

/// Emit fused lists in TREC run format. Each topic's documents are
/// ordered by (score desc, doc_id asc); ranks are re-assigned 1..N and
/// scores rendered with 6 decimals.
void write_run(const std::map<std::string, std::vector<ScoredDoc>>& fused,
               const std::string& tag, std::ostream& out);

}  // namespace fusekit
