#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "fusekit/trec_io.hpp"

namespace fusekit {

enum class Variant { All, Judged };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& s);

/// Trained segment-probability model for one input system.
struct ProbabilityProfile {
    std::string model_tag;
    int x = 0;
    std::vector<double> probs;  // probs[k-1] = P(relevant | returned in segment k)
    Variant variant = Variant::All;
    std::vector<std::string> trained_on;
};

/// Fused result list for one topic, ordered by (score desc, doc_id asc).
struct FusedList {
    std::string topic_id;
    std::vector<ScoredDoc> entries;
};

/// Segment index for a 1-based position in a list of `list_length`
/// documents divided into `x` segments: the smallest k with
/// position <= ceil(k * list_length / x). Segments are contiguous and
/// their sizes differ by at most one when list_length >= x.
int segment_of(int position, int list_length, int x);

/// Train one system's segment probabilities over the given topics.
/// Variant All counts unjudged documents as nonrelevant; variant Judged
/// excludes them from the denominator. A topic missing from the run, an
/// empty segment, or a segment with no judged documents contributes 0
/// for that topic while the topic still counts toward the mean.
ProbabilityProfile train_profile(const RunSet& run, const Qrels& qrels,
                                 const std::vector<std::string>& topics, int x,
                                 Variant variant);

/// probFuse score: S_d = sum over models of P(d's segment | model) / segment.
/// Models that did not return d contribute 0.
FusedList score_probfuse(const std::map<std::string, RankedList>& results,
                         const std::map<std::string, ProbabilityProfile>& profiles,
                         const std::string& topic_id);

/// Standard normalisation: (s - min) / (max - min) over the observed
/// scores of this list. When all scores are equal, every document maps
/// to 1.0.
std::unordered_map<std::string, double> normalize_scores(const RankedList& list);

FusedList combsum(const std::map<std::string, RankedList>& results,
                  const std::string& topic_id);

/// CombMNZ: sum of normalized scores times the number of systems giving
/// the document a strictly positive normalized score.
FusedList combmnz(const std::map<std::string, RankedList>& results,
                  const std::string& topic_id);

/// One profile per line: `model_tag variant x p1 ... px`, probabilities
/// at 10 significant digits.
void write_profiles(const std::vector<ProbabilityProfile>& profiles, std::ostream& out);
std::vector<ProbabilityProfile> parse_profiles(std::istream& in);

}  // namespace fusekit
