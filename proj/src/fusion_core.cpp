#include "fusekit/fusion_core.hpp"

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace fusekit {

std::string to_string(Variant v) {
    return v == Variant::All ? "all" : "judged";
}

Variant variant_from_string(const std::string& s) {
    if (s == "all") return Variant::All;
    if (s == "judged") return Variant::Judged;
    throw ConfigError("unknown variant '" + s + "' (expected all|judged)");
}

int segment_of(int position, int list_length, int x) {
    if (position < 1 || position > list_length)
        throw ConfigError("position " + std::to_string(position) +
                          " out of range for list length " + std::to_string(list_length));
    if (x < 1) throw ConfigError("segment count must be >= 1");
    // smallest k with position <= ceil(k * list_length / x)
    return static_cast<int>(static_cast<std::int64_t>(position - 1) * x / list_length) + 1;
}

ProbabilityProfile train_profile(const RunSet& run, const Qrels& qrels,
                                 const std::vector<std::string>& topics, int x,
                                 Variant variant) {
    if (x < 1) throw ConfigError("segment count must be >= 1");
    if (topics.empty()) throw ConfigError("training topic list is empty");

    ProbabilityProfile profile;
    profile.model_tag = run.tag;
    profile.x = x;
    profile.variant = variant;
    profile.trained_on = topics;
    profile.probs.assign(x, 0.0);

    std::vector<int> rel(x), nonrel(x), total(x);
    for (const auto& topic : topics) {
        auto it = run.lists.find(topic);
        if (it == run.lists.end()) continue;  // returned-nothing topic: contributes 0
        const RankedList& list = it->second;
        std::fill(rel.begin(), rel.end(), 0);
        std::fill(nonrel.begin(), nonrel.end(), 0);
        std::fill(total.begin(), total.end(), 0);
        int length = static_cast<int>(list.size());
        for (int p = 1; p <= length; ++p) {
            int k = segment_of(p, length, x);
            const std::string& doc = list.entries[p - 1].doc_id;
            ++total[k - 1];
            if (qrels.is_relevant(topic, doc))
                ++rel[k - 1];
            else if (qrels.is_judged_nonrelevant(topic, doc))
                ++nonrel[k - 1];
        }
        for (int k = 0; k < x; ++k) {
            int denom = variant == Variant::All ? total[k] : rel[k] + nonrel[k];
            if (denom > 0) profile.probs[k] += static_cast<double>(rel[k]) / denom;
        }
    }
    double q = static_cast<double>(topics.size());
    for (double& p : profile.probs) p /= q;
    return profile;
}

namespace {

FusedList to_fused_list(std::unordered_map<std::string, double>&& scores,
                        const std::string& topic_id) {
    FusedList fused;
    fused.topic_id = topic_id;
    fused.entries.reserve(scores.size());
    for (auto& [doc, score] : scores) fused.entries.push_back(ScoredDoc{doc, score});
    // (score desc, doc_id asc) is a total order, so the hash-map
    // iteration order cannot leak into the result
    std::sort(fused.entries.begin(), fused.entries.end(),
              [](const ScoredDoc& a, const ScoredDoc& b) {
                  if (a.score != b.score) return a.score > b.score;
                  return a.doc_id < b.doc_id;
              });
    return fused;
}

}  // namespace

FusedList score_probfuse(const std::map<std::string, RankedList>& results,
                         const std::map<std::string, ProbabilityProfile>& profiles,
                         const std::string& topic_id) {
    std::unordered_map<std::string, double> scores;
    for (const auto& [tag, list] : results) {
        auto pit = profiles.find(tag);
        if (pit == profiles.end())
            throw ConfigError("no probability profile for model '" + tag + "'");
        const ProbabilityProfile& profile = pit->second;
        int length = static_cast<int>(list.size());
        for (int p = 1; p <= length; ++p) {
            int k = segment_of(p, length, profile.x);
            scores[list.entries[p - 1].doc_id] += profile.probs[k - 1] / k;
        }
    }
    return to_fused_list(std::move(scores), topic_id);
}

std::unordered_map<std::string, double> normalize_scores(const RankedList& list) {
    if (list.empty()) throw ConfigError("cannot normalize an empty result list");
    double min_sim = list.entries.front().score;
    double max_sim = min_sim;
    for (const auto& e : list.entries) {
        min_sim = std::min(min_sim, e.score);
        max_sim = std::max(max_sim, e.score);
    }
    std::unordered_map<std::string, double> norm;
    norm.reserve(list.size());
    for (const auto& e : list.entries)
        norm[e.doc_id] =
            max_sim == min_sim ? 1.0 : (e.score - min_sim) / (max_sim - min_sim);
    return norm;
}

namespace {

FusedList comb_fuse(const std::map<std::string, RankedList>& results,
                    const std::string& topic_id, bool mnz) {
    std::unordered_map<std::string, std::pair<double, int>> acc;  // sum, #nonzero
    for (const auto& [tag, list] : results) {
        if (list.empty()) continue;
        for (const auto& [doc, n] : normalize_scores(list)) {
            auto& [sum, nonzero] = acc[doc];
            sum += n;
            if (n > 0.0) ++nonzero;
        }
    }
    std::unordered_map<std::string, double> scores;
    scores.reserve(acc.size());
    for (auto& [doc, sn] : acc) scores[doc] = mnz ? sn.first * sn.second : sn.first;
    return to_fused_list(std::move(scores), topic_id);
}

}  // namespace

FusedList combsum(const std::map<std::string, RankedList>& results,
                  const std::string& topic_id) {
    return comb_fuse(results, topic_id, false);
}

FusedList combmnz(const std::map<std::string, RankedList>& results,
                  const std::string& topic_id) {
    return comb_fuse(results, topic_id, true);
}

void write_profiles(const std::vector<ProbabilityProfile>& profiles, std::ostream& out) {
    char buf[48];
    for (const auto& profile : profiles) {
        out << profile.model_tag << ' ' << to_string(profile.variant) << ' '
            << profile.x;
        for (double p : profile.probs) {
            std::snprintf(buf, sizeof buf, "%.10g", p);
            out << ' ' << buf;
        }
        out << '\n';
    }
    if (!out) throw DataError("write failure while emitting profiles");
}

std::vector<ProbabilityProfile> parse_profiles(std::istream& in) {
    std::vector<ProbabilityProfile> profiles;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream iss(line);
        ProbabilityProfile profile;
        std::string variant;
        if (!(iss >> profile.model_tag >> variant >> profile.x)) {
            if (profile.model_tag.empty()) continue;  // blank line
            throw ParseError("malformed profile header", line_no);
        }
        profile.variant = variant_from_string(variant);
        if (profile.x < 1) throw ParseError("segment count must be >= 1", line_no);
        double p;
        while (iss >> p) {
            if (p < 0.0 || p > 1.0)
                throw ParseError("probability out of [0,1]", line_no);
            profile.probs.push_back(p);
        }
        if (static_cast<int>(profile.probs.size()) != profile.x)
            throw ParseError("expected " + std::to_string(profile.x) +
                                 " probabilities, got " +
                                 std::to_string(profile.probs.size()),
                             line_no);
        profiles.push_back(std::move(profile));
    }
    return profiles;
}

}  // namespace fusekit
