#pragma once

// Shared helpers for building small random fusion instances in tests.
// Randomness is hand-rolled on mt19937_64 so fixtures are identical on
// every platform.

#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fusekit/trec_io.hpp"

namespace testutil {

inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
    return rng() % n;
}

inline double unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::string doc(int i) { return "D" + std::to_string(i); }

// A ranked list over a random subset of `pool` docs with distinct
// random scores.
inline fusekit::RankedList random_list(std::mt19937_64& rng, int pool, int max_len) {
    std::vector<int> ids(pool);
    for (int i = 0; i < pool; ++i) ids[i] = i;
    for (std::size_t j = ids.size(); j > 1; --j)
        std::swap(ids[j - 1], ids[bounded(rng, j)]);
    int len = 1 + static_cast<int>(bounded(rng, max_len));
    fusekit::RankedList list;
    double score = 100.0 + unit(rng);
    for (int i = 0; i < len && i < pool; ++i) {
        score -= 0.5 + unit(rng);  // strictly decreasing
        list.entries.push_back({doc(ids[i]), i + 1, score});
    }
    return list;
}

// Random qrels over the documents of the given lists. coverage = 1.0
// judges every returned doc; rel_prob is the chance a judged doc is
// relevant.
inline fusekit::Qrels random_qrels(std::mt19937_64& rng,
                                   const std::map<std::string, fusekit::RankedList>& lists,
                                   const std::string& topic, double coverage,
                                   double rel_prob) {
    fusekit::Qrels qrels;
    std::map<std::string, bool> seen;
    for (const auto& [tag, list] : lists)
        for (const auto& e : list.entries) {
            if (seen.count(e.doc_id)) continue;
            seen[e.doc_id] = true;
            if (unit(rng) < coverage)
                qrels.add(topic, e.doc_id, unit(rng) < rel_prob ? 1 : 0);
        }
    return qrels;
}

inline fusekit::RunSet parse_run_str(const std::string& text) {
    std::istringstream in(text);
    return fusekit::parse_run(in);
}

inline fusekit::Qrels parse_qrels_str(const std::string& text) {
    std::istringstream in(text);
    return fusekit::parse_qrels(in);
}

}  // namespace testutil
