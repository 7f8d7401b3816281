#include "fusekit/synthgen.hpp"

#include <cstdio>
#include <random>
#include <set>

#include "fusekit/detail/kv.hpp"

namespace fusekit {

namespace {

// Pinned randomness helpers: mt19937_64 with modulo reduction, so the
// same seed produces the same data on every platform.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
    return rng() % n;
}

double unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::mt19937_64 sub_rng(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    std::seed_seq seq{seed, a, b};
    return std::mt19937_64(seq);
}

std::string doc_name(int index) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "D%06d", index);
    return buf;
}

std::string topic_name(int index) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "T%03d", index + 1);
    return buf;
}

}  // namespace

void SynthSpec::validate() const {
    if (num_topics < 1) throw ConfigError("num_topics must be >= 1");
    if (collection_size < 1) throw ConfigError("collection_size must be >= 1");
    if (num_relevant_per_topic < 0 || num_relevant_per_topic > collection_size)
        throw ConfigError("num_relevant_per_topic must be in [0, collection_size]");
    if (num_systems < 1) throw ConfigError("num_systems must be >= 1");
    if (list_depth < 1 || list_depth > collection_size)
        throw ConfigError("list_depth must be in [1, collection_size]");
    if (judgment_coverage <= 0.0 || judgment_coverage > 1.0)
        throw ConfigError("judgment_coverage must be in (0, 1]");
    if (quality.size() != 1 && quality.size() != static_cast<std::size_t>(num_systems))
        throw ConfigError("quality must list one value or one per system");
    for (double q : quality)
        if (q < 0.0 || q > 1.0) throw ConfigError("quality values must be in [0, 1]");
}

SynthSpec parse_synth_spec(std::istream& in) {
    SynthSpec spec;
    for (const auto& [key, value] : detail::parse_kv(in)) {
        if (key == "num_topics") spec.num_topics = detail::to_int(value, key);
        else if (key == "collection_size") spec.collection_size = detail::to_int(value, key);
        else if (key == "num_relevant_per_topic")
            spec.num_relevant_per_topic = detail::to_int(value, key);
        else if (key == "num_systems") spec.num_systems = detail::to_int(value, key);
        else if (key == "quality") {
            spec.quality.clear();
            for (const auto& q : detail::split_list(value))
                spec.quality.push_back(detail::to_double(q, key));
        } else if (key == "list_depth") spec.list_depth = detail::to_int(value, key);
        else if (key == "judgment_coverage")
            spec.judgment_coverage = detail::to_double(value, key);
        else if (key == "rng_seed") spec.rng_seed = detail::to_u64(value, key);
        else throw ConfigError("unknown spec key '" + key + "'");
    }
    if (spec.quality.empty()) spec.quality.push_back(0.8);
    spec.validate();
    return spec;
}

std::pair<std::vector<RunSet>, Qrels> generate(const SynthSpec& spec) {
    spec.validate();

    // Relevant document set per topic.
    std::vector<std::set<int>> relevant(spec.num_topics);
    for (int t = 0; t < spec.num_topics; ++t) {
        auto rng = sub_rng(spec.rng_seed, 0x7061c5, t);
        while (static_cast<int>(relevant[t].size()) < spec.num_relevant_per_topic)
            relevant[t].insert(static_cast<int>(bounded(rng, spec.collection_size)));
    }

    std::vector<RunSet> runs(spec.num_systems);
    for (int s = 0; s < spec.num_systems; ++s) {
        double quality = spec.quality.size() == 1 ? spec.quality[0] : spec.quality[s];
        char tag[16];
        std::snprintf(tag, sizeof tag, "synth%02d", s + 1);
        runs[s].tag = tag;
        for (int t = 0; t < spec.num_topics; ++t) {
            auto rng = sub_rng(spec.rng_seed, 0x100000 + s, t);
            std::vector<int> rel(relevant[t].begin(), relevant[t].end());
            std::vector<int> nonrel;
            nonrel.reserve(spec.collection_size - rel.size());
            for (int d = 0; d < spec.collection_size; ++d)
                if (!relevant[t].count(d)) nonrel.push_back(d);
            RankedList list;
            list.entries.reserve(spec.list_depth);
            for (int rank = 1; rank <= spec.list_depth; ++rank) {
                bool pick_rel = unit(rng) < quality;
                auto& pool = (pick_rel && !rel.empty()) || nonrel.empty() ? rel : nonrel;
                std::size_t i = bounded(rng, pool.size());
                int doc = pool[i];
                pool.erase(pool.begin() + i);
                list.entries.push_back(RunEntry{
                    doc_name(doc), rank, static_cast<double>(spec.list_depth - rank + 1)});
            }
            runs[s].lists[topic_name(t)] = std::move(list);
        }
    }

    // Judgments over the union of returned documents per topic.
    Qrels qrels;
    for (int t = 0; t < spec.num_topics; ++t) {
        std::set<int> returned;
        std::string topic = topic_name(t);
        for (const auto& run : runs)
            for (const auto& e : run.lists.at(topic).entries)
                returned.insert(std::stoi(e.doc_id.substr(1)));
        auto rng = sub_rng(spec.rng_seed, 0x9e3779, t);
        for (int doc : returned) {
            if (unit(rng) < spec.judgment_coverage)
                qrels.add(topic, doc_name(doc), relevant[t].count(doc) ? 1 : 0);
        }
    }
    return {std::move(runs), std::move(qrels)};
}

}  // namespace fusekit
