#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fusekit/trec_io.hpp"

namespace fusekit {

/// Parameters for the synthetic run/qrels generator.
struct SynthSpec {
    int num_topics = 10;
    int collection_size = 1000;
    int num_relevant_per_topic = 20;
    int num_systems = 3;
    std::vector<double> quality;  // one per system, or one value for all
    int list_depth = 100;
    double judgment_coverage = 1.0;  // fraction of returned docs judged
    std::uint64_t rng_seed = 1;

    void validate() const;
};

/// Parse a flat key=value spec file ('#' starts a comment).
SynthSpec parse_synth_spec(std::istream& in);

/// Deterministically generate one run set per system plus qrels.
/// Scores within each list are strictly decreasing. With
/// judgment_coverage = 1.0 every returned document is judged.
std::pair<std::vector<RunSet>, Qrels> generate(const SynthSpec& spec);

}  // namespace fusekit
