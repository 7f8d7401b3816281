#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "fusekit/fusion_core.hpp"
#include "test_util.hpp"

using namespace fusekit;

namespace {

RankedList make_list(const std::vector<std::pair<std::string, double>>& docs) {
    RankedList list;
    int rank = 0;
    for (const auto& [doc, score] : docs) list.entries.push_back({doc, ++rank, score});
    return list;
}

RunSet single_topic_run(const std::string& tag, const std::string& topic,
                        const RankedList& list) {
    RunSet run;
    run.tag = tag;
    run.lists[topic] = list;
    return run;
}

}  // namespace

TEST_CASE("segment_of splits even lists into halves") {
    CHECK(segment_of(3, 10, 2) == 1);
    CHECK(segment_of(6, 10, 2) == 2);
}

TEST_CASE("segment_of distributes a remainder across segments") {
    // L=10, x=4: boundaries at ceil(k*10/4) = 3, 5, 8, 10
    std::vector<int> expected{1, 1, 1, 2, 2, 3, 3, 3, 4, 4};
    for (int p = 1; p <= 10; ++p) CHECK(segment_of(p, 10, 4) == expected[p - 1]);
}

TEST_CASE("segment_of leaves segments empty when x exceeds the list length") {
    // L=3, x=5: smallest k with p <= ceil(3k/5)
    CHECK(segment_of(1, 3, 5) == 1);
    CHECK(segment_of(2, 3, 5) == 2);
    CHECK(segment_of(3, 3, 5) == 4);
}

TEST_CASE("segment_of rejects out-of-range positions") {
    CHECK_THROWS_AS(segment_of(0, 10, 2), ConfigError);
    CHECK_THROWS_AS(segment_of(11, 10, 2), ConfigError);
}

TEST_CASE("segment_of partitions positions into x contiguous near-even ranges") {
    std::mt19937_64 rng(11);
    for (int iter = 0; iter < 200; ++iter) {
        int length = 1 + static_cast<int>(testutil::bounded(rng, 60));
        int x = 1 + static_cast<int>(testutil::bounded(rng, 70));
        std::vector<int> sizes(x, 0);
        int prev = 0;
        for (int p = 1; p <= length; ++p) {
            int k = segment_of(p, length, x);
            REQUIRE(k >= 1);
            REQUIRE(k <= x);
            REQUIRE(k >= prev);  // monotone non-decreasing
            prev = k;
            ++sizes[k - 1];
        }
        if (length >= x) {
            int lo = *std::min_element(sizes.begin(), sizes.end());
            int hi = *std::max_element(sizes.begin(), sizes.end());
            CHECK(hi - lo <= 1);
        }
    }
}

TEST_CASE("train_profile matches hand-computed values on judged data") {
    auto run = single_topic_run("m", "q1",
                                make_list({{"d1", 4}, {"d2", 3}, {"d3", 2}, {"d4", 1}}));
    auto qrels = testutil::parse_qrels_str(
        "q1 0 d1 1\nq1 0 d2 0\nq1 0 d3 1\nq1 0 d4 0\n");
    auto all = train_profile(run, qrels, {"q1"}, 2, Variant::All);
    auto judged = train_profile(run, qrels, {"q1"}, 2, Variant::Judged);
    CHECK(all.probs[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(all.probs[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(judged.probs[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(judged.probs[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("train_profile excludes unjudged documents from the Judged denominator") {
    auto run = single_topic_run("m", "q1",
                                make_list({{"d1", 4}, {"d2", 3}, {"d3", 2}, {"d4", 1}}));
    auto qrels = testutil::parse_qrels_str("q1 0 d1 1\nq1 0 d3 0\n");
    auto all = train_profile(run, qrels, {"q1"}, 2, Variant::All);
    auto judged = train_profile(run, qrels, {"q1"}, 2, Variant::Judged);
    CHECK(all.probs[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(all.probs[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(judged.probs[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(judged.probs[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("training topic missing from the run still counts toward Q") {
    auto run = single_topic_run("m", "q1", make_list({{"d1", 2}, {"d2", 1}}));
    auto qrels = testutil::parse_qrels_str("q1 0 d1 1\nq1 0 d2 1\n");
    auto profile = train_profile(run, qrels, {"q1", "q2"}, 1, Variant::All);
    CHECK(profile.probs[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("train_profile rejects bad parameters") {
    auto run = single_topic_run("m", "q1", make_list({{"d1", 1}}));
    Qrels qrels;
    CHECK_THROWS_AS(train_profile(run, qrels, {"q1"}, 0, Variant::All), ConfigError);
    CHECK_THROWS_AS(train_profile(run, qrels, {}, 2, Variant::All), ConfigError);
}

TEST_CASE("trained probabilities stay in [0,1] on random inputs") {
    std::mt19937_64 rng(23);
    for (int iter = 0; iter < 200; ++iter) {
        RunSet run;
        run.tag = "m";
        std::vector<std::string> topics;
        int n_topics = 1 + static_cast<int>(testutil::bounded(rng, 4));
        for (int t = 0; t < n_topics; ++t) {
            topics.push_back("q" + std::to_string(t));
            run.lists[topics.back()] = testutil::random_list(rng, 25, 15);
        }
        Qrels qrels;
        for (const auto& topic : topics) {
            auto q = testutil::random_qrels(rng, {{"m", run.lists[topic]}}, topic,
                                            testutil::unit(rng), testutil::unit(rng));
            for (const auto& [t2, docs] : q.by_topic())
                for (const auto& [doc, j] : docs) qrels.add(t2, doc, j);
        }
        int x = 1 + static_cast<int>(testutil::bounded(rng, 30));
        for (auto variant : {Variant::All, Variant::Judged}) {
            auto profile = train_profile(run, qrels, topics, x, variant);
            for (double p : profile.probs) {
                REQUIRE(p >= 0.0);
                REQUIRE(p <= 1.0);
            }
        }
    }
}

TEST_CASE("All and Judged training agree exactly under complete judgments") {
    std::mt19937_64 rng(31);
    for (int iter = 0; iter < 100; ++iter) {
        RunSet run;
        run.tag = "m";
        std::vector<std::string> topics{"q0", "q1", "q2"};
        Qrels qrels;
        for (const auto& topic : topics) {
            run.lists[topic] = testutil::random_list(rng, 25, 15);
            auto q = testutil::random_qrels(rng, {{"m", run.lists[topic]}}, topic, 1.0,
                                            0.4);
            for (const auto& [t2, docs] : q.by_topic())
                for (const auto& [doc, j] : docs) qrels.add(t2, doc, j);
        }
        int x = 1 + static_cast<int>(testutil::bounded(rng, 20));
        auto all = train_profile(run, qrels, topics, x, Variant::All);
        auto judged = train_profile(run, qrels, topics, x, Variant::Judged);
        REQUIRE(all.probs == judged.probs);
    }
}

TEST_CASE("score_probfuse sums segment probabilities weighted by segment") {
    // d in segment 1 of m1 (P=0.5) and segment 2 of m2 (P=0.4)
    std::map<std::string, RankedList> results{
        {"m1", make_list({{"d", 2}, {"e", 1}})},
        {"m2", make_list({{"f", 2}, {"d", 1}})}};
    std::map<std::string, ProbabilityProfile> profiles;
    profiles["m1"] = {"m1", 2, {0.5, 0.1}, Variant::All, {}};
    profiles["m2"] = {"m2", 2, {0.3, 0.4}, Variant::All, {}};
    auto fused = score_probfuse(results, profiles, "q");
    REQUIRE(!fused.entries.empty());
    CHECK(fused.entries[0].doc_id == "d");
    CHECK(fused.entries[0].score == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("models that do not return a document contribute zero") {
    std::map<std::string, RankedList> results{{"m1", make_list({{"d", 1}})},
                                              {"m2", make_list({{"e", 1}})}};
    std::map<std::string, ProbabilityProfile> profiles;
    profiles["m1"] = {"m1", 1, {0.5}, Variant::All, {}};
    profiles["m2"] = {"m2", 1, {0.2}, Variant::All, {}};
    auto fused = score_probfuse(results, profiles, "q");
    REQUIRE(fused.entries.size() == 2);
    CHECK(fused.entries[0].doc_id == "d");
    CHECK(fused.entries[0].score == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("all-zero profiles produce doc_id-ascending output") {
    std::map<std::string, RankedList> results{
        {"m1", make_list({{"z", 3}, {"a", 2}, {"m", 1}})}};
    std::map<std::string, ProbabilityProfile> profiles;
    profiles["m1"] = {"m1", 3, {0.0, 0.0, 0.0}, Variant::All, {}};
    auto fused = score_probfuse(results, profiles, "q");
    REQUIRE(fused.entries.size() == 3);
    CHECK(fused.entries[0].doc_id == "a");
    CHECK(fused.entries[1].doc_id == "m");
    CHECK(fused.entries[2].doc_id == "z");
    for (const auto& e : fused.entries) CHECK(e.score == 0.0);
}

TEST_CASE("score_probfuse requires a profile per model") {
    std::map<std::string, RankedList> results{{"m1", make_list({{"d", 1}})}};
    CHECK_THROWS_AS(score_probfuse(results, {}, "q"), ConfigError);
}

TEST_CASE("a strictly decreasing profile preserves segment order") {
    std::mt19937_64 rng(43);
    for (int iter = 0; iter < 50; ++iter) {
        auto list = testutil::random_list(rng, 40, 30);
        int x = 2 + static_cast<int>(testutil::bounded(rng, 8));
        ProbabilityProfile profile{"m", x, {}, Variant::All, {}};
        for (int k = 0; k < x; ++k) profile.probs.push_back(1.0 - 0.9 * k / x);
        auto fused = score_probfuse({{"m", list}}, {{"m", profile}}, "q");
        // map docs to their input segment
        std::map<std::string, int> seg;
        for (int p = 1; p <= static_cast<int>(list.size()); ++p)
            seg[list.entries[p - 1].doc_id] =
                fusekit::segment_of(p, static_cast<int>(list.size()), x);
        int prev = 0;
        for (const auto& e : fused.entries) {
            REQUIRE(seg[e.doc_id] >= prev);
            prev = seg[e.doc_id];
        }
    }
}

TEST_CASE("normalize_scores maps observed extremes to 1 and 0") {
    auto norm = normalize_scores(make_list({{"d1", 100}, {"d2", 50}, {"d3", 0}}));
    CHECK(norm["d1"] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(norm["d2"] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(norm["d3"] == doctest::Approx(0.0).epsilon(1e-12));

    auto norm2 = normalize_scores(make_list({{"d1", 0.9}, {"d2", 0.1}, {"d3", 0.5}}));
    CHECK(norm2["d1"] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(norm2["d2"] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(norm2["d3"] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("degenerate normalization maps every document to 1") {
    auto norm = normalize_scores(make_list({{"d1", 7}, {"d2", 7}}));
    CHECK(norm["d1"] == 1.0);
    CHECK(norm["d2"] == 1.0);
}

TEST_CASE("combsum adds normalized scores with absent docs as zero") {
    // d: normalized 0.8 in s1, 0.5 in s2
    std::map<std::string, RankedList> results{
        {"s1", make_list({{"a", 10}, {"d", 8}, {"b", 0}})},
        {"s2", make_list({{"c", 10}, {"d", 5}, {"e", 0}})}};
    auto fused = combsum(results, "q");
    std::map<std::string, double> scores;
    for (const auto& e : fused.entries) scores[e.doc_id] = e.score;
    CHECK(scores["d"] == doctest::Approx(1.3).epsilon(1e-12));
    CHECK(scores["a"] == doctest::Approx(1.0).epsilon(1e-12));  // only s1
}

TEST_CASE("combsum ties break by doc_id ascending") {
    std::map<std::string, RankedList> results{{"s1", make_list({{"b", 2}, {"a", 1}})}};
    auto fused = combsum(results, "q");
    REQUIRE(fused.entries.size() == 2);
    CHECK(fused.entries[0].doc_id == "b");
    // equal normalized scores sort by id
    auto fused2 = combsum({{"s1", make_list({{"b", 2}, {"a", 2}})}}, "q");
    CHECK(fused2.entries[0].doc_id == "a");
}

TEST_CASE("combmnz multiplies by the count of strictly positive scores") {
    std::map<std::string, RankedList> results{
        {"s1", make_list({{"a", 10}, {"d", 8}, {"b", 0}})},
        {"s2", make_list({{"c", 10}, {"d", 5}, {"e", 0}})}};
    auto fused = combmnz(results, "q");
    std::map<std::string, double> scores;
    for (const auto& e : fused.entries) scores[e.doc_id] = e.score;
    CHECK(scores["d"] == doctest::Approx(2.6).epsilon(1e-12));  // (0.8+0.5)*2
    CHECK(scores["a"] == doctest::Approx(1.0).epsilon(1e-12));  // 1.0*1
}

TEST_CASE("a zero normalized score does not count toward the multiplier") {
    // d: 0.8 in s1, bottom-ranked (0.0) in s2 -> (0.8+0.0)*1
    std::map<std::string, RankedList> results{
        {"s1", make_list({{"a", 10}, {"d", 8}, {"b", 0}})},
        {"s2", make_list({{"c", 10}, {"e", 5}, {"d", 0}})}};
    auto fused = combmnz(results, "q");
    std::map<std::string, double> scores;
    for (const auto& e : fused.entries) scores[e.doc_id] = e.score;
    CHECK(scores["d"] == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("fused orderings are invariant under positive affine rescaling") {
    std::mt19937_64 rng(57);
    for (int iter = 0; iter < 100; ++iter) {
        std::map<std::string, RankedList> results;
        int systems = 2 + static_cast<int>(testutil::bounded(rng, 3));
        for (int s = 0; s < systems; ++s)
            results["s" + std::to_string(s)] = testutil::random_list(rng, 30, 15);
        std::map<std::string, RankedList> rescaled = results;
        for (auto& [tag, list] : rescaled) {
            double a = 0.1 + 5.0 * testutil::unit(rng);
            double b = -10.0 + 20.0 * testutil::unit(rng);
            for (auto& e : list.entries) e.score = a * e.score + b;
        }
        for (auto* fn : {&combsum, &combmnz}) {
            auto base = (*fn)(results, "q");
            auto scaled = (*fn)(rescaled, "q");
            REQUIRE(base.entries.size() == scaled.entries.size());
            for (std::size_t i = 0; i < base.entries.size(); ++i)
                CHECK(base.entries[i].doc_id == scaled.entries[i].doc_id);
        }
    }
}

TEST_CASE("combmnz of a single input keeps the input order above the zero tail") {
    std::mt19937_64 rng(61);
    for (int iter = 0; iter < 50; ++iter) {
        auto list = testutil::random_list(rng, 30, 15);
        auto fused = combmnz({{"s1", list}}, "q");
        REQUIRE(fused.entries.size() == list.size());
        for (std::size_t i = 0; i + 1 < list.size(); ++i)
            CHECK(fused.entries[i].doc_id == list.entries[i].doc_id);
    }
}

TEST_CASE("fusion operations are deterministic") {
    std::mt19937_64 rng(67);
    std::map<std::string, RankedList> results;
    for (int s = 0; s < 3; ++s)
        results["s" + std::to_string(s)] = testutil::random_list(rng, 30, 15);
    auto a = combmnz(results, "q");
    auto b = combmnz(results, "q");
    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        CHECK(a.entries[i].doc_id == b.entries[i].doc_id);
        CHECK(a.entries[i].score == b.entries[i].score);
    }
}

TEST_CASE("profiles round-trip through their text serialization") {
    std::vector<ProbabilityProfile> profiles;
    profiles.push_back({"sysA", 3, {0.1234567891, 0.5, 0.0}, Variant::Judged, {}});
    profiles.push_back({"sysB", 2, {1.0, 0.25}, Variant::All, {}});
    std::ostringstream out;
    write_profiles(profiles, out);
    std::istringstream in(out.str());
    auto parsed = parse_profiles(in);
    REQUIRE(parsed.size() == 2);
    CHECK(parsed[0].model_tag == "sysA");
    CHECK(parsed[0].variant == Variant::Judged);
    CHECK(parsed[0].x == 3);
    for (int i = 0; i < 3; ++i)
        CHECK(parsed[0].probs[i] ==
              doctest::Approx(profiles[0].probs[i]).epsilon(1e-9));
    CHECK(parsed[1].variant == Variant::All);
}

TEST_CASE("parse_profiles validates its input") {
    std::istringstream bad_count("m all 3 0.5 0.5\n");
    CHECK_THROWS_AS(parse_profiles(bad_count), ParseError);
    std::istringstream bad_range("m all 1 1.5\n");
    CHECK_THROWS_AS(parse_profiles(bad_range), ParseError);
    std::istringstream bad_variant("m sometimes 1 0.5\n");
    CHECK_THROWS_AS(parse_profiles(bad_variant), ConfigError);
}
