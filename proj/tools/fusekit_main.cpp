// fusekit: data-fusion toolkit for TREC-style ranked retrieval runs.
//
// Subcommands: train, fuse, eval, experiment, synth. Results go to
// stdout or a named file; diagnostics go to stderr. Exit codes:
// 0 success, 1 usage error, 2 data/parse error, 3 runtime failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "fusekit/evaluation.hpp"
#include "fusekit/experiment.hpp"
#include "fusekit/fusion_core.hpp"
#include "fusekit/synthgen.hpp"
#include "fusekit/trec_io.hpp"

namespace fs = std::filesystem;
using namespace fusekit;

namespace {

// Write through a temp file and rename, so failed runs leave no partial
// output behind.
void with_output(const std::string& path, const std::function<void(std::ostream&)>& fn) {
    if (path.empty()) {
        fn(std::cout);
        std::cout.flush();
        return;
    }
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw DataError("cannot open output file '" + tmp.string() + "'");
        fn(out);
        if (!out) throw DataError("write failure on '" + tmp.string() + "'");
    }
    fs::rename(tmp, target);
}

std::ifstream open_input(const std::string& path, const char* what) {
    std::ifstream in(path);
    if (!in) throw DataError(std::string("cannot open ") + what + " '" + path + "'");
    return in;
}

std::vector<RunSet> load_runs(const std::vector<std::string>& paths) {
    std::vector<RunSet> runs;
    for (const auto& path : paths) {
        auto in = open_input(path, "run file");
        try {
            runs.push_back(parse_run(in));
        } catch (const DataError& e) {
            throw DataError(path + ": " + e.what());
        }
    }
    return runs;
}

Qrels load_qrels(const std::string& path) {
    auto in = open_input(path, "qrels file");
    try {
        return parse_qrels(in);
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

// --topics accepts a comma-separated list or a file of whitespace-
// separated topic ids; empty means every topic present in the runs.
std::vector<std::string> resolve_topics(const std::string& arg,
                                        const std::vector<RunSet>& runs) {
    if (arg.empty()) return collect_topics(runs);
    std::vector<std::string> topics;
    if (fs::exists(arg)) {
        auto in = open_input(arg, "topic file");
        std::string topic;
        while (in >> topic) topics.push_back(topic);
    } else {
        std::stringstream ss(arg);
        std::string topic;
        while (std::getline(ss, topic, ','))
            if (!topic.empty()) topics.push_back(topic);
    }
    if (topics.empty()) throw ConfigError("--topics resolved to an empty list");
    return topics;
}

int default_jobs() {
    if (const char* env = std::getenv("FUSEKIT_JOBS")) {
        int jobs = std::atoi(env);
        if (jobs >= 1) return jobs;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

std::map<std::string, std::vector<ScoredDoc>> as_writable(
    const std::map<std::string, FusedList>& fused) {
    std::map<std::string, std::vector<ScoredDoc>> out;
    for (const auto& [topic, list] : fused) out[topic] = list.entries;
    return out;
}

int cmd_train(const std::vector<std::string>& run_paths, const std::string& qrels_path,
              const std::string& topics_arg, int x, const std::string& variant_name,
              const std::string& out_path) {
    auto runs = load_runs(run_paths);
    auto qrels = load_qrels(qrels_path);
    auto topics = resolve_topics(topics_arg, runs);
    Variant variant = variant_from_string(variant_name);
    std::vector<ProbabilityProfile> profiles;
    for (const auto& run : runs)
        profiles.push_back(train_profile(run, qrels, topics, x, variant));
    with_output(out_path, [&](std::ostream& out) { write_profiles(profiles, out); });
    return 0;
}

int cmd_fuse(const std::vector<std::string>& run_paths, const std::string& profiles_path,
             const std::string& method, const std::string& topics_arg,
             const std::string& out_path, int input_depth) {
    auto runs = load_runs(run_paths);
    truncate_runs(runs, input_depth);
    auto topics = resolve_topics(topics_arg, runs);

    std::map<std::string, ProbabilityProfile> profiles;
    if (!profiles_path.empty()) {
        auto in = open_input(profiles_path, "profile file");
        int x = -1;
        for (auto& profile : parse_profiles(in)) {
            if (x < 0) x = profile.x;
            else if (profile.x != x)
                throw DataError("profiles disagree on segment count x");
            profiles[profile.model_tag] = std::move(profile);
        }
        for (const auto& run : runs)
            if (!profiles.count(run.tag))
                throw DataError("no profile for run tag '" + run.tag + "'");
    }

    std::map<std::string, FusedList> fused;
    for (const auto& topic : topics) {
        std::map<std::string, RankedList> results;
        for (const auto& run : runs) {
            auto it = run.lists.find(topic);
            if (it != run.lists.end()) results[run.tag] = it->second;
        }
        if (method == "probfuse")
            fused[topic] = score_probfuse(results, profiles, topic);
        else if (method == "combmnz")
            fused[topic] = combmnz(results, topic);
        else
            fused[topic] = combsum(results, topic);
    }
    with_output(out_path,
                [&](std::ostream& out) { write_run(as_writable(fused), method, out); });
    return 0;
}

int cmd_eval(const std::string& run_path, const std::string& qrels_path, int depth,
             const std::string& out_path) {
    auto in = open_input(run_path, "run file");
    RunSet run;
    try {
        run = parse_run(in);
    } catch (const DataError& e) {
        throw DataError(run_path + ": " + e.what());
    }
    auto qrels = load_qrels(qrels_path);
    std::map<std::string, FusedList> fused;
    for (const auto& [topic, list] : run.lists) {
        FusedList fl;
        fl.topic_id = topic;
        for (const auto& e : list.entries) fl.entries.push_back({e.doc_id, e.score});
        fused[topic] = std::move(fl);
    }
    auto summary = evaluate(fused, qrels, depth);
    with_output(out_path, [&](std::ostream& out) { write_eval_csv(summary, out); });
    return 0;
}

int cmd_experiment(const std::string& config_path, const std::string& out_path,
                   int jobs) {
    auto in = open_input(config_path, "config file");
    auto config = parse_experiment_config(in);
    auto report = run_experiment(config, jobs);
    with_output(out_path, [&](std::ostream& out) { write_report_csv(report, out); });
    return 0;
}

int cmd_synth(const std::string& spec_path, const std::string& out_dir) {
    auto in = open_input(spec_path, "spec file");
    auto spec = parse_synth_spec(in);
    auto [runs, qrels] = generate(spec);
    fs::create_directories(out_dir);
    for (const auto& run : runs) {
        std::map<std::string, std::vector<ScoredDoc>> lists;
        for (const auto& [topic, list] : run.lists) {
            auto& docs = lists[topic];
            for (const auto& e : list.entries) docs.push_back({e.doc_id, e.score});
        }
        with_output((fs::path(out_dir) / (run.tag + ".run")).string(),
                    [&](std::ostream& out) { write_run(lists, run.tag, out); });
    }
    with_output((fs::path(out_dir) / "qrels.txt").string(), [&](std::ostream& out) {
        for (const auto& [topic, docs] : qrels.by_topic())
            for (const auto& [doc, judgment] : docs)
                out << topic << " 0 " << doc << ' ' << judgment << '\n';
    });
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fusekit: probabilistic data fusion for ranked retrieval runs"};
    app.require_subcommand(1);

    std::vector<std::string> run_paths;
    std::string qrels_path, topics_arg, out_path, variant_name = "all";
    std::string profiles_path, method, config_path, spec_path, run_path, out_dir;
    int x = 0, depth = 1000, input_depth = 0, jobs = default_jobs();

    auto* train = app.add_subcommand("train", "Train probFuse segment probabilities");
    train->add_option("--runs", run_paths, "Input run files")->required();
    train->add_option("--qrels", qrels_path, "Relevance judgments")->required();
    train->add_option("--topics", topics_arg, "Training topics (comma list or file)");
    train->add_option("--x", x, "Number of segments")->required();
    train->add_option("--variant", variant_name, "all|judged")
        ->check(CLI::IsMember({"all", "judged"}));
    train->add_option("--out", out_path, "Profile output file (default stdout)");

    auto* fuse = app.add_subcommand("fuse", "Fuse runs into a single ranked list");
    fuse->add_option("--runs", run_paths, "Input run files")->required();
    auto* prof_opt = fuse->add_option("--profiles", profiles_path,
                                      "Trained profiles (probFuse)");
    auto* method_opt = fuse->add_option("--method", method, "combmnz|combsum")
                           ->check(CLI::IsMember({"combmnz", "combsum"}));
    prof_opt->excludes(method_opt);
    fuse->add_option("--topics", topics_arg, "Topics to fuse (default: all)");
    fuse->add_option("--input-depth", input_depth, "Truncate input lists (0 = keep all)");
    fuse->add_option("--out", out_path, "Fused run output file (default stdout)");

    auto* eval = app.add_subcommand("eval", "Evaluate a run against qrels");
    eval->add_option("--run", run_path, "Run file to evaluate")->required();
    eval->add_option("--qrels", qrels_path, "Relevance judgments")->required();
    eval->add_option("--depth", depth, "Evaluation depth");
    eval->add_option("--out", out_path, "CSV output file (default stdout)");

    auto* experiment = app.add_subcommand("experiment", "Run the full fusion grid");
    experiment->add_option("--config", config_path, "key=value config file")->required();
    experiment->add_option("--out", out_path, "Report CSV file (default stdout)");
    experiment->add_option("--jobs", jobs, "Worker parallelism cap");

    auto* synth = app.add_subcommand("synth", "Generate synthetic runs and qrels");
    synth->add_option("--spec", spec_path, "key=value spec file")->required();
    synth->add_option("--out-dir", out_dir, "Output directory")->required();

    try {
        app.parse(argc, argv);
        if (train->parsed())
            return cmd_train(run_paths, qrels_path, topics_arg, x, variant_name,
                             out_path);
        if (fuse->parsed()) {
            if (profiles_path.empty() && method.empty())
                throw ConfigError("fuse requires --profiles or --method");
            return cmd_fuse(run_paths, profiles_path,
                            profiles_path.empty() ? method : "probfuse", topics_arg,
                            out_path, input_depth);
        }
        if (eval->parsed()) return cmd_eval(run_path, qrels_path, depth, out_path);
        if (experiment->parsed()) return cmd_experiment(config_path, out_path, jobs);
        if (synth->parsed()) return cmd_synth(spec_path, out_dir);
        return 1;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
