#include "fusekit/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <random>
#include <set>

#include "fusekit/detail/kv.hpp"

#ifdef FUSEKIT_HAVE_OPENMP
#include <omp.h>
#endif

namespace fusekit {

void ExperimentConfig::validate() const {
    if (input_runs.empty()) throw ConfigError("key 'input_runs': no run files given");
    if (qrels_path.empty()) throw ConfigError("key 'qrels_path': missing");
    for (double t : t_values)
        if (t <= 0.0 || t >= 100.0)
            throw ConfigError("key 't_values': t must be in (0, 100)");
    if (t_values.empty()) throw ConfigError("key 't_values': empty");
    for (int x : x_values)
        if (x < 1) throw ConfigError("key 'x_values': x must be >= 1");
    if (x_values.empty()) throw ConfigError("key 'x_values': empty");
    if (num_orderings < 1) throw ConfigError("key 'num_orderings': must be >= 1");
    if (eval_depth < 1) throw ConfigError("key 'eval_depth': must be >= 1");
    if (input_depth < 0) throw ConfigError("key 'input_depth': must be >= 0");
    if (variants.empty()) throw ConfigError("key 'variants': empty");
}

ExperimentConfig parse_experiment_config(std::istream& in) {
    ExperimentConfig config;
    for (const auto& [key, value] : detail::parse_kv(in)) {
        if (key == "input_runs") config.input_runs = detail::split_list(value);
        else if (key == "qrels_path") config.qrels_path = value;
        else if (key == "t_values") {
            config.t_values.clear();
            for (const auto& t : detail::split_list(value))
                config.t_values.push_back(detail::to_double(t, key));
        } else if (key == "x_values") {
            config.x_values.clear();
            for (const auto& x : detail::split_list(value))
                config.x_values.push_back(detail::to_int(x, key));
        } else if (key == "num_orderings") config.num_orderings = detail::to_int(value, key);
        else if (key == "rng_seed") config.rng_seed = detail::to_u64(value, key);
        else if (key == "eval_depth") config.eval_depth = detail::to_int(value, key);
        else if (key == "input_depth") config.input_depth = detail::to_int(value, key);
        else if (key == "variants") {
            config.variants.clear();
            for (const auto& v : detail::split_list(value))
                config.variants.push_back(variant_from_string(v));
        } else throw ConfigError("unknown config key '" + key + "'");
    }
    config.validate();
    return config;
}

std::vector<std::vector<std::string>> make_orderings(
    const std::vector<std::string>& topics, int n, std::uint64_t seed) {
    if (n < 1) throw ConfigError("number of orderings must be >= 1");
    std::mt19937_64 rng(seed);
    std::vector<std::vector<std::string>> orderings;
    orderings.reserve(n);
    for (int i = 0; i < n; ++i) {
        std::vector<std::string> perm = topics;
        for (std::size_t j = perm.size(); j > 1; --j)
            std::swap(perm[j - 1], perm[rng() % j]);
        orderings.push_back(std::move(perm));
    }
    return orderings;
}

std::pair<std::vector<std::string>, std::vector<std::string>> split_topics(
    const std::vector<std::string>& ordered_topics, double t_percent) {
    if (t_percent <= 0.0 || t_percent >= 100.0)
        throw ConfigError("training percentage must be in (0, 100)");
    std::size_t n = ordered_topics.size();
    auto cut = static_cast<std::size_t>(
        std::floor(t_percent / 100.0 * static_cast<double>(n) + 0.5));
    if (cut == 0 || cut >= n)
        throw ConfigError("t = " + std::to_string(t_percent) +
                          "% leaves an empty training or fusion set for " +
                          std::to_string(n) + " topics");
    std::vector<std::string> training(ordered_topics.begin(), ordered_topics.begin() + cut);
    std::vector<std::string> fusion(ordered_topics.begin() + cut, ordered_topics.end());
    return {std::move(training), std::move(fusion)};
}

namespace {

std::map<std::string, RankedList> topic_results(const std::vector<RunSet>& runs,
                                                const std::string& topic) {
    std::map<std::string, RankedList> results;
    for (const auto& run : runs) {
        auto it = run.lists.find(topic);
        if (it != run.lists.end()) results[run.tag] = it->second;
    }
    return results;
}

EvalSummary probfuse_cell(const std::vector<RunSet>& runs, const Qrels& qrels,
                          const std::vector<std::string>& training,
                          const std::vector<std::string>& fusion, int x,
                          Variant variant, int eval_depth) {
    std::map<std::string, ProbabilityProfile> profiles;
    for (const auto& run : runs)
        profiles[run.tag] = train_profile(run, qrels, training, x, variant);
    std::map<std::string, FusedList> fused;
    for (const auto& topic : fusion) {
        FusedList list = score_probfuse(topic_results(runs, topic), profiles, topic);
        fused[topic] = std::move(list);
    }
    return evaluate(fused, qrels, eval_depth);
}

EvalSummary combmnz_cell(const std::vector<RunSet>& runs, const Qrels& qrels,
                         const std::vector<std::string>& fusion, int eval_depth) {
    std::map<std::string, FusedList> fused;
    for (const auto& topic : fusion)
        fused[topic] = combmnz(topic_results(runs, topic), topic);
    return evaluate(fused, qrels, eval_depth);
}

void render_double(double value, std::ostream& out) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    out.write(buf, ptr - buf);
}

}  // namespace

CellEval run_cell(const std::vector<RunSet>& runs, const Qrels& qrels,
                  const std::vector<std::string>& training,
                  const std::vector<std::string>& fusion, int x, Variant variant,
                  int eval_depth) {
    for (const auto& topic : training)
        if (std::find(fusion.begin(), fusion.end(), topic) != fusion.end())
            throw ConfigError("topic " + topic + " is in both training and fusion sets");
    CellEval cell;
    cell.probfuse = probfuse_cell(runs, qrels, training, fusion, x, variant, eval_depth);
    cell.combmnz = combmnz_cell(runs, qrels, fusion, eval_depth);
    return cell;
}

ExperimentReport run_experiment(const ExperimentConfig& config,
                                const std::vector<RunSet>& runs, const Qrels& qrels,
                                int jobs) {
    config.validate();

    auto sorted_unique = [](auto values) {
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        return values;
    };
    const std::vector<double> t_values = sorted_unique(config.t_values);
    const std::vector<int> x_values = sorted_unique(config.x_values);
    std::vector<Variant> variants = config.variants;
    std::sort(variants.begin(), variants.end());
    variants.erase(std::unique(variants.begin(), variants.end()), variants.end());

    auto topics = collect_topics(runs);
    if (topics.empty()) throw DataError("input runs contain no topics");
    auto orderings = make_orderings(topics, config.num_orderings, config.rng_seed);

    // Train/fusion splits per (ordering, t).
    const std::size_t n_ord = orderings.size(), n_t = t_values.size();
    std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> splits;
    splits.reserve(n_ord * n_t);
    for (const auto& ordering : orderings)
        for (double t : t_values) splits.push_back(split_topics(ordering, t));

    // Task list: one CombMNZ evaluation per (ordering, t), one probFuse
    // evaluation per (ordering, t, variant, x).
    struct Task {
        std::size_t split;
        int var = -1;  // -1 = combmnz, else index into variants
        int x = 0;
    };
    std::vector<Task> tasks;
    for (std::size_t s = 0; s < splits.size(); ++s) {
        tasks.push_back(Task{s, -1, 0});
        for (int v = 0; v < static_cast<int>(variants.size()); ++v)
            for (int x : x_values) tasks.push_back(Task{s, v, x});
    }

    std::vector<std::pair<double, double>> scores(tasks.size());
    std::exception_ptr failure;
    auto run_task = [&](std::size_t i) {
        const Task& task = tasks[i];
        const auto& [training, fusion] = splits[task.split];
        EvalSummary summary =
            task.var < 0
                ? combmnz_cell(runs, qrels, fusion, config.eval_depth)
                : probfuse_cell(runs, qrels, training, fusion, task.x,
                                variants[task.var], config.eval_depth);
        scores[i] = {summary.map_score, summary.bpref_score};
    };

#ifdef FUSEKIT_HAVE_OPENMP
    if (jobs > 1) {
        const auto n_tasks = static_cast<std::int64_t>(tasks.size());
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
        for (std::int64_t i = 0; i < n_tasks; ++i) {
            try {
                run_task(static_cast<std::size_t>(i));
            } catch (...) {
#pragma omp critical
                if (!failure) failure = std::current_exception();
            }
        }
    } else
#endif
    {
        (void)jobs;
        for (std::size_t i = 0; i < tasks.size(); ++i) run_task(i);
    }
    if (failure) std::rethrow_exception(failure);

    // Index task results for report assembly.
    std::map<std::tuple<std::size_t, int, int>, std::pair<double, double>> by_key;
    for (std::size_t i = 0; i < tasks.size(); ++i)
        by_key[{tasks[i].split, tasks[i].var, tasks[i].x}] = scores[i];

    ExperimentReport report;
    for (std::size_t o = 0; o < n_ord; ++o) {
        for (std::size_t ti = 0; ti < n_t; ++ti) {
            std::size_t s = o * n_t + ti;
            for (int x : x_values) {
                auto mnz = by_key.at({s, -1, 0});
                report.cells.push_back(ReportCell{static_cast<int>(o + 1), t_values[ti],
                                                  x, "combmnz", "", mnz.first,
                                                  mnz.second});
                for (int v = 0; v < static_cast<int>(variants.size()); ++v) {
                    auto pf = by_key.at({s, v, x});
                    report.cells.push_back(ReportCell{
                        static_cast<int>(o + 1), t_values[ti], x, "probfuse",
                        to_string(variants[v]), pf.first, pf.second});
                }
            }
        }
    }

    // Aggregates: mean over orderings per (t, x, method, variant), then
    // grand mean over x per (t, method, variant).
    auto mean_over_orderings = [&](std::size_t ti, int var, int x) {
        double map_sum = 0.0, bpref_sum = 0.0;
        for (std::size_t o = 0; o < n_ord; ++o) {
            auto v = by_key.at({o * n_t + ti, var, var < 0 ? 0 : x});
            map_sum += v.first;
            bpref_sum += v.second;
        }
        return std::pair{map_sum / n_ord, bpref_sum / n_ord};
    };
    for (std::size_t ti = 0; ti < n_t; ++ti) {
        struct Method {
            int var;
            std::string method, variant;
        };
        std::vector<Method> methods{{-1, "combmnz", ""}};
        for (int v = 0; v < static_cast<int>(variants.size()); ++v)
            methods.push_back({v, "probfuse", to_string(variants[v])});
        for (int x : x_values)
            for (const auto& m : methods) {
                auto agg = mean_over_orderings(ti, m.var, x);
                report.aggregates.push_back(AggregateRow{t_values[ti], x, m.method,
                                                         m.variant, agg.first,
                                                         agg.second});
            }
        for (const auto& m : methods) {
            double map_sum = 0.0, bpref_sum = 0.0;
            for (int x : x_values) {
                auto agg = mean_over_orderings(ti, m.var, x);
                map_sum += agg.first;
                bpref_sum += agg.second;
            }
            auto nx = static_cast<double>(x_values.size());
            report.aggregates.push_back(AggregateRow{t_values[ti], -1, m.method,
                                                     m.variant, map_sum / nx,
                                                     bpref_sum / nx});
        }
    }
    return report;
}

ExperimentReport run_experiment(const ExperimentConfig& config, int jobs) {
    config.validate();
    std::vector<RunSet> runs;
    for (const auto& path : config.input_runs) {
        std::ifstream in(path);
        if (!in) throw DataError("cannot open run file '" + path + "'");
        try {
            runs.push_back(parse_run(in));
        } catch (const DataError& e) {
            throw DataError(path + ": " + e.what());
        }
    }
    truncate_runs(runs, config.input_depth);
    std::ifstream qin(config.qrels_path);
    if (!qin) throw DataError("cannot open qrels file '" + config.qrels_path + "'");
    Qrels qrels;
    try {
        qrels = parse_qrels(qin);
    } catch (const DataError& e) {
        throw DataError(config.qrels_path + ": " + e.what());
    }
    return run_experiment(config, runs, qrels, jobs);
}

void write_report_csv(const ExperimentReport& report, std::ostream& out) {
    out << "ordering,t,x,method,variant,map,bpref\n";
    for (const auto& cell : report.cells) {
        out << cell.ordering << ',';
        render_double(cell.t, out);
        out << ',' << cell.x << ',' << cell.method << ',' << cell.variant << ',';
        render_double(cell.map_score, out);
        out << ',';
        render_double(cell.bpref_score, out);
        out << '\n';
    }
    for (const auto& agg : report.aggregates) {
        out << "aggregate,";
        render_double(agg.t, out);
        out << ',';
        if (agg.x < 0)
            out << "all";
        else
            out << agg.x;
        out << ',' << agg.method << ',' << agg.variant << ',';
        render_double(agg.map_score, out);
        out << ',';
        render_double(agg.bpref_score, out);
        out << '\n';
    }
    if (!out) throw DataError("write failure while emitting report CSV");
}

std::vector<std::string> collect_topics(const std::vector<RunSet>& runs) {
    std::set<std::string> topics;
    for (const auto& run : runs)
        for (const auto& [topic, list] : run.lists) topics.insert(topic);
    return {topics.begin(), topics.end()};
}

void truncate_runs(std::vector<RunSet>& runs, int depth) {
    if (depth <= 0) return;
    for (auto& run : runs)
        for (auto& [topic, list] : run.lists)
            if (static_cast<int>(list.size()) > depth) list.entries.resize(depth);
}

}  // namespace fusekit
