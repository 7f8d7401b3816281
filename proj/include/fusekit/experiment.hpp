#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "fusekit/evaluation.hpp"
#include "fusekit/fusion_core.hpp"
#include "fusekit/trec_io.hpp"

namespace fusekit {

struct ExperimentConfig {
    std::vector<std::string> input_runs;
    std::string qrels_path;
    std::vector<double> t_values{10, 20, 30, 40, 50};
    std::vector<int> x_values{2,  4,  6,  8,   10,  15,  20,  25,  30,
                              40, 50, 100, 150, 200, 250, 300, 400, 500};
    int num_orderings = 5;
    std::uint64_t rng_seed = 1;
    int eval_depth = 1000;
    int input_depth = 1000;  // 0 = untruncated
    std::vector<Variant> variants{Variant::All, Variant::Judged};

    void validate() const;
};

/// Parse a flat key=value config file. All keys optional with the
/// defaults above except input_runs and qrels_path.
ExperimentConfig parse_experiment_config(std::istream& in);

/// One grid cell: method is "combmnz" or "probfuse"; variant is
/// "all"/"judged" for probfuse and empty for combmnz. CombMNZ does not
/// depend on x, so its cell values repeat across x for a fixed
/// (ordering, t).
struct ReportCell {
    int ordering = 0;  // 1-based
    double t = 0.0;
    int x = 0;
    std::string method;
    std::string variant;
    double map_score = 0.0;
    double bpref_score = 0.0;
};

/// Aggregate over orderings for one (t, x, method, variant); x = -1
/// marks the grand mean over all x values as well.
struct AggregateRow {
    double t = 0.0;
    int x = 0;
    std::string method;
    std::string variant;
    double map_score = 0.0;
    double bpref_score = 0.0;
};

struct ExperimentReport {
    std::vector<ReportCell> cells;
    std::vector<AggregateRow> aggregates;
};

/// n permutations of the topic list via Fisher-Yates over a single
/// mt19937_64 seeded with `seed` (modulo reduction); identical output on
/// every platform for the same seed.
std::vector<std::vector<std::string>> make_orderings(
    const std::vector<std::string>& topics, int n, std::uint64_t seed);

/// First round(t_percent/100 * |topics|) topics (half-up) become the
/// training set, the rest the fusion set.
std::pair<std::vector<std::string>, std::vector<std::string>> split_topics(
    const std::vector<std::string>& ordered_topics, double t_percent);

struct CellEval {
    EvalSummary probfuse;
    EvalSummary combmnz;
};

/// Train per-system profiles on the training topics, fuse the fusion
/// topics with probFuse and CombMNZ, and evaluate both over the fusion
/// topics only.
CellEval run_cell(const std::vector<RunSet>& runs, const Qrels& qrels,
                  const std::vector<std::string>& training,
                  const std::vector<std::string>& fusion, int x, Variant variant,
                  int eval_depth);

/// Full (ordering x t x x x method) grid over pre-parsed inputs.
/// jobs <= 1 runs the serial reference path; jobs > 1 evaluates grid
/// cells in parallel with OpenMP. Output is identical either way.
ExperimentReport run_experiment(const ExperimentConfig& config,
                                const std::vector<RunSet>& runs, const Qrels& qrels,
                                int jobs = 1);

/// Convenience wrapper that reads and validates all input files before
/// computing any cell.
ExperimentReport run_experiment(const ExperimentConfig& config, int jobs = 1);

/// CSV: header `ordering,t,x,method,variant,map,bpref`, cell rows in
/// (ordering, t, x, method, variant) order, then aggregate rows with
/// `aggregate` in the ordering column (x column `all` for grand means).
/// Scores render in shortest round-trip form.
void write_report_csv(const ExperimentReport& report, std::ostream& out);

/// Sorted union of topic ids across all runs.
std::vector<std::string> collect_topics(const std::vector<RunSet>& runs);

/// Drop entries below the given depth in every list (0 = keep all).
void truncate_runs(std::vector<RunSet>& runs, int depth);

}  // namespace fusekit
