#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "alcs/baselines.hpp"
#include "alcs/snapshot.hpp"
#include "alcs/trainer.hpp"

namespace alcs {

enum class Method {
    alcs,
    alcs_wo_m,
    alcs_wo_s,
    alcs_wo_a,
    flat_q,
    hrl,
    interrupting,
    her,
};

const char* method_name(Method m);
Method method_from_name(const std::string& name);

struct ExperimentSpec {
    std::string task;
    Method method = Method::alcs;
    int n_runs = 20;
    int trim = 2;  // runs dropped from each tail at every eval point
    std::uint64_t base_seed = 0;
    TrainConfig train;        // numeric knobs shared by all methods
    int option_timeout = 100; // hrl extra
    int relabel_count = 1;    // her extra
    std::string out_dir;
    std::string layouts_dir = "layouts";

    void validate() const;
};

ExperimentSpec parse_experiment_spec(const std::string& text);
ExperimentSpec load_experiment_spec(const std::string& path);
std::string experiment_spec_to_text(const ExperimentSpec& spec);

struct AggRow {
    std::uint64_t env_steps = 0;
    double mean = 0.0;
    double lower = 0.0;
    double upper = 0.0;
};

struct CurveBundle {
    std::vector<std::vector<RunLogRow>> runs;  // one step-aligned curve per seed
    std::vector<AggRow> aggregate;
};

// A worker-pool run failed; carries the offending seed.
struct RunFailure : std::runtime_error {
    RunFailure(std::uint64_t seed_, const std::string& what_)
        : std::runtime_error("run with seed " + std::to_string(seed_) + " failed: " + what_),
          seed(seed_) {}
    std::uint64_t seed;
};

// Runs n_runs seeded runs (seeds base_seed..base_seed+n-1) in a worker pool
// capped by ALCS_LAB_THREADS, writing per-run CSVs, per-run snapshots and the
// aggregate CSV under spec.out_dir. Pure function of (spec, code version).
CurveBundle run_experiment(const ExperimentSpec& spec);

// Trains a single seeded run in-process (no files); used by run_experiment
// and the acceptance experiments.
std::vector<RunLogRow> run_single(const ExperimentSpec& spec, std::uint64_t seed,
                                  const std::string& snapshot_dir = "",
                                  const std::string& csv_path = "");

// Per eval point: sort the run values, drop `trim` from each end, emit
// mean/min/max of the remainder. All curves must share the eval grid.
std::vector<AggRow> aggregate(const std::vector<std::vector<RunLogRow>>& curves, int trim);

void write_run_csv(const std::string& path, const std::vector<RunLogRow>& rows);
std::vector<RunLogRow> read_run_csv(const std::string& path);
void write_aggregate_csv(const std::string& path, const std::vector<AggRow>& rows);
std::vector<AggRow> read_aggregate_csv(const std::string& path);

// One SVG: trimmed-mean line plus shaded bound band per named series.
std::string render_svg(const std::vector<std::pair<std::string, std::vector<AggRow>>>& series);
void write_svg(const std::vector<std::pair<std::string, std::vector<AggRow>>>& series,
               const std::string& path);

// Loads an alcs snapshot and renders the three-part explanation for (state,
// seq); deterministic via a fixed explain seed.
std::string explain_snapshot(const std::string& snapshot_dir, const TaskSpec& task, GridPos state,
                             const SubtaskSeq& seq);

// Worker pool width: ALCS_LAB_THREADS if set, else hardware concurrency.
int worker_pool_width(int n_jobs);

}  // namespace alcs
