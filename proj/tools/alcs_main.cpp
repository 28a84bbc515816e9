#include <cstdio>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "alcs/harness.hpp"
#include "alcs/text.hpp"

namespace {

struct CommonArgs {
    std::string task;
    std::string method = "alcs";
    std::uint64_t seed = 0;
    std::string out;
};

// --seed/--out/--task/--method are accepted uniformly by every subcommand.
void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--task", args.task, "Task name (see list-tasks)");
    cmd->add_option("--method", args.method, "alcs, alcs_wo_m, alcs_wo_s, alcs_wo_a, flat_q, hrl, interrupting, her");
    cmd->add_option("--seed", args.seed, "Base random seed");
    cmd->add_option("--out", args.out, "Output path");
}

void add_knobs(CLI::App* cmd, alcs::ExperimentSpec& spec) {
    cmd->add_option("--episodes", spec.train.episodes, "Episode budget M");
    cmd->add_option("--max-steps", spec.train.max_env_steps, "Environment step budget (0 = none)");
    cmd->add_option("--eval-every", spec.train.eval_every, "Env steps between greedy evaluations");
    cmd->add_option("--eval-episodes", spec.train.eval_episodes, "Episodes per evaluation");
    cmd->add_option("--alpha", spec.train.alpha, "Low-level learning rate");
    cmd->add_option("--beta", spec.train.beta, "High-level learning rate");
    cmd->add_option("--gamma", spec.train.gamma, "Discount factor");
    cmd->add_option("--epsilon", spec.train.epsilon, "Low-level exploration rate");
    cmd->add_option("--step-cap", spec.train.step_cap_override, "Per-episode step cap override");
    cmd->add_flag("--no-multi-experience", spec.train.no_multi_experience, "Ablation: single-subtask Q_l updates");
    cmd->add_flag("--no-sequence", spec.train.no_sequence, "Ablation: drop the sequence from Q_h keys");
    cmd->add_flag("--no-assumed-choice", spec.train.no_assumed_choice, "Ablation: keep chosen subtasks");
    cmd->add_option("--option-timeout", spec.option_timeout, "hrl: option timeout");
    cmd->add_option("--relabel-count", spec.relabel_count, "her: relabel passes per segment");
    cmd->add_option("--layouts", spec.layouts_dir, "Layout directory");
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Two-level tabular RL lab: subtask-composing agent, baselines, benchmarks, tooling"};
    app.require_subcommand(1);

    // list-tasks
    auto* cmd_list = app.add_subcommand("list-tasks", "List the shipped tasks");
    CommonArgs list_args;
    add_common(cmd_list, list_args);
    std::string list_layouts = "layouts";
    cmd_list->add_option("--layouts", list_layouts, "Layout directory");

    // train
    auto* cmd_train = app.add_subcommand("train", "Train a single run, write its CSV and snapshot");
    CommonArgs train_args;
    add_common(cmd_train, train_args);
    alcs::ExperimentSpec train_spec;
    add_knobs(cmd_train, train_spec);

    // run-experiment
    auto* cmd_exp = app.add_subcommand("run-experiment", "Run a multi-seed experiment");
    CommonArgs exp_args;
    add_common(cmd_exp, exp_args);
    alcs::ExperimentSpec exp_overrides;
    std::string spec_path;
    int exp_runs = -1, exp_trim = -1;
    cmd_exp->add_option("--spec", spec_path, "Experiment spec file");
    cmd_exp->add_option("--runs", exp_runs, "Number of seeded runs");
    cmd_exp->add_option("--trim", exp_trim, "Runs trimmed from each tail");
    add_knobs(cmd_exp, exp_overrides);

    // aggregate
    auto* cmd_agg = app.add_subcommand("aggregate", "Aggregate per-run CSVs into a trimmed curve");
    CommonArgs agg_args;
    add_common(cmd_agg, agg_args);
    std::vector<std::string> agg_inputs;
    int agg_trim = 2;
    cmd_agg->add_option("csvs", agg_inputs, "Per-run CSV files")->required();
    cmd_agg->add_option("--trim", agg_trim, "Runs dropped from each tail");

    // plot
    auto* cmd_plot = app.add_subcommand("plot", "Render aggregate curves to an SVG");
    CommonArgs plot_args;
    add_common(cmd_plot, plot_args);
    std::vector<std::string> plot_inputs;
    cmd_plot->add_option("series", plot_inputs, "Aggregate CSVs, each as name=path or path")->required();

    // explain
    auto* cmd_explain = app.add_subcommand("explain", "Explain a trained snapshot at a state");
    CommonArgs explain_args;
    add_common(cmd_explain, explain_args);
    std::string snapshot_dir, seq_text, explain_layouts = "layouts";
    int ex_x = 0, ex_y = 0;
    cmd_explain->add_option("--snapshot", snapshot_dir, "Snapshot directory")->required();
    cmd_explain->add_option("--x", ex_x, "Agent column")->required();
    cmd_explain->add_option("--y", ex_y, "Agent row")->required();
    cmd_explain->add_option("--seq", seq_text, "Achieved sequence, e.g. c-m (default empty)");
    cmd_explain->add_option("--layouts", explain_layouts, "Layout directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (cmd_list->parsed()) {
        std::printf("%-12s %-13s %-6s %s\n", "task", "layout", "cap", "vocabulary");
        for (const auto& name : alcs::task_names()) {
            alcs::TaskSpec t = alcs::make_task(name, list_layouts);
            std::string vocab;
            for (std::size_t i = 0; i < t.vocabulary.size(); ++i) {
                if (i) vocab += ",";
                vocab += t.vocabulary[i];
            }
            std::printf("%-12s %-13s %-6d %s\n", t.name.c_str(), t.layout.name.c_str(), t.step_cap,
                        vocab.c_str());
        }
        return 0;
    }

    if (cmd_train->parsed()) {
        if (train_args.task.empty()) throw std::invalid_argument("train: --task is required");
        if (train_args.out.empty()) throw std::invalid_argument("train: --out is required");
        train_spec.task = train_args.task;
        train_spec.method = alcs::method_from_name(train_args.method);
        train_spec.base_seed = train_args.seed;
        train_spec.out_dir = train_args.out;
        train_spec.n_runs = 1;
        train_spec.trim = 0;
        train_spec.validate();
        std::filesystem::create_directories(train_spec.out_dir);
        auto rows = alcs::run_single(
            train_spec, train_spec.base_seed,
            train_spec.out_dir + "/snap_seed" + std::to_string(train_spec.base_seed),
            train_spec.out_dir + "/run_seed" + std::to_string(train_spec.base_seed) + ".csv");
        if (!rows.empty())
            std::printf("trained %s/%s seed %llu: final eval return %s after %llu env steps\n",
                        train_spec.task.c_str(), alcs::method_name(train_spec.method),
                        static_cast<unsigned long long>(train_spec.base_seed),
                        alcs::format_double(rows.back().eval_return).c_str(),
                        static_cast<unsigned long long>(rows.back().env_steps));
        return 0;
    }

    if (cmd_exp->parsed()) {
        alcs::ExperimentSpec spec;
        if (!spec_path.empty()) spec = alcs::load_experiment_spec(spec_path);
        // command line overrides the file
        if (!exp_args.task.empty()) spec.task = exp_args.task;
        if (cmd_exp->count("--method")) spec.method = alcs::method_from_name(exp_args.method);
        if (cmd_exp->count("--seed")) spec.base_seed = exp_args.seed;
        if (!exp_args.out.empty()) spec.out_dir = exp_args.out;
        if (exp_runs >= 0) spec.n_runs = exp_runs;
        if (exp_trim >= 0) spec.trim = exp_trim;
        if (cmd_exp->count("--episodes")) spec.train.episodes = exp_overrides.train.episodes;
        if (cmd_exp->count("--max-steps")) spec.train.max_env_steps = exp_overrides.train.max_env_steps;
        if (cmd_exp->count("--eval-every")) spec.train.eval_every = exp_overrides.train.eval_every;
        if (cmd_exp->count("--eval-episodes")) spec.train.eval_episodes = exp_overrides.train.eval_episodes;
        if (cmd_exp->count("--alpha")) spec.train.alpha = exp_overrides.train.alpha;
        if (cmd_exp->count("--beta")) spec.train.beta = exp_overrides.train.beta;
        if (cmd_exp->count("--gamma")) spec.train.gamma = exp_overrides.train.gamma;
        if (cmd_exp->count("--epsilon")) spec.train.epsilon = exp_overrides.train.epsilon;
        if (cmd_exp->count("--step-cap")) spec.train.step_cap_override = exp_overrides.train.step_cap_override;
        if (cmd_exp->count("--no-multi-experience")) spec.train.no_multi_experience = true;
        if (cmd_exp->count("--no-sequence")) spec.train.no_sequence = true;
        if (cmd_exp->count("--no-assumed-choice")) spec.train.no_assumed_choice = true;
        if (cmd_exp->count("--option-timeout")) spec.option_timeout = exp_overrides.option_timeout;
        if (cmd_exp->count("--relabel-count")) spec.relabel_count = exp_overrides.relabel_count;
        if (cmd_exp->count("--layouts")) spec.layouts_dir = exp_overrides.layouts_dir;
        alcs::CurveBundle bundle = alcs::run_experiment(spec);
        std::printf("experiment %s/%s: %d runs -> %s/aggregate.csv (final mean %s)\n",
                    spec.task.c_str(), alcs::method_name(spec.method), spec.n_runs,
                    spec.out_dir.c_str(),
                    alcs::format_double(bundle.aggregate.back().mean).c_str());
        return 0;
    }

    if (cmd_agg->parsed()) {
        if (agg_args.out.empty()) throw std::invalid_argument("aggregate: --out is required");
        std::vector<std::vector<alcs::RunLogRow>> curves;
        for (const auto& path : agg_inputs) curves.push_back(alcs::read_run_csv(path));
        alcs::write_aggregate_csv(agg_args.out, alcs::aggregate(curves, agg_trim));
        std::printf("aggregated %zu runs (trim %d) -> %s\n", curves.size(), agg_trim,
                    agg_args.out.c_str());
        return 0;
    }

    if (cmd_plot->parsed()) {
        if (plot_args.out.empty()) throw std::invalid_argument("plot: --out is required");
        std::vector<std::pair<std::string, std::vector<alcs::AggRow>>> series;
        for (const auto& input : plot_inputs) {
            auto eq = input.find('=');
            std::string name = eq == std::string::npos
                                   ? std::filesystem::path(input).stem().string()
                                   : input.substr(0, eq);
            std::string path = eq == std::string::npos ? input : input.substr(eq + 1);
            series.emplace_back(name, alcs::read_aggregate_csv(path));
        }
        alcs::write_svg(series, plot_args.out);
        std::printf("plotted %zu series -> %s\n", series.size(), plot_args.out.c_str());
        return 0;
    }

    if (cmd_explain->parsed()) {
        if (explain_args.task.empty()) throw std::invalid_argument("explain: --task is required");
        alcs::TaskSpec task = alcs::make_task(explain_args.task, explain_layouts);
        alcs::SubtaskSeq seq = alcs::seq_from_string(seq_text, task.vocabulary);
        std::string text =
            alcs::explain_snapshot(snapshot_dir, task, alcs::GridPos{ex_x, ex_y}, seq);
        std::fputs(text.c_str(), stdout);
        if (!explain_args.out.empty()) alcs::write_text_file(explain_args.out, text);
        return 0;
    }

    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const alcs::RunFailure& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::logic_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
