#pragma once

#include "alcs/trainer.hpp"

namespace alcs {

struct BaselineConfig {
    std::uint64_t episodes = 1000000000;
    double alpha = 0.1;
    double gamma = 0.95;
    double epsilon = 0.2;
    int step_cap_override = 0;
    std::uint64_t seed = 0;
    std::uint64_t eval_every = 1000;
    int eval_episodes = 20;
    std::uint64_t max_env_steps = 0;
    int option_timeout = 100;  // hrl: forced re-decision after this many steps
    int relabel_count = 1;     // her: update passes per achieved-goal segment

    void validate() const;
};

struct FlatResult {
    QTable q{2};  // (state, action)
    RunLog log;
};

struct OptionResult {
    QTable q_opt{2};  // (state, option)
    QTable q_low{3};  // (state, subtask, action), same machinery as the low level
    RunLog log;
};

struct GoalResult {
    QTable q{3};  // (state, goal, action)
    RunLog log;
};

struct OptionEvent {
    std::uint64_t episode = 0;
    std::uint64_t t = 0;  // env step at which the option was (re)chosen
    GridPos s{};
    SubtaskId option = 0;
};

struct OptionUpdateEvent {
    GridPos s{};
    SubtaskId option = 0;
    double target = 0.0;
};

struct BaselineHooks {
    std::function<void(const OptionEvent&)> on_option_start;
    std::function<void(const OptionUpdateEvent&)> on_option_update;
    std::function<void(const RunLogRow&)> on_eval_row;
};

// Standard one-step tabular Q-learning on raw cells. Structurally label-blind:
// the training loop runs against a view without the labeling function.
FlatResult train_flat_q(LabeledGridEnv env, const BaselineConfig& cfg,
                        const BaselineHooks* hooks = nullptr);

// Options over subtasks: the high level picks an option at option boundaries
// (own subtask achieved, timeout, or episode end) and is updated SMDP-style
// with the accumulated discounted reward and a gamma^k bootstrap.
OptionResult train_hrl(LabeledGridEnv env, const BaselineConfig& cfg,
                       const BaselineHooks* hooks = nullptr);

// Like hrl but the high level re-decides every step (one-step updates).
OptionResult train_interrupting(LabeledGridEnv env, const BaselineConfig& cfg,
                                const BaselineHooks* hooks = nullptr);

// Goal-conditioned Q with achieved-goal relabeling: the behavior goal is
// uniform per episode; each achieved label relabels the segment since the
// previous achievement with that label as the goal.
GoalResult train_her(LabeledGridEnv env, const BaselineConfig& cfg,
                     const BaselineHooks* hooks = nullptr);

double evaluate_flat(LabeledGridEnv& env, const QTable& q, int episodes, std::mt19937_64& rng);
double evaluate_options(LabeledGridEnv& env, const QTable& q_opt, const QTable& q_low, int episodes,
                        std::mt19937_64& rng, bool interrupt_every_step, int option_timeout);
double evaluate_her(LabeledGridEnv& env, const QTable& q, int episodes, std::mt19937_64& rng);

}  // namespace alcs
