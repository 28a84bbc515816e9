#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "alcs/env.hpp"
#include "alcs/highlevel.hpp"
#include "alcs/interpret.hpp"
#include "alcs/lowlevel.hpp"

namespace alcs {

struct TrainConfig {
    std::uint64_t episodes = 1000000000;  // M; usually bounded by max_env_steps instead
    double alpha = 0.1;                   // low-level learning rate
    double beta = 0.1;                    // high-level learning rate
    double gamma = 0.95;                  // shared discount
    double epsilon = 0.2;                 // low-level exploration rate
    int step_cap_override = 0;            // 0 = task default
    std::uint64_t seed = 0;
    std::uint64_t eval_every = 1000;      // env steps between greedy evaluations (0 = never)
    int eval_episodes = 20;
    std::uint64_t max_env_steps = 0;      // stop at the first episode boundary past this (0 = off)

    bool no_multi_experience = false;  // w/o M: single experience for the chosen subtask
    bool no_sequence = false;          // w/o S: Q_h keyed on (state, subtask) only
    bool no_assumed_choice = false;    // w/o A: keep chosen subtasks, flush every step

    void validate() const;
};

struct RunLogRow {
    std::uint64_t env_steps = 0;
    double eval_return = 0.0;
    std::uint64_t episode = 0;
};

struct RunLog {
    std::vector<RunLogRow> rows;
};

// Test/telemetry instrumentation; all members optional.
struct StepEvent {
    std::uint64_t episode = 0;
    std::uint64_t t = 0;
    GridPos s{};
    SubtaskSeq seq_before;
    SubtaskId p_chosen = 0;
    Action a = Action::up;
    GridPos s_next{};
    double r = 0.0;
    std::optional<SubtaskId> label;
    bool terminal = false;
};

struct TrainHooks {
    std::function<void(const StepEvent&)> on_step;
    HighUpdateObserver on_high_update;
    std::function<void(const RunLogRow&)> on_eval_row;
};

struct TrainResult {
    QTable q_low{3};   // (state, subtask, action)
    QTable q_high{3};  // (state, sequence, subtask)
    RecordTree tree;
    RunLog log;
};

// Runs the full two-level training loop on a private copy of env: per step
// greedy subtask choice, epsilon-greedy action, online Q_l update, experience
// recording with assumed-choice relabeling; per episode end, the batch Q_h
// update. Deterministic given (env spec, env seed, config seed).
TrainResult train(LabeledGridEnv env, const TrainConfig& cfg, const TrainHooks* hooks = nullptr);

// Mean undiscounted return of greedy episodes (epsilon = 0, ties from rng),
// with no learning and no tree writes. seq_in_keys must match how q_high was
// trained (false for the no-sequence ablation).
double evaluate(LabeledGridEnv& env, const QTable& q_low, const QTable& q_high, int episodes,
                std::mt19937_64& rng, bool seq_in_keys = true);

}  // namespace alcs
