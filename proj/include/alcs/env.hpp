#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "alcs/task.hpp"

namespace alcs {

struct StepOutcome {
    GridPos next_state{};
    double reward = 0.0;
    bool terminal = false;
    std::optional<SubtaskId> raw_label;  // label of next_state after per-episode dedup
};

// A deterministic labeled gridworld MDP for one task. The MDP state is the
// agent cell; all task progress lives in the episode achievement history.
// Single-owner: copy the environment to get an independent instance.
class LabeledGridEnv {
public:
    LabeledGridEnv(TaskSpec spec, std::uint64_t seed);

    // Start of an episode: agent at start, achievement history and label
    // dedup cleared, step counter 0. Idempotent.
    GridPos reset();

    // One deterministic move; walls are no-ops that still consume a step.
    StepOutcome step(Action a);

    // Label of `state` under the current episode's dedup, or none.
    std::optional<SubtaskId> label(GridPos state) const;

    // Raw cell label, ignoring dedup: the subtask whose cell this is. Feeds
    // the stationary low-level reward; the deduped label drives everything
    // episode-scoped (sequences, flushes, reward rules).
    std::optional<SubtaskId> cell_label(GridPos state) const;

    const std::vector<std::string>& vocabulary() const { return spec_.vocabulary; }
    std::size_t vocab_size() const { return spec_.vocabulary.size(); }
    const std::string& subtask_name(SubtaskId id) const { return spec_.vocabulary[id]; }

    const TaskSpec& spec() const { return spec_; }
    std::uint64_t seed() const { return seed_; }
    int step_cap() const { return spec_.step_cap; }
    GridPos position() const { return pos_; }
    bool terminal() const { return terminal_; }
    int steps_taken() const { return steps_; }
    const SubtaskSeq& achieved() const { return achieved_; }

private:
    int cell_index(GridPos p) const { return p.y * spec_.layout.width + p.x; }

    TaskSpec spec_;
    std::uint64_t seed_ = 0;
    std::vector<std::int16_t> cell_label_;  // SubtaskId per cell, -1 if none
    std::vector<std::uint8_t> achieved_mask_;
    SubtaskSeq achieved_;
    GridPos pos_{};
    int steps_ = 0;
    bool terminal_ = false;
    bool was_reset_ = false;
};

// Validates the task's layout invariants and returns an un-reset environment.
// Identical (spec, seed) yields bit-identical trajectories under identical
// action streams.
LabeledGridEnv build_env(TaskSpec spec, std::uint64_t seed);

}  // namespace alcs
