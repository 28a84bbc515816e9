#include "alcs/env.hpp"

#include <stdexcept>

namespace alcs {

LabeledGridEnv::LabeledGridEnv(TaskSpec spec, std::uint64_t seed)
    : spec_(std::move(spec)), seed_(seed) {
    const Layout& lay = spec_.layout;
    if (spec_.step_cap <= 0) throw std::invalid_argument("task " + spec_.name + ": step_cap must be > 0");
    if (!lay.in_bounds(lay.start) || lay.is_wall(lay.start))
        throw std::invalid_argument("task " + spec_.name + ": start on wall");
    if (lay.width > 255 || lay.height > 255)
        throw std::invalid_argument("task " + spec_.name + ": layout exceeds 255x255");
    if (spec_.vocabulary.size() > 15)
        throw std::invalid_argument("task " + spec_.name + ": vocabulary exceeds 15 subtasks");

    cell_label_.assign(static_cast<std::size_t>(lay.width) * lay.height, -1);
    std::vector<int> cover(spec_.vocabulary.size(), 0);
    std::vector<int> dist = bfs_distances(lay, lay.start);
    for (const auto& [cell, name] : lay.labels) {
        GridPos p{cell.first, cell.second};
        if (lay.is_wall(p))
            throw std::invalid_argument("task " + spec_.name + ": label cell '" + name + "' on wall at " +
                                        pos_to_string(p));
        for (std::size_t i = 0; i < spec_.vocabulary.size(); ++i) {
            if (spec_.vocabulary[i] != name) continue;
            cell_label_[cell_index(p)] = static_cast<std::int16_t>(i);
            cover[i] += 1;
            if (dist[cell_index(p)] < 0)
                throw std::invalid_argument("task " + spec_.name + ": unreachable label cell '" + name +
                                            "' at " + pos_to_string(p));
        }
    }
    for (std::size_t i = 0; i < spec_.vocabulary.size(); ++i)
        if (cover[i] == 0)
            throw std::invalid_argument("task " + spec_.name + ": subtask '" + spec_.vocabulary[i] +
                                        "' has no label cell");
    achieved_mask_.assign(spec_.vocabulary.size(), 0);
}

GridPos LabeledGridEnv::reset() {
    pos_ = spec_.layout.start;
    steps_ = 0;
    terminal_ = false;
    was_reset_ = true;
    achieved_.clear();
    std::fill(achieved_mask_.begin(), achieved_mask_.end(), 0);
    return pos_;
}

StepOutcome LabeledGridEnv::step(Action a) {
    if (!was_reset_) throw std::logic_error("step before reset");
    if (terminal_) throw std::logic_error("step after terminal");

    GridPos target = moved(pos_, a);
    if (!spec_.layout.in_bounds(target) || spec_.layout.is_wall(target)) target = pos_;
    steps_ += 1;

    std::optional<SubtaskId> fired;
    std::int16_t raw = cell_label_[cell_index(target)];
    if (raw >= 0 && !achieved_mask_[static_cast<std::size_t>(raw)])
        fired = static_cast<SubtaskId>(raw);

    RewardOutcome out = spec_.rule(achieved_, fired);
    if (fired) {
        achieved_mask_[*fired] = 1;
        achieved_.push_back(*fired);
    }
    pos_ = target;
    terminal_ = out.terminal || steps_ >= spec_.step_cap;
    return {target, out.reward, terminal_, fired};
}

std::optional<SubtaskId> LabeledGridEnv::label(GridPos state) const {
    if (!spec_.layout.in_bounds(state))
        throw std::invalid_argument("label: state " + pos_to_string(state) + " out of bounds");
    std::int16_t raw = cell_label_[cell_index(state)];
    if (raw >= 0 && !achieved_mask_[static_cast<std::size_t>(raw)]) return static_cast<SubtaskId>(raw);
    return std::nullopt;
}

std::optional<SubtaskId> LabeledGridEnv::cell_label(GridPos state) const {
    if (!spec_.layout.in_bounds(state))
        throw std::invalid_argument("cell_label: state " + pos_to_string(state) + " out of bounds");
    std::int16_t raw = cell_label_[cell_index(state)];
    if (raw >= 0) return static_cast<SubtaskId>(raw);
    return std::nullopt;
}

LabeledGridEnv build_env(TaskSpec spec, std::uint64_t seed) {
    return LabeledGridEnv(std::move(spec), seed);
}

}  // namespace alcs
