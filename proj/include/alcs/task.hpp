#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "alcs/layout.hpp"

namespace alcs {

struct RewardOutcome {
    double reward = 0.0;
    bool terminal = false;
};

// Pure function of the episode achievement history (in temporal order, ids
// into the task vocabulary) and the label fired by the current step, if any.
using RewardRule =
    std::function<RewardOutcome(const SubtaskSeq& achieved_before, std::optional<SubtaskId> fired)>;

struct TaskSpec {
    std::string name;
    std::vector<std::string> vocabulary;  // fixed order; SubtaskId = index
    Layout layout;
    RewardRule rule;
    int step_cap = 0;

    SubtaskId id_of(const std::string& subtask_name) const;
};

// Names of the eight shipped tasks, in fixed order.
const std::vector<std::string>& task_names();
bool is_task_name(const std::string& name);

// Builds a shipped task, loading its layout from `layouts_dir`.
TaskSpec make_task(const std::string& name, const std::string& layouts_dir);

// Same, but with a caller-provided layout (used by tests and layout swaps).
TaskSpec make_task_with_layout(const std::string& name, Layout layout);

}  // namespace alcs
