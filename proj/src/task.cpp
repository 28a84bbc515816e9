#include "alcs/task.hpp"

#include <algorithm>
#include <stdexcept>

namespace alcs {

namespace {

bool has(const SubtaskSeq& seq, SubtaskId id) {
    return std::find(seq.begin(), seq.end(), id) != seq.end();
}

int index_of(const SubtaskSeq& seq, SubtaskId id) {
    auto it = std::find(seq.begin(), seq.end(), id);
    return it == seq.end() ? -1 : static_cast<int>(it - seq.begin());
}

struct TaskDef {
    const char* name;
    const char* layout;
    std::vector<std::string> vocab;
    int step_cap;
};

const std::vector<TaskDef>& task_defs() {
    static const std::vector<TaskDef> defs = {
        {"Coffee", "officeworld", {"c", "o"}, 1000},
        {"CoffeeMail", "officeworld", {"c", "m", "o"}, 1000},
        {"Collecting", "officeworld", {"A", "B", "C", "D", "o"}, 1000},
        {"Bonus", "officeworld", {"A", "B", "C", "D", "o"}, 1000},
        {"Plant", "minecraft", {"wood", "toolshed"}, 2000},
        {"Bridge", "minecraft", {"iron", "wood", "factory"}, 2000},
        {"Bed", "minecraft", {"wood", "toolshed", "grass", "workbench"}, 2000},
        {"Gem", "minecraft", {"wood", "workbench", "iron", "toolshed", "axe"}, 2000},
    };
    return defs;
}

const TaskDef& find_def(const std::string& name) {
    for (const auto& d : task_defs())
        if (name == d.name) return d;
    throw std::invalid_argument("unknown task '" + name + "'");
}

// Completion fires on the step whose label closes the task in order; an
// out-of-order visit burns that label for the episode (per-episode dedup)
// without ending it. Bonus is the exception: any office arrival ends the
// episode and pays per package.
RewardRule make_rule(const std::string& name, const TaskSpec& spec) {
    auto id = [&spec](const char* n) { return spec.id_of(n); };
    if (name == "Coffee") {
        SubtaskId c = id("c"), o = id("o");
        return [c, o](const SubtaskSeq& hist, std::optional<SubtaskId> fired) -> RewardOutcome {
            if (fired == o && has(hist, c)) return {1.0, true};
            return {};
        };
    }
    if (name == "CoffeeMail") {
        SubtaskId c = id("c"), m = id("m"), o = id("o");
        return [c, m, o](const SubtaskSeq& hist, std::optional<SubtaskId> fired) -> RewardOutcome {
            if (fired == o && has(hist, c) && has(hist, m)) return {1.0, true};
            return {};
        };
    }
    if (name == "Collecting") {
        SubtaskId a = id("A"), b = id("B"), cc = id("C"), d = id("D"), o = id("o");
        return [a, b, cc, d, o](const SubtaskSeq& hist, std::optional<SubtaskId> fired) -> RewardOutcome {
            if (fired == o && has(hist, a) && has(hist, b) && has(hist, cc) && has(hist, d))
                return {1.0, true};
            return {};
        };
    }
    if (name == "Bonus") {
        SubtaskId a = id("A"), b = id("B"), cc = id("C"), d = id("D"), o = id("o");
        return [a, b, cc, d, o](const SubtaskSeq& hist, std::optional<SubtaskId> fired) -> RewardOutcome {
            if (fired != o) return {};
            int packages = int(has(hist, a)) + int(has(hist, b)) + int(has(hist, cc)) + int(has(hist, d));
            return {double(packages) + (packages == 4 ? 5.0 : 0.0), true};
        };
    }
    if (name == "Plant") {
        SubtaskId wood = id("wood"), toolshed = id("toolshed");
        return [wood, toolshed](const SubtaskSeq& hist, std::optional<SubtaskId> fired) -> RewardOutcome {
            if (fired == toolshed && has(hist, wood)) return {1.0, true};
            return {};
        };
    }
    if (name == "Bridge") {
        SubtaskId iron = id("iron"), wood = id("wood"), factory = id("factory");
        return [iron, wood, factory](const SubtaskSeq& hist, std::optional<SubtaskId> fired) -> RewardOutcome {
            if (fired == factory && has(hist, iron) && has(hist, wood)) return {1.0, true};
            return {};
        };
    }
    if (name == "Bed") {
        SubtaskId wood = id("wood"), toolshed = id("toolshed"), grass = id("grass"),
                  workbench = id("workbench");
        return [wood, toolshed, grass, workbench](const SubtaskSeq& hist,
                                                  std::optional<SubtaskId> fired) -> RewardOutcome {
            if (fired == workbench && has(hist, wood) && has(hist, toolshed) && has(hist, grass) &&
                index_of(hist, wood) < index_of(hist, toolshed))
                return {1.0, true};
            return {};
        };
    }
    if (name == "Gem") {
        SubtaskId wood = id("wood"), workbench = id("workbench"), iron = id("iron"),
                  toolshed = id("toolshed"), axe = id("axe");
        return [wood, workbench, iron, toolshed, axe](const SubtaskSeq& hist,
                                                      std::optional<SubtaskId> fired) -> RewardOutcome {
            if (fired == axe && has(hist, wood) && has(hist, workbench) && has(hist, iron) &&
                has(hist, toolshed) && index_of(hist, wood) < index_of(hist, workbench) &&
                index_of(hist, workbench) < index_of(hist, toolshed) &&
                index_of(hist, iron) < index_of(hist, toolshed))
                return {1.0, true};
            return {};
        };
    }
    throw std::invalid_argument("unknown task '" + name + "'");
}

}  // namespace

SubtaskId TaskSpec::id_of(const std::string& subtask_name) const {
    for (std::size_t i = 0; i < vocabulary.size(); ++i)
        if (vocabulary[i] == subtask_name) return static_cast<SubtaskId>(i);
    throw std::invalid_argument("subtask '" + subtask_name + "' not in vocabulary of task " + name);
}

const std::vector<std::string>& task_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& d : task_defs()) out.emplace_back(d.name);
        return out;
    }();
    return names;
}

bool is_task_name(const std::string& name) {
    const auto& names = task_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

TaskSpec make_task_with_layout(const std::string& name, Layout layout) {
    const TaskDef& def = find_def(name);
    TaskSpec spec;
    spec.name = def.name;
    spec.vocabulary = def.vocab;
    spec.layout = std::move(layout);
    spec.step_cap = def.step_cap;
    spec.rule = make_rule(spec.name, spec);
    return spec;
}

TaskSpec make_task(const std::string& name, const std::string& layouts_dir) {
    const TaskDef& def = find_def(name);
    return make_task_with_layout(name, load_layout(layouts_dir + "/" + def.layout + ".layout"));
}

}  // namespace alcs
