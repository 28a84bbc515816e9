#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "alcs/env.hpp"
#include "alcs/layout.hpp"
#include "alcs/task.hpp"

namespace testutil {

inline std::string layouts_dir() { return ALCS_LAYOUTS_DIR; }

inline alcs::LabeledGridEnv make_env(const std::string& task, std::uint64_t seed = 0) {
    return alcs::build_env(alcs::make_task(task, layouts_dir()), seed);
}

// 1x5 corridor with coffee and office cells; completes fast under any policy.
inline const char* kCorridorLayout =
    "name: corridor\n"
    "grid:\n"
    "#######\n"
    "#S.c.o#\n"
    "#######\n"
    "legend:\n"
    "c: c\n"
    "o: o\n";

// 4x4 open room with a single goal cell in a corner.
inline const char* kFourByFourLayout =
    "name: four_by_four\n"
    "grid:\n"
    "######\n"
    "#S...#\n"
    "#....#\n"
    "#....#\n"
    "#...g#\n"
    "######\n"
    "legend:\n"
    "g: g\n";

// Single floor cell; every move bumps a wall.
inline const char* kOneCellLayout =
    "name: one_cell\n"
    "grid:\n"
    "###\n"
    "#S#\n"
    "###\n"
    "legend:\n";

// Single-subtask task over an arbitrary layout: reaching the goal cell ends
// the episode with reward 1.
inline alcs::TaskSpec single_goal_task(alcs::Layout layout, const std::string& goal_name,
                                       int step_cap) {
    alcs::TaskSpec spec;
    spec.name = "reach_" + goal_name;
    spec.vocabulary = {goal_name};
    spec.layout = std::move(layout);
    spec.step_cap = step_cap;
    spec.rule = [](const alcs::SubtaskSeq&, std::optional<alcs::SubtaskId> fired) -> alcs::RewardOutcome {
        if (fired == alcs::SubtaskId{0}) return {1.0, true};
        return {};
    };
    return spec;
}

// Drives the agent along a BFS shortest path to `target`; returns the last
// outcome. The path is computed from the layout walls, independent of any
// learned table.
inline alcs::StepOutcome walk_to(alcs::LabeledGridEnv& env, alcs::GridPos target) {
    const alcs::Layout& lay = env.spec().layout;
    std::vector<int> dist = alcs::bfs_distances(lay, target);
    alcs::StepOutcome out{};
    out.next_state = env.position();
    while (!(env.position() == target)) {
        alcs::GridPos here = env.position();
        int best = dist[static_cast<std::size_t>(here.y) * lay.width + here.x];
        bool moved_once = false;
        for (alcs::Action a : alcs::kAllActions) {
            alcs::GridPos next = alcs::moved(here, a);
            if (!lay.in_bounds(next) || lay.is_wall(next)) continue;
            int d = dist[static_cast<std::size_t>(next.y) * lay.width + next.x];
            if (d >= 0 && d < best) {
                out = env.step(a);
                moved_once = true;
                break;
            }
        }
        if (!moved_once) throw std::runtime_error("walk_to: no progress toward target");
        if (out.terminal) break;
    }
    return out;
}

}  // namespace testutil
