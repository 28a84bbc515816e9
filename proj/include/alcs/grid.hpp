#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace alcs {

struct GridPos {
    int x = 0;  // column, 0-based
    int y = 0;  // row, 0-based

    bool operator==(const GridPos&) const = default;
};

struct GridPosHash {
    std::size_t operator()(const GridPos& p) const noexcept {
        return std::hash<int>{}(p.x * 1024 + p.y);
    }
};

enum class Action : std::uint8_t { up = 0, down = 1, left = 2, right = 3 };

inline constexpr int kNumActions = 4;

inline constexpr std::array<Action, 4> kAllActions = {Action::up, Action::down,
                                                      Action::left, Action::right};

inline GridPos moved(GridPos p, Action a) {
    switch (a) {
        case Action::up:    return {p.x, p.y - 1};
        case Action::down:  return {p.x, p.y + 1};
        case Action::left:  return {p.x - 1, p.y};
        case Action::right: return {p.x + 1, p.y};
    }
    return p;
}

const char* action_name(Action a);
Action action_from_name(const std::string& name);

// Index of a subtask in its environment's vocabulary. Sequences are ordered
// by temporal achievement; per-episode dedup bounds their length by |P|.
using SubtaskId = std::uint8_t;
using SubtaskSeq = std::vector<SubtaskId>;

std::string pos_to_string(GridPos p);
GridPos pos_from_string(const std::string& s);

}  // namespace alcs
