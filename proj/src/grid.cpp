#include "alcs/grid.hpp"

#include <stdexcept>

#include "alcs/text.hpp"

namespace alcs {

const char* action_name(Action a) {
    switch (a) {
        case Action::up: return "up";
        case Action::down: return "down";
        case Action::left: return "left";
        case Action::right: return "right";
    }
    return "?";
}

Action action_from_name(const std::string& name) {
    for (Action a : kAllActions)
        if (name == action_name(a)) return a;
    throw std::invalid_argument("unknown action '" + name + "'");
}

std::string pos_to_string(GridPos p) {
    return std::to_string(p.x) + "," + std::to_string(p.y);
}

GridPos pos_from_string(const std::string& s) {
    auto parts = split(s, ',');
    if (parts.size() != 2) throw std::invalid_argument("bad position '" + s + "', want x,y");
    return {static_cast<int>(parse_int(trim(parts[0]))), static_cast<int>(parse_int(trim(parts[1])))};
}

}  // namespace alcs
