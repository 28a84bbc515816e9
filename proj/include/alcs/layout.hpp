#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "alcs/grid.hpp"

namespace alcs {

// A static grid map: walls, a start cell, and named label cells. Layouts are
// plain data; which labels are live subtasks is decided by the task using it.
struct Layout {
    std::string name;
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> wall;  // row-major, 1 = blocked
    GridPos start{};
    std::map<std::pair<int, int>, std::string> labels;  // (x,y) -> subtask name

    bool in_bounds(GridPos p) const {
        return p.x >= 0 && p.x < width && p.y >= 0 && p.y < height;
    }
    bool is_wall(GridPos p) const { return wall[static_cast<std::size_t>(p.y) * width + p.x] != 0; }

    // Label name at p, or empty string.
    const std::string* label_at(GridPos p) const;

    // Cells of every label whose name is in `names` (layout scan order).
    std::vector<GridPos> cells_of(const std::string& name) const;
};

// Parses the ASCII layout format:
//   name: officeworld
//   grid:
//   ############
//   #..c.......#
//   ...
//   legend:
//   c: c
// Grid cells: '#' wall, '.' floor, 'S' start, any legend char = label cell.
Layout parse_layout(const std::string& text);
Layout load_layout(const std::string& path);

// BFS distances over the 4-neighborhood movement graph from `from`;
// unreachable cells get -1. Independent of any learning machinery.
std::vector<int> bfs_distances(const Layout& lay, GridPos from);

}  // namespace alcs
