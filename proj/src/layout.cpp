#include "alcs/layout.hpp"

#include <deque>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "alcs/text.hpp"

namespace alcs {

const std::string* Layout::label_at(GridPos p) const {
    auto it = labels.find({p.x, p.y});
    return it == labels.end() ? nullptr : &it->second;
}

std::vector<GridPos> Layout::cells_of(const std::string& name) const {
    std::vector<GridPos> out;
    for (const auto& [cell, n] : labels)
        if (n == name) out.push_back({cell.first, cell.second});
    return out;
}

Layout parse_layout(const std::string& text) {
    Layout lay;
    std::vector<std::string> rows;
    std::unordered_map<char, std::string> legend;
    enum class Section { top, grid, legend } section = Section::top;

    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) {
        std::string_view line = trim(raw);
        if (section == Section::grid) {
            if (line == "legend:") {
                section = Section::legend;
                continue;
            }
            if (line.empty()) continue;
            rows.emplace_back(line);
            continue;
        }
        if (line.empty() || line.front() == '#') {
            // '#' starts a comment outside the grid block
            continue;
        }
        auto colon = line.find(':');
        if (colon == std::string_view::npos)
            throw std::invalid_argument("layout: expected 'key: value', got '" + std::string(line) + "'");
        std::string key(trim(line.substr(0, colon)));
        std::string value(trim(line.substr(colon + 1)));
        if (section == Section::legend) {
            if (key.size() != 1)
                throw std::invalid_argument("layout legend: cell char must be one character, got '" + key + "'");
            legend[key[0]] = value;
        } else if (key == "name") {
            lay.name = value;
        } else if (key == "grid") {
            section = Section::grid;
        } else if (key == "legend") {
            section = Section::legend;
        } else {
            throw std::invalid_argument("layout: unknown key '" + key + "'");
        }
    }

    if (rows.empty()) throw std::invalid_argument("layout: empty grid");
    lay.height = static_cast<int>(rows.size());
    lay.width = static_cast<int>(rows[0].size());
    lay.wall.assign(static_cast<std::size_t>(lay.width) * lay.height, 0);

    bool have_start = false;
    for (int y = 0; y < lay.height; ++y) {
        if (static_cast<int>(rows[y].size()) != lay.width)
            throw std::invalid_argument("layout: ragged grid row " + std::to_string(y));
        for (int x = 0; x < lay.width; ++x) {
            char c = rows[y][x];
            if (c == '#') {
                lay.wall[static_cast<std::size_t>(y) * lay.width + x] = 1;
            } else if (c == 'S') {
                if (have_start) throw std::invalid_argument("layout: multiple start cells");
                lay.start = {x, y};
                have_start = true;
            } else if (c != '.') {
                auto it = legend.find(c);
                if (it == legend.end())
                    throw std::invalid_argument(std::string("layout: grid char '") + c + "' missing from legend");
                lay.labels[{x, y}] = it->second;
            }
        }
    }
    if (!have_start) throw std::invalid_argument("layout: no start cell 'S'");
    if (lay.is_wall(lay.start)) throw std::invalid_argument("layout: start on wall");
    return lay;
}

Layout load_layout(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("layout: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_layout(buf.str());
}

std::vector<int> bfs_distances(const Layout& lay, GridPos from) {
    std::vector<int> dist(static_cast<std::size_t>(lay.width) * lay.height, -1);
    if (!lay.in_bounds(from) || lay.is_wall(from)) return dist;
    std::deque<GridPos> queue{from};
    dist[static_cast<std::size_t>(from.y) * lay.width + from.x] = 0;
    while (!queue.empty()) {
        GridPos p = queue.front();
        queue.pop_front();
        int d = dist[static_cast<std::size_t>(p.y) * lay.width + p.x];
        for (Action a : kAllActions) {
            GridPos q = moved(p, a);
            if (!lay.in_bounds(q) || lay.is_wall(q)) continue;
            auto& slot = dist[static_cast<std::size_t>(q.y) * lay.width + q.x];
            if (slot < 0) {
                slot = d + 1;
                queue.push_back(q);
            }
        }
    }
    return dist;
}

}  // namespace alcs
