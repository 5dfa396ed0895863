#include "mpp/validate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace mpp {

const char* violation_name(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::structure:
            return "structure";
        case ViolationKind::start_mismatch:
            return "start-mismatch";
        case ViolationKind::goal_mismatch:
            return "goal-mismatch";
        case ViolationKind::not_adjacent:
            return "not-adjacent";
        case ViolationKind::meet:
            return "meet";
        case ViolationKind::head_on:
            return "head-on";
    }
    return "unknown";
}

std::vector<Violation> validate(const Plan& plan, const Instance& inst) {
    std::vector<Violation> out;
    const int n = inst.robot_count();
    if (plan.robot_count() != n) {
        out.push_back({ViolationKind::structure, -1, -1, -1,
                       "plan holds " + std::to_string(plan.robot_count()) + " robots, instance " +
                           std::to_string(n)});
        return out;
    }
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(plan.paths[i].size()) != plan.horizon + 1) {
            out.push_back({ViolationKind::structure, i, -1, -1,
                           "path of robot " + std::to_string(i) + " has wrong length"});
            return out;
        }
        for (int v : plan.paths[i]) {
            if (!inst.graph.has_vertex(v)) {
                out.push_back({ViolationKind::structure, i, -1, -1,
                               "path of robot " + std::to_string(i) + " leaves the graph"});
                return out;
            }
        }
    }

    for (int i = 0; i < n; ++i) {
        if (plan.paths[i].front() != inst.starts[i]) {
            out.push_back({ViolationKind::start_mismatch, i, -1, 0,
                           "robot " + std::to_string(i) + " does not start at its start vertex"});
        }
        if (plan.paths[i].back() != inst.goals[i]) {
            out.push_back({ViolationKind::goal_mismatch, i, -1, plan.horizon,
                           "robot " + std::to_string(i) + " does not end at its goal vertex"});
        }
        for (int t = 0; t < plan.horizon; ++t) {
            const int a = plan.paths[i][t];
            const int b = plan.paths[i][t + 1];
            if (a != b && !inst.graph.has_edge(a, b)) {
                out.push_back({ViolationKind::not_adjacent, i, -1, t,
                               "robot " + std::to_string(i) + " jumps " + std::to_string(a) +
                                   "->" + std::to_string(b) + " at step " + std::to_string(t)});
            }
        }
    }

    for (int t = 0; t <= plan.horizon; ++t) {
        std::map<int, int> occupant;
        for (int i = 0; i < n; ++i) {
            const auto [it, fresh] = occupant.emplace(plan.paths[i][t], i);
            if (!fresh) {
                out.push_back({ViolationKind::meet, it->second, i, t,
                               "robots " + std::to_string(it->second) + " and " + std::to_string(i) +
                                   " meet at vertex " + std::to_string(plan.paths[i][t]) +
                                   " at time " + std::to_string(t)});
            }
        }
    }
    for (int t = 0; t < plan.horizon; ++t) {
        // (from, to) -> robot; a head-on partner traverses (to, from).
        std::map<std::pair<int, int>, int> moves;
        for (int i = 0; i < n; ++i) {
            const int a = plan.paths[i][t];
            const int b = plan.paths[i][t + 1];
            if (a == b) {
                continue;
            }
            moves[{a, b}] = i;
        }
        for (const auto& [move, robot] : moves) {
            const auto rev = moves.find({move.second, move.first});
            if (rev != moves.end() && robot < rev->second) {
                out.push_back({ViolationKind::head_on, robot, rev->second, t,
                               "robots " + std::to_string(robot) + " and " +
                                   std::to_string(rev->second) + " swap along edge " +
                                   std::to_string(move.first) + "-" + std::to_string(move.second) +
                                   " at step " + std::to_string(t)});
            }
        }
    }
    return out;
}

Metrics metrics(const Plan& plan) {
    Metrics m;
    for (int i = 0; i < plan.robot_count(); ++i) {
        if (static_cast<int>(plan.paths[i].size()) != plan.horizon + 1) {
            throw std::invalid_argument("metrics: path length does not match plan horizon");
        }
        const int arrival = plan.arrival_time(i);
        const int length = plan.path_length(i);
        m.makespan = std::max(m.makespan, arrival);
        m.max_distance = std::max(m.max_distance, length);
        m.total_time += arrival;
        m.total_distance += length;
    }
    return m;
}

namespace {

char robot_glyph(int robot) {
    return robot < 10 ? static_cast<char>('0' + robot) : static_cast<char>('a' + robot - 10);
}

std::string base36(int robot) {
    if (robot == 0) {
        return "0";
    }
    std::string digits;
    while (robot > 0) {
        digits.insert(digits.begin(), robot_glyph(robot % 36));
        robot /= 36;
    }
    return digits;
}

}  // namespace

std::string render_ascii(const Plan& plan, const Instance& inst) {
    std::ostringstream out;
    const int n = plan.robot_count();
    if (!inst.graph.grid()) {
        for (int t = 0; t <= plan.horizon; ++t) {
            out << "t=" << t << "\n";
            for (int i = 0; i < n; ++i) {
                out << "  robot " << i << " @ " << plan.paths[i][t] << "\n";
            }
        }
        return out.str();
    }

    const GridMeta& grid = *inst.graph.grid();
    const std::vector<int> cell_of = grid.cell_of_vertex();
    size_t width = 1;
    for (int i = 0; i < n; ++i) {
        width = std::max(width, base36(i).size());
    }
    std::vector<char> removed(static_cast<size_t>(grid.rows) * grid.cols, 0);
    for (int cell : grid.removed_cells) {
        removed[cell] = 1;
    }
    for (int t = 0; t <= plan.horizon; ++t) {
        std::vector<std::string> cells(static_cast<size_t>(grid.rows) * grid.cols, ".");
        for (int cell = 0; cell < grid.rows * grid.cols; ++cell) {
            if (removed[cell]) {
                cells[cell] = "#";
            }
        }
        for (int i = 0; i < n; ++i) {
            cells[cell_of[plan.paths[i][t]]] = base36(i);
        }
        out << "t=" << t << "\n";
        for (int r = 0; r < grid.rows; ++r) {
            for (int c = 0; c < grid.cols; ++c) {
                std::string& cell = cells[r * grid.cols + c];
                if (c > 0 && width > 1) {
                    out << " ";
                }
                out << std::string(width - cell.size(), ' ') << cell;
            }
            out << "\n";
        }
        if (t < plan.horizon) {
            out << "\n";
        }
    }
    return out.str();
}

namespace {

struct Layout {
    std::vector<double> x;
    std::vector<double> y;
    double width;
    double height;
};

Layout layout_for(const Instance& inst) {
    constexpr double kCell = 40.0;
    Layout layout;
    const int n = inst.graph.vertex_count();
    layout.x.resize(n);
    layout.y.resize(n);
    if (inst.graph.grid()) {
        const GridMeta& grid = *inst.graph.grid();
        const std::vector<int> cell_of = grid.cell_of_vertex();
        for (int v = 0; v < n; ++v) {
            layout.x[v] = (cell_of[v] % grid.cols + 0.5) * kCell;
            layout.y[v] = (cell_of[v] / grid.cols + 0.5) * kCell;
        }
        layout.width = grid.cols * kCell;
        layout.height = grid.rows * kCell;
    } else {
        const double radius = std::max(1, n) * kCell / 6.0 + kCell;
        const double center = radius + kCell;
        for (int v = 0; v < n; ++v) {
            const double angle = 2.0 * 3.14159265358979323846 * v / std::max(1, n);
            layout.x[v] = center + radius * std::cos(angle);
            layout.y[v] = center + radius * std::sin(angle);
        }
        layout.width = layout.height = 2.0 * (radius + kCell);
    }
    return layout;
}

std::string fixed2(double v) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(2);
    out << v;
    return out.str();
}

}  // namespace

std::vector<std::string> render_svg_frames(const Plan& plan, const Instance& inst) {
    const Layout layout = layout_for(inst);
    std::vector<std::string> frames;
    frames.reserve(static_cast<size_t>(plan.horizon) + 1);
    for (int t = 0; t <= plan.horizon; ++t) {
        std::ostringstream svg;
        svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed2(layout.width)
            << "\" height=\"" << fixed2(layout.height) << "\">\n";
        svg << "<defs><marker id=\"arrow\" markerWidth=\"6\" markerHeight=\"6\" refX=\"5\" "
               "refY=\"3\" orient=\"auto\"><path d=\"M0,0 L6,3 L0,6 z\" fill=\"#444\"/>"
               "</marker></defs>\n";
        for (const auto& [u, v] : inst.graph.edges()) {
            svg << "<line x1=\"" << fixed2(layout.x[u]) << "\" y1=\"" << fixed2(layout.y[u])
                << "\" x2=\"" << fixed2(layout.x[v]) << "\" y2=\"" << fixed2(layout.y[v])
                << "\" stroke=\"#ccc\" stroke-width=\"1\"/>\n";
        }
        if (t < plan.horizon) {
            for (int i = 0; i < plan.robot_count(); ++i) {
                const int a = plan.paths[i][t];
                const int b = plan.paths[i][t + 1];
                if (a == b) {
                    continue;
                }
                svg << "<line x1=\"" << fixed2(layout.x[a]) << "\" y1=\"" << fixed2(layout.y[a])
                    << "\" x2=\"" << fixed2(layout.x[b]) << "\" y2=\"" << fixed2(layout.y[b])
                    << "\" stroke=\"#444\" stroke-width=\"2\" marker-end=\"url(#arrow)\"/>\n";
            }
        }
        for (int i = 0; i < plan.robot_count(); ++i) {
            const int v = plan.paths[i][t];
            svg << "<circle cx=\"" << fixed2(layout.x[v]) << "\" cy=\"" << fixed2(layout.y[v])
                << "\" r=\"12\" fill=\"#6699dd\" stroke=\"#224\"/>\n";
            svg << "<text x=\"" << fixed2(layout.x[v]) << "\" y=\"" << fixed2(layout.y[v] + 4)
                << "\" font-size=\"11\" text-anchor=\"middle\" fill=\"#fff\">" << i
                << "</text>\n";
        }
        svg << "</svg>\n";
        frames.push_back(svg.str());
    }
    return frames;
}

}  // namespace mpp
