#include "mpp/plan.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mpp {

const char* objective_name(ObjectiveKind kind) {
    switch (kind) {
        case ObjectiveKind::makespan:
            return "makespan";
        case ObjectiveKind::max_dist:
            return "maxdist";
        case ObjectiveKind::total_time:
            return "totaltime";
        case ObjectiveKind::total_dist:
            return "totaldist";
    }
    return "unknown";
}

ObjectiveKind objective_from_name(const std::string& name) {
    if (name == "makespan") {
        return ObjectiveKind::makespan;
    }
    if (name == "maxdist") {
        return ObjectiveKind::max_dist;
    }
    if (name == "totaltime") {
        return ObjectiveKind::total_time;
    }
    if (name == "totaldist") {
        return ObjectiveKind::total_dist;
    }
    throw std::invalid_argument("unknown objective: " + name);
}

int Plan::arrival_time(int robot) const {
    const std::vector<int>& path = paths[robot];
    const int final_vertex = path.back();
    int t = horizon;
    while (t > 0 && path[t - 1] == final_vertex) {
        --t;
    }
    return t;
}

int Plan::path_length(int robot) const {
    const std::vector<int>& path = paths[robot];
    int length = 0;
    for (int t = 0; t < horizon; ++t) {
        if (path[t] != path[t + 1]) {
            ++length;
        }
    }
    return length;
}

Plan parse_plan(const std::string& text) {
    std::istringstream in(text);
    std::string keyword;
    long long robots = -1;
    long long horizon = -1;
    in >> keyword >> robots >> horizon;
    if (keyword != "plan" || robots < 0 || horizon < 0) {
        throw std::runtime_error("plan file: expected 'plan <n> <T>' header");
    }
    Plan plan;
    plan.horizon = static_cast<int>(horizon);
    plan.paths.assign(static_cast<size_t>(robots), {});
    for (long long i = 0; i < robots; ++i) {
        auto& path = plan.paths[static_cast<size_t>(i)];
        path.reserve(static_cast<size_t>(horizon) + 1);
        for (long long t = 0; t <= horizon; ++t) {
            long long v;
            if (!(in >> v) || v < 0) {
                throw std::runtime_error("plan file: truncated or invalid path for robot " +
                                         std::to_string(i));
            }
            path.push_back(static_cast<int>(v));
        }
    }
    long long extra;
    if (in >> extra) {
        throw std::runtime_error("plan file: trailing content");
    }
    return plan;
}

std::string serialize_plan(const Plan& plan) {
    std::ostringstream out;
    out << "plan " << plan.robot_count() << " " << plan.horizon << "\n";
    for (const auto& path : plan.paths) {
        for (size_t t = 0; t < path.size(); ++t) {
            if (t > 0) {
                out << " ";
            }
            out << path[t];
        }
        out << "\n";
    }
    return out.str();
}

Plan load_plan(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open solution file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_plan(buffer.str());
}

void save_plan(const Plan& plan, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write solution file: " + path);
    }
    out << serialize_plan(plan);
}

}  // namespace mpp
