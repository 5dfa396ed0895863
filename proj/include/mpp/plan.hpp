#pragma once

#include <string>
#include <vector>

#include "mpp/instance.hpp"

namespace mpp {

// The four optimization targets supported by the planners and oracles.
enum class ObjectiveKind { makespan, max_dist, total_time, total_dist };

const char* objective_name(ObjectiveKind kind);
ObjectiveKind objective_from_name(const std::string& name);

// One scheduled path per robot over a common horizon. paths[i] has
// horizon + 1 entries; paths[i][t] is robot i's vertex at time t.
struct Plan {
    int horizon = 0;
    std::vector<std::vector<int>> paths;

    int robot_count() const { return static_cast<int>(paths.size()); }
    int position(int robot, int t) const { return paths[robot][t]; }

    // Smallest t such that the robot sits at its final vertex from t on.
    int arrival_time(int robot) const;
    // Number of edge traversals, counting revisits.
    int path_length(int robot) const;
};

Plan parse_plan(const std::string& text);
std::string serialize_plan(const Plan& plan);

Plan load_plan(const std::string& path);
void save_plan(const Plan& plan, const std::string& path);

}  // namespace mpp
