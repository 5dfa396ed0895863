#pragma once

#include <string>
#include <vector>

#include "mpp/instance.hpp"
#include "mpp/plan.hpp"

namespace mpp {

enum class ViolationKind {
    structure,       // wrong robot count / path lengths
    start_mismatch,  // p_i(0) != start_i
    goal_mismatch,   // p_i(T) != goal_i
    not_adjacent,    // consecutive vertices neither equal nor adjacent
    meet,            // two robots on one vertex at one time
    head_on,         // two robots traverse one edge in opposite directions
};

const char* violation_name(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    int robot_a = -1;
    int robot_b = -1;
    int time = -1;
    std::string detail;
};

// Checks every feasibility property; violations are data, not errors.
std::vector<Violation> validate(const Plan& plan, const Instance& inst);

struct Metrics {
    int makespan = 0;             // max arrival time
    int max_distance = 0;         // max path length
    long long total_time = 0;     // sum of arrival times
    long long total_distance = 0; // sum of path lengths
};

// Exact metric values under stabilization-time arrival semantics.
// Throws on structurally broken plans.
Metrics metrics(const Plan& plan);

// One frame per time step. Grid instances render as a character grid:
// '#' removed cell, '.' empty, base-36 robot index. Non-grid instances
// fall back to a per-robot position listing.
std::string render_ascii(const Plan& plan, const Instance& inst);

// One SVG document per time step with arrows showing the moves taken.
std::vector<std::string> render_svg_frames(const Plan& plan, const Instance& inst);

}  // namespace mpp
