#pragma once

#include <cstdint>
#include <vector>

#include "mpp/instance.hpp"
#include "mpp/plan.hpp"

namespace mpp {

// All simple cycles of length >= 3, canonicalized: lowest vertex first,
// lexicographically smaller direction, deduplicated.
std::vector<std::vector<int>> enumerate_cycles(const Graph& g);

// All distinct collision-free successor configurations of config (identity
// included). A legal simultaneous move decomposes into vertex-disjoint
// chains advancing into an empty vertex and fully occupied cycles rotating
// in one direction.
std::vector<std::vector<int>> enumerate_joint_moves(const Graph& g,
                                                    const std::vector<int>& config);

struct BfsOracleResult {
    enum class Status { solved, unsolvable, cap_exhausted };
    Status status = Status::cap_exhausted;
    int makespan = -1;
    Plan plan;
    long long visited = 0;
};

// Breadth-first search over configurations; exact optimal makespan with a
// witness plan, or a clean abort past node_cap.
BfsOracleResult bfs_min_makespan(const Instance& inst, long long node_cap = 20000000);

struct OracleValue {
    bool known = false;
    long long value = 0;
    Plan plan;
};

// Exhaustive optimum over joint-move sequences of length <= t_cap,
// evaluated with stabilization-time arrival semantics. Exact within the
// horizon; meant for tiny instances.
OracleValue exhaustive_optimal(const Instance& inst, ObjectiveKind objective, int t_cap);

// Constructive solver for fully occupied N x N grid instances, N >= 3.
// Always returns a valid (generally sub-optimal) plan built from
// single-cycle rotations.
Plan solve_puzzle_constructive(const Instance& inst);

}  // namespace mpp
