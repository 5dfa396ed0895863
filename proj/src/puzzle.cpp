#include <algorithm>
#include <array>
#include <queue>
#include <stdexcept>
#include <unordered_map>

#include "mpp/oracle.hpp"

namespace mpp {

namespace {

// Shortest rotation sequences on the 3x3 grid realizing each adjacent
// border transposition while leaving every other cell fixed (the base-case
// exchange macros). Found once by breadth-first search over compositions of
// single-cycle rotations; each macro comes out three rotations long.
struct ExchangeMacros {
    // Perimeter cells of the local 3x3 grid in ring order.
    static constexpr std::array<int, 8> kRing = {0, 1, 2, 5, 8, 7, 6, 3};
    std::vector<std::vector<int>> cycles;                  // local vertex lists
    std::array<std::vector<std::pair<int, int>>, 8> swap_sequence;  // (cycle, dir)
};

uint64_t pack_perm(const std::array<int, 9>& perm) {
    uint64_t key = 0;
    for (int c = 0; c < 9; ++c) {
        key |= static_cast<uint64_t>(perm[c]) << (4 * c);
    }
    return key;
}

const ExchangeMacros& exchange_macros() {
    static const ExchangeMacros macros = [] {
        ExchangeMacros out;
        out.cycles = enumerate_cycles(make_grid(3, 3));

        // perm[cell] = original cell of the occupant now sitting there.
        std::array<int, 9> identity;
        for (int c = 0; c < 9; ++c) {
            identity[c] = c;
        }
        std::vector<uint64_t> targets;
        for (int j = 0; j < 8; ++j) {
            std::array<int, 9> want = identity;
            std::swap(want[ExchangeMacros::kRing[j]],
                      want[ExchangeMacros::kRing[(j + 1) % 8]]);
            targets.push_back(pack_perm(want));
        }

        struct Node {
            std::array<int, 9> perm;
            int parent;
            int cycle;
            int dir;
        };
        std::vector<Node> arena{{identity, -1, -1, 0}};
        std::unordered_map<uint64_t, int> seen{{pack_perm(identity), 0}};
        size_t found = 0;
        std::array<int, 8> found_at{};
        found_at.fill(-1);

        size_t head = 0;
        while (head < arena.size() && found < targets.size()) {
            const int cur = static_cast<int>(head++);
            const std::array<int, 9> perm = arena[cur].perm;
            for (size_t c = 0; c < out.cycles.size() && found < targets.size(); ++c) {
                const auto& cycle = out.cycles[c];
                for (int dir = 0; dir < 2; ++dir) {
                    std::array<int, 9> next = perm;
                    const int len = static_cast<int>(cycle.size());
                    for (int j = 0; j < len; ++j) {
                        const int to = dir == 0 ? cycle[(j + 1) % len]
                                                : cycle[(j + len - 1) % len];
                        next[to] = perm[cycle[j]];
                    }
                    const uint64_t key = pack_perm(next);
                    if (!seen.emplace(key, static_cast<int>(arena.size())).second) {
                        continue;
                    }
                    arena.push_back({next, cur, static_cast<int>(c), dir});
                    for (int j = 0; j < 8; ++j) {
                        if (found_at[j] < 0 && key == targets[static_cast<size_t>(j)]) {
                            found_at[j] = static_cast<int>(arena.size()) - 1;
                            ++found;
                        }
                    }
                }
            }
        }
        for (int j = 0; j < 8; ++j) {
            if (found_at[j] < 0) {
                throw std::logic_error("puzzle: exchange macro search failed");
            }
            std::vector<std::pair<int, int>> seq;
            for (int at = found_at[j]; arena[at].parent >= 0; at = arena[at].parent) {
                seq.emplace_back(arena[at].cycle, arena[at].dir);
            }
            std::reverse(seq.begin(), seq.end());
            out.swap_sequence[j] = std::move(seq);
        }
        return out;
    }();
    return macros;
}

class PuzzleBuilder {
public:
    PuzzleBuilder(const Instance& inst, int side)
        : inst_(inst), side_(side), occupant_(side * side, -1), locked_(side * side, 0) {
        positions_.resize(inst.robot_count());
        for (int i = 0; i < inst.robot_count(); ++i) {
            positions_[i] = inst.starts[i];
            occupant_[inst.starts[i]] = i;
        }
        goal_occupant_.assign(side * side, -1);
        for (int i = 0; i < inst.robot_count(); ++i) {
            goal_occupant_[inst.goals[i]] = i;
        }
        steps_.push_back(positions_);
    }

    Plan run() {
        int top = 0;
        int right = side_ - 1;
        while (side_ - top > 3) {
            peel(top, right);
            ++top;
            --right;
        }
        solve_base(top);
        Plan plan;
        plan.horizon = static_cast<int>(steps_.size()) - 1;
        plan.paths.assign(inst_.robot_count(), std::vector<int>(steps_.size()));
        for (size_t t = 0; t < steps_.size(); ++t) {
            for (int i = 0; i < inst_.robot_count(); ++i) {
                plan.paths[i][t] = steps_[t][i];
            }
        }
        return plan;
    }

private:
    const Instance& inst_;
    int side_;
    std::vector<int> occupant_;       // vertex -> robot
    std::vector<int> positions_;      // robot -> vertex
    std::vector<int> goal_occupant_;  // vertex -> robot whose goal it is
    std::vector<char> locked_;
    std::vector<std::vector<int>> steps_;

    int cell(int r, int c) const { return r * side_ + c; }
    int row(int v) const { return v / side_; }
    int col(int v) const { return v % side_; }

    // One time step: rotate the occupants of a fully occupied cycle.
    void rotate(const std::vector<int>& cycle, bool forward) {
        const int len = static_cast<int>(cycle.size());
        std::vector<int> moved(len);
        for (int j = 0; j < len; ++j) {
            const int to = forward ? cycle[(j + 1) % len] : cycle[(j + len - 1) % len];
            moved[j] = to;
        }
        std::vector<int> robots(len);
        for (int j = 0; j < len; ++j) {
            robots[j] = occupant_[cycle[j]];
        }
        for (int j = 0; j < len; ++j) {
            occupant_[moved[j]] = robots[j];
            positions_[robots[j]] = moved[j];
        }
        steps_.push_back(positions_);
    }

    bool square_free(int r, int c) const {
        if (r < 0 || c < 0 || r + 1 >= side_ || c + 1 >= side_) {
            return false;
        }
        return !locked_[cell(r, c)] && !locked_[cell(r, c + 1)] && !locked_[cell(r + 1, c)] &&
               !locked_[cell(r + 1, c + 1)];
    }

    // Rotate a free unit square so the robot on `from` lands on `to`.
    void square_step(int from, int to) {
        int r;
        int c;
        if (row(from) == row(to)) {
            r = row(from) - 1;
            c = std::min(col(from), col(to));
            if (!square_free(r, c)) {
                r = row(from);
            }
        } else {
            r = std::min(row(from), row(to));
            c = col(from) - 1;
            if (!square_free(r, c)) {
                c = col(from);
            }
        }
        if (!square_free(r, c)) {
            throw std::logic_error("puzzle: no free square for step");
        }
        const std::vector<int> square = {cell(r, c), cell(r, c + 1), cell(r + 1, c + 1),
                                         cell(r + 1, c)};
        int ia = -1;
        int ib = -1;
        for (int j = 0; j < 4; ++j) {
            if (square[j] == from) {
                ia = j;
            }
            if (square[j] == to) {
                ib = j;
            }
        }
        rotate(square, (ia + 1) % 4 == ib);
    }

    // Walk one robot to target through unlocked cells using unit-square
    // rotations; other unplaced robots get shuffled freely.
    void navigate(int robot, int target) {
        while (positions_[robot] != target) {
            const int from = positions_[robot];
            // BFS over cells; a step a->b needs some free square holding both.
            std::vector<int> parent(side_ * side_, -1);
            std::queue<int> queue;
            parent[from] = from;
            queue.push(from);
            while (!queue.empty() && parent[target] < 0) {
                const int cur = queue.front();
                queue.pop();
                for (int nb : inst_.graph.neighbors(cur)) {
                    if (parent[nb] >= 0 || locked_[nb]) {
                        continue;
                    }
                    if (!step_possible(cur, nb)) {
                        continue;
                    }
                    parent[nb] = cur;
                    queue.push(nb);
                }
            }
            if (parent[target] < 0) {
                throw std::logic_error("puzzle: navigation blocked");
            }
            // First hop along the reconstructed path.
            int hop = target;
            while (parent[hop] != from) {
                hop = parent[hop];
            }
            square_step(from, hop);
        }
    }

    bool step_possible(int a, int b) const {
        if (row(a) == row(b)) {
            const int c = std::min(col(a), col(b));
            return square_free(row(a) - 1, c) || square_free(row(a), c);
        }
        const int r = std::min(row(a), row(b));
        return square_free(r, col(a) - 1) || square_free(r, col(a));
    }

    void place_and_lock(int robot, int target) {
        navigate(robot, target);
        locked_[target] = 1;
    }

    // Peel the top row and right column of the region rows top..side-1,
    // cols 0..right (a square of side right+1-0 >= 4), then shrink.
    void peel(int top, int right) {
        // Top row, left to right, all but the last two.
        for (int c = 0; c + 2 <= right; ++c) {
            place_and_lock(goal_occupant_[cell(top, c)], cell(top, c));
        }
        place_pair_with_ring(goal_occupant_[cell(top, right - 1)],
                             goal_occupant_[cell(top, right)],
                             column_ring(top, right), top, right, true);
        // Right column, top to bottom, all but the last two.
        for (int r = top + 1; r + 2 <= side_ - 1; ++r) {
            place_and_lock(goal_occupant_[cell(r, right)], cell(r, right));
        }
        place_pair_with_ring(goal_occupant_[cell(side_ - 2, right)],
                             goal_occupant_[cell(side_ - 1, right)], row_ring(top, right), top,
                             right, false);
    }

    // Ring over the last two columns of the region, clockwise from the
    // top-left of the pair: (top,right-1), (top,right), down the right
    // column, across the bottom, up the left column.
    std::vector<int> column_ring(int top, int right) const {
        std::vector<int> ring;
        ring.push_back(cell(top, right - 1));
        for (int r = top; r <= side_ - 1; ++r) {
            ring.push_back(cell(r, right));
        }
        for (int r = side_ - 1; r > top; --r) {
            ring.push_back(cell(r, right - 1));
        }
        ring.pop_back();  // (top, right-1) repeats
        return ring;
    }

    // Ring over the last two rows of the region.
    std::vector<int> row_ring(int top, int right) const {
        std::vector<int> ring;
        for (int c = 0; c <= right; ++c) {
            ring.push_back(cell(side_ - 2, c));
        }
        for (int c = right; c >= 0; --c) {
            ring.push_back(cell(side_ - 1, c));
        }
        return ring;
    }

    // Stage two robots on the ring so one full-speed rotation drops them on
    // their adjacent targets together, then rotate. Staging cells sit at the
    // bottom (column ring) or lower-left corner (row ring) of the region.
    void place_pair_with_ring(int first_robot, int second_robot, const std::vector<int>& ring,
                              int top, int right, bool column_pair) {
        int first_target;
        int second_target;
        int first_stage;
        int second_stage;
        if (column_pair) {
            first_target = cell(top, right - 1);
            second_target = cell(top, right);
            first_stage = cell(side_ - 1, right);
            second_stage = cell(side_ - 1, right - 1);
        } else {
            first_target = cell(side_ - 2, right);
            second_target = cell(side_ - 1, right);
            first_stage = cell(side_ - 1, 0);
            second_stage = cell(side_ - 2, 0);
        }
        if (positions_[first_robot] == first_target &&
            positions_[second_robot] == second_target) {
            locked_[first_target] = 1;
            locked_[second_target] = 1;
            return;
        }
        navigate(first_robot, first_stage);
        locked_[first_stage] = 1;
        navigate(second_robot, second_stage);
        locked_[first_stage] = 0;

        const int size = static_cast<int>(ring.size());
        int from_idx = -1;
        int to_idx = -1;
        for (int j = 0; j < size; ++j) {
            if (ring[j] == first_stage) {
                from_idx = j;
            }
            if (ring[j] == first_target) {
                to_idx = j;
            }
        }
        const int turns = ((to_idx - from_idx) % size + size) % size;
        for (int k = 0; k < turns; ++k) {
            rotate(ring, true);
        }
        if (positions_[first_robot] != first_target ||
            positions_[second_robot] != second_target) {
            throw std::logic_error("puzzle: pair rotation misplaced its robots");
        }
        locked_[first_target] = 1;
        locked_[second_target] = 1;
    }

    // 3x3 base case: center the middle robot, then sort the border ring
    // with adjacent-pair exchange macros.
    void solve_base(int top) {
        const int center = cell(top + 1, 1);
        navigate(goal_occupant_[center], center);

        const ExchangeMacros& macros = exchange_macros();
        auto to_global = [&](int local) {
            return cell(top + local / 3, local % 3);
        };
        std::array<int, 8> ring_cells;
        for (int j = 0; j < 8; ++j) {
            ring_cells[j] = to_global(ExchangeMacros::kRing[j]);
        }
        auto apply_exchange = [&](int pair_index) {
            for (const auto& [cycle_id, dir] : macros.swap_sequence[pair_index]) {
                std::vector<int> cycle = macros.cycles[cycle_id];
                for (int& v : cycle) {
                    v = to_global(v);
                }
                rotate(cycle, dir == 0);
            }
        };

        for (int idx = 0; idx < 7; ++idx) {
            const int wanted = goal_occupant_[ring_cells[idx]];
            int at = idx;
            while (occupant_[ring_cells[at]] != wanted) {
                ++at;
                if (at >= 8) {
                    throw std::logic_error("puzzle: border robot missing from ring");
                }
            }
            while (at > idx) {
                apply_exchange(at - 1);
                --at;
            }
        }
        if (occupant_ != goal_occupant_) {
            throw std::logic_error("puzzle: base case left a mismatch");
        }
    }
};

}  // namespace

Plan solve_puzzle_constructive(const Instance& inst) {
    inst.check();
    const auto& grid = inst.graph.grid();
    const int n = inst.robot_count();
    if (!grid || grid->rows != grid->cols || !grid->removed_cells.empty() || grid->rows < 3 ||
        n != inst.graph.vertex_count()) {
        throw std::invalid_argument(
            "solve_puzzle_constructive: needs a fully occupied N x N grid, N >= 3");
    }
    if (inst.starts == inst.goals) {
        Plan plan;
        plan.horizon = 0;
        plan.paths.assign(n, {});
        for (int i = 0; i < n; ++i) {
            plan.paths[i] = {inst.starts[i]};
        }
        return plan;
    }
    PuzzleBuilder builder(inst, grid->rows);
    return builder.run();
}

}  // namespace mpp
