#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "mpp/instance.hpp"
#include "mpp/plan.hpp"

namespace mpp {

enum class Encoding { full, compact };

Encoding encoding_from_name(const std::string& name);
const char* encoding_name(Encoding encoding);

enum class ArcKind {
    edge_move,  // crosses an undirected edge between consecutive layers
    hold,       // stays on a vertex between consecutive layers
    occupancy,  // full encoding vertex gate v(t) -> v(t)'
    loopback,   // robot goal copy at layer T -> start copy at layer 0
};

struct Arc {
    int tail = -1;
    int head = -1;
    ArcKind kind = ArcKind::edge_move;
    int capacity = 1;
    int cost = 0;
    int time = -1;    // step for moves/holds, layer for occupancy arcs
    int edge = -1;    // undirected edge index for edge_move arcs
    int vertex = -1;  // vertex for hold/occupancy arcs
};

// Layered flow network over horizon T. The compact encoding keeps T+1
// copies per vertex and two directed move arcs per edge and step; the full
// encoding keeps 2T+1 copies, a five-arc merge-split gadget per edge and
// step (unit cost on the middle arc), green hold arcs and blue occupancy
// arcs. The first robot_count arcs are always the loopback arcs, robot i
// owning arc i.
struct TimeExpandedNetwork {
    Encoding encoding = Encoding::compact;
    int horizon = 0;
    int vertex_count = 0;
    int robot_count = 0;
    std::vector<std::pair<int, int>> edges;  // copy of the arena edges, sorted

    int node_count = 0;
    std::vector<Arc> arcs;
    std::vector<int> source_node;  // per robot
    std::vector<int> sink_node;    // per robot

    int loopback_arc(int robot) const { return robot; }

    // v(t) node id (arrival side at layer t).
    int entry_node(int v, int t) const;
    // v(t)' node id (departure side at layer t); equals entry_node in the
    // compact encoding and at t = 0.
    int exit_node(int v, int t) const;

    int hold_arc(int t, int v) const;
    int occupancy_arc(int t, int v) const;  // full encoding, 1 <= t <= T
    // Move arcs for edge e at step t. Compact: {u->v, v->u}. Full: the five
    // gadget arcs {u'->a, v'->a, a->b, b->u, b->v}.
    const int* gadget_arcs(int t, int e) const;
    int gadget_arc_count() const { return encoding == Encoding::compact ? 2 : 5; }

    int edge_index(int u, int v) const;  // -1 when absent

    // Outgoing arc ids per node, in arc order (loopbacks excluded).
    const std::vector<int>& arcs_out(int node) const { return out_[node]; }
    const std::vector<int>& arcs_in(int node) const { return in_[node]; }

    std::vector<std::vector<int>> out_;
    std::vector<std::vector<int>> in_;
    std::vector<int> gadget_;  // (t * |E| + e) * gadget_arc_count() + part
    std::vector<int> hold_;    // t * |V| + v
    std::vector<int> blue_;    // (t-1) * |V| + v, full encoding only
};

TimeExpandedNetwork build_network(const Instance& inst, int horizon, Encoding encoding);

// usable[robot][arc] flags. Robots that cannot reach their goal within the
// horizon get an all-false row (not even their loopback).
using UsableArcs = std::vector<std::vector<char>>;

// Keeps exactly the arcs lying on some layer-monotone source-to-sink walk
// of each robot, plus the robot's own loopback.
UsableArcs reachability_prune(const TimeExpandedNetwork& net, const Instance& inst);

// No-pruning baseline: every arc usable except other robots' loopbacks.
UsableArcs all_arcs_usable(const TimeExpandedNetwork& net, const Instance& inst);

// Unit flows per robot, as sorted arc id lists.
struct FlowAssignment {
    std::vector<std::vector<int>> arcs_of_robot;
};

struct FlowConversionError : std::runtime_error {
    enum class Kind { structure, conservation, capacity, meet, head_on };
    FlowConversionError(Kind k, std::string message, int a = -1, int b = -1, int t = -1)
        : std::runtime_error(std::move(message)), kind(k), robot_a(a), robot_b(b), time(t) {}
    Kind kind;
    int robot_a;
    int robot_b;
    int time;
};

// The two directions of the path/flow correspondence. flow_to_paths demands
// a feasible integral unit flow per robot through its loopback;
// paths_to_flow demands a collision-free plan with matching horizon.
Plan flow_to_paths(const TimeExpandedNetwork& net, const FlowAssignment& flow,
                   const Instance& inst);
FlowAssignment paths_to_flow(const Plan& plan, const TimeExpandedNetwork& net,
                             const Instance& inst);

}  // namespace mpp
