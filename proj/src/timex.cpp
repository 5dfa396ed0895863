#include "mpp/timex.hpp"

#include <algorithm>
#include <queue>

namespace mpp {

Encoding encoding_from_name(const std::string& name) {
    if (name == "full") {
        return Encoding::full;
    }
    if (name == "compact") {
        return Encoding::compact;
    }
    throw std::invalid_argument("unknown encoding: " + name);
}

const char* encoding_name(Encoding encoding) {
    return encoding == Encoding::full ? "full" : "compact";
}

int TimeExpandedNetwork::entry_node(int v, int t) const {
    if (encoding == Encoding::compact) {
        return t * vertex_count + v;
    }
    const int level = t == 0 ? 0 : 2 * t - 1;
    return level * vertex_count + v;
}

int TimeExpandedNetwork::exit_node(int v, int t) const {
    if (encoding == Encoding::compact || t == 0) {
        return entry_node(v, t);
    }
    return 2 * t * vertex_count + v;
}

int TimeExpandedNetwork::hold_arc(int t, int v) const {
    return hold_[t * vertex_count + v];
}

int TimeExpandedNetwork::occupancy_arc(int t, int v) const {
    return blue_[(t - 1) * vertex_count + v];
}

const int* TimeExpandedNetwork::gadget_arcs(int t, int e) const {
    return gadget_.data() + (static_cast<size_t>(t) * edges.size() + e) * gadget_arc_count();
}

int TimeExpandedNetwork::edge_index(int u, int v) const {
    if (u > v) {
        std::swap(u, v);
    }
    const auto it = std::lower_bound(edges.begin(), edges.end(), std::make_pair(u, v));
    if (it == edges.end() || *it != std::make_pair(u, v)) {
        return -1;
    }
    return static_cast<int>(it - edges.begin());
}

TimeExpandedNetwork build_network(const Instance& inst, int horizon, Encoding encoding) {
    if (horizon < 0) {
        throw std::invalid_argument("build_network: horizon must be nonnegative");
    }
    TimeExpandedNetwork net;
    net.encoding = encoding;
    net.horizon = horizon;
    net.vertex_count = inst.graph.vertex_count();
    net.robot_count = inst.robot_count();
    net.edges = inst.graph.edges();

    const int V = net.vertex_count;
    const int E = static_cast<int>(net.edges.size());
    const int T = horizon;
    const int n = net.robot_count;

    if (encoding == Encoding::compact) {
        net.node_count = V * (T + 1);
    } else {
        net.node_count = V * (2 * T + 1) + 2 * E * T;
    }
    net.gadget_.assign(static_cast<size_t>(T) * E * net.gadget_arc_count(), -1);
    net.hold_.assign(static_cast<size_t>(T) * V, -1);
    if (encoding == Encoding::full) {
        net.blue_.assign(static_cast<size_t>(T) * V, -1);
    }

    auto push = [&net](int tail, int head, ArcKind kind, int cost, int time, int edge,
                       int vertex) {
        net.arcs.push_back(Arc{tail, head, kind, 1, cost, time, edge, vertex});
        return static_cast<int>(net.arcs.size()) - 1;
    };

    net.source_node.resize(n);
    net.sink_node.resize(n);
    for (int i = 0; i < n; ++i) {
        net.source_node[i] = net.entry_node(inst.starts[i], 0);
        net.sink_node[i] = net.exit_node(inst.goals[i], T);
        push(net.sink_node[i], net.source_node[i], ArcKind::loopback, 0, -1, -1, -1);
    }

    // Gadget internal nodes (full encoding) live after the vertex copies.
    const int internal_base = V * (2 * T + 1);

    for (int t = 0; t < T; ++t) {
        for (int e = 0; e < E; ++e) {
            const auto [u, v] = net.edges[e];
            int* slots = net.gadget_.data() +
                         (static_cast<size_t>(t) * E + e) * net.gadget_arc_count();
            if (encoding == Encoding::compact) {
                slots[0] = push(net.entry_node(u, t), net.entry_node(v, t + 1),
                                ArcKind::edge_move, 1, t, e, -1);
                slots[1] = push(net.entry_node(v, t), net.entry_node(u, t + 1),
                                ArcKind::edge_move, 1, t, e, -1);
            } else {
                const int merge = internal_base + 2 * (t * E + e);
                const int split = merge + 1;
                slots[0] = push(net.exit_node(u, t), merge, ArcKind::edge_move, 0, t, e, -1);
                slots[1] = push(net.exit_node(v, t), merge, ArcKind::edge_move, 0, t, e, -1);
                slots[2] = push(merge, split, ArcKind::edge_move, 1, t, e, -1);
                slots[3] = push(split, net.entry_node(u, t + 1), ArcKind::edge_move, 0, t, e, -1);
                slots[4] = push(split, net.entry_node(v, t + 1), ArcKind::edge_move, 0, t, e, -1);
            }
        }
        for (int v = 0; v < V; ++v) {
            net.hold_[static_cast<size_t>(t) * V + v] =
                push(net.exit_node(v, t), net.entry_node(v, t + 1), ArcKind::hold, 0, t, -1, v);
        }
        if (encoding == Encoding::full) {
            for (int v = 0; v < V; ++v) {
                net.blue_[static_cast<size_t>(t) * V + v] =
                    push(net.entry_node(v, t + 1), net.exit_node(v, t + 1), ArcKind::occupancy,
                         0, t + 1, -1, v);
            }
        }
    }

    net.out_.assign(net.node_count, {});
    net.in_.assign(net.node_count, {});
    for (int a = 0; a < static_cast<int>(net.arcs.size()); ++a) {
        if (net.arcs[a].kind == ArcKind::loopback) {
            continue;
        }
        net.out_[net.arcs[a].tail].push_back(a);
        net.in_[net.arcs[a].head].push_back(a);
    }
    return net;
}

UsableArcs reachability_prune(const TimeExpandedNetwork& net, const Instance& inst) {
    const int n = inst.robot_count();
    UsableArcs usable(n, std::vector<char>(net.arcs.size(), 0));
    std::vector<char> forward(net.node_count);
    std::vector<char> backward(net.node_count);
    for (int i = 0; i < n; ++i) {
        std::fill(forward.begin(), forward.end(), 0);
        std::fill(backward.begin(), backward.end(), 0);
        std::queue<int> queue;
        forward[net.source_node[i]] = 1;
        queue.push(net.source_node[i]);
        while (!queue.empty()) {
            const int node = queue.front();
            queue.pop();
            for (int a : net.arcs_out(node)) {
                const int head = net.arcs[a].head;
                if (!forward[head]) {
                    forward[head] = 1;
                    queue.push(head);
                }
            }
        }
        if (!forward[net.sink_node[i]]) {
            continue;  // goal unreachable within the horizon: empty set
        }
        backward[net.sink_node[i]] = 1;
        queue.push(net.sink_node[i]);
        while (!queue.empty()) {
            const int node = queue.front();
            queue.pop();
            for (int a : net.arcs_in(node)) {
                const int tail = net.arcs[a].tail;
                if (!backward[tail]) {
                    backward[tail] = 1;
                    queue.push(tail);
                }
            }
        }
        for (int a = net.robot_count; a < static_cast<int>(net.arcs.size()); ++a) {
            usable[i][a] = forward[net.arcs[a].tail] && backward[net.arcs[a].head];
        }
        usable[i][net.loopback_arc(i)] = 1;
    }
    return usable;
}

UsableArcs all_arcs_usable(const TimeExpandedNetwork& net, const Instance& inst) {
    const int n = inst.robot_count();
    UsableArcs usable(n, std::vector<char>(net.arcs.size(), 1));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j != i) {
                usable[i][net.loopback_arc(j)] = 0;
            }
        }
    }
    return usable;
}

namespace {

// Decodes a vertex-copy node into (vertex, time); internal gadget nodes and
// full-encoding exit copies report time -1 so the path walk skips them.
struct NodeInfo {
    int vertex = -1;
    int entry_time = -1;
};

NodeInfo decode_node(const TimeExpandedNetwork& net, int node) {
    NodeInfo info;
    const int V = net.vertex_count;
    if (net.encoding == Encoding::compact) {
        info.vertex = node % V;
        info.entry_time = node / V;
        return info;
    }
    if (node >= V * (2 * net.horizon + 1)) {
        return info;  // gadget internal
    }
    const int level = node / V;
    info.vertex = node % V;
    if (level == 0) {
        info.entry_time = 0;
    } else if (level % 2 == 1) {
        info.entry_time = (level + 1) / 2;
    }
    return info;
}

}  // namespace

Plan flow_to_paths(const TimeExpandedNetwork& net, const FlowAssignment& flow,
                   const Instance& inst) {
    const int n = inst.robot_count();
    if (static_cast<int>(flow.arcs_of_robot.size()) != n) {
        throw FlowConversionError(FlowConversionError::Kind::structure,
                                  "flow does not cover every robot");
    }
    // Per-arc totals obey capacity.
    std::vector<int> total(net.arcs.size(), 0);
    for (int i = 0; i < n; ++i) {
        for (int a : flow.arcs_of_robot[i]) {
            if (a < 0 || a >= static_cast<int>(net.arcs.size())) {
                throw FlowConversionError(FlowConversionError::Kind::structure,
                                          "flow references unknown arc", i);
            }
            if (++total[a] > net.arcs[a].capacity) {
                throw FlowConversionError(FlowConversionError::Kind::capacity,
                                          "arc " + std::to_string(a) + " over capacity", i, -1,
                                          net.arcs[a].time);
            }
        }
    }

    Plan plan;
    plan.horizon = net.horizon;
    plan.paths.assign(n, {});
    std::vector<int> next_arc(net.node_count);
    for (int i = 0; i < n; ++i) {
        // Per-robot conservation and unit out-degree.
        std::fill(next_arc.begin(), next_arc.end(), -1);
        std::vector<int> degree(net.node_count, 0);
        bool uses_loopback = false;
        for (int a : flow.arcs_of_robot[i]) {
            const Arc& arc = net.arcs[a];
            if (arc.kind == ArcKind::loopback) {
                if (a != net.loopback_arc(i)) {
                    throw FlowConversionError(FlowConversionError::Kind::structure,
                                              "robot uses a foreign loopback arc", i);
                }
                uses_loopback = true;
                continue;
            }
            if (next_arc[arc.tail] != -1) {
                throw FlowConversionError(
                    FlowConversionError::Kind::conservation,
                    "two outgoing arcs at node " + std::to_string(arc.tail), i);
            }
            next_arc[arc.tail] = a;
            ++degree[arc.tail];
            --degree[arc.head];
        }
        if (!uses_loopback) {
            throw FlowConversionError(FlowConversionError::Kind::structure,
                                      "robot flow does not use its loopback arc", i);
        }
        ++degree[net.sink_node[i]];
        --degree[net.source_node[i]];
        for (int node = 0; node < net.node_count; ++node) {
            if (degree[node] != 0) {
                throw FlowConversionError(
                    FlowConversionError::Kind::conservation,
                    "flow conservation violated at node " + std::to_string(node), i);
            }
        }

        auto& path = plan.paths[i];
        path.reserve(static_cast<size_t>(net.horizon) + 1);
        path.push_back(inst.starts[i]);
        int node = net.source_node[i];
        int guard = 0;
        while (node != net.sink_node[i] || static_cast<int>(path.size()) <= net.horizon) {
            const int a = next_arc[node];
            if (a < 0 || ++guard > net.node_count + 1) {
                throw FlowConversionError(FlowConversionError::Kind::conservation,
                                          "robot flow is not a source-sink walk", i);
            }
            node = net.arcs[a].head;
            const NodeInfo info = decode_node(net, node);
            if (info.entry_time == static_cast<int>(path.size())) {
                path.push_back(info.vertex);
            }
            if (node == net.sink_node[i] && static_cast<int>(path.size()) == net.horizon + 1) {
                break;
            }
        }
        if (static_cast<int>(path.size()) != net.horizon + 1 || path.back() != inst.goals[i]) {
            throw FlowConversionError(FlowConversionError::Kind::structure,
                                      "robot flow does not end at its goal copy", i);
        }
    }
    return plan;
}

FlowAssignment paths_to_flow(const Plan& plan, const TimeExpandedNetwork& net,
                             const Instance& inst) {
    const int n = inst.robot_count();
    if (plan.horizon != net.horizon || plan.robot_count() != n) {
        throw FlowConversionError(FlowConversionError::Kind::structure,
                                  "plan shape does not match network");
    }
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(plan.paths[i].size()) != plan.horizon + 1) {
            throw FlowConversionError(FlowConversionError::Kind::structure,
                                      "path length does not match horizon", i);
        }
        if (plan.paths[i].front() != inst.starts[i] || plan.paths[i].back() != inst.goals[i]) {
            throw FlowConversionError(FlowConversionError::Kind::structure,
                                      "path endpoints do not match the instance", i);
        }
    }
    // Collision checks; in the full encoding these are exactly the blue-arc
    // and middle-gadget-arc capacities.
    for (int t = 0; t <= plan.horizon; ++t) {
        std::vector<std::pair<int, int>> occupied;
        for (int i = 0; i < n; ++i) {
            occupied.emplace_back(plan.paths[i][t], i);
        }
        std::sort(occupied.begin(), occupied.end());
        for (size_t k = 1; k < occupied.size(); ++k) {
            if (occupied[k].first == occupied[k - 1].first) {
                throw FlowConversionError(FlowConversionError::Kind::meet,
                                          "meet at vertex " + std::to_string(occupied[k].first) +
                                              " at time " + std::to_string(t),
                                          occupied[k - 1].second, occupied[k].second, t);
            }
        }
    }
    for (int t = 0; t < plan.horizon; ++t) {
        std::vector<std::pair<std::pair<int, int>, int>> moves;
        for (int i = 0; i < n; ++i) {
            const int a = plan.paths[i][t];
            const int b = plan.paths[i][t + 1];
            if (a != b) {
                moves.push_back({{a, b}, i});
            }
        }
        std::sort(moves.begin(), moves.end());
        for (const auto& [move, robot] : moves) {
            const auto key = std::make_pair(std::make_pair(move.second, move.first), 0);
            auto it = std::lower_bound(moves.begin(), moves.end(), key,
                                       [](const auto& lhs, const auto& rhs) {
                                           return lhs.first < rhs.first;
                                       });
            if (it != moves.end() && it->first == key.first && robot < it->second) {
                throw FlowConversionError(FlowConversionError::Kind::head_on,
                                          "head-on swap along edge " +
                                              std::to_string(move.first) + "-" +
                                              std::to_string(move.second) + " at step " +
                                              std::to_string(t),
                                          robot, it->second, t);
            }
        }
    }

    FlowAssignment flow;
    flow.arcs_of_robot.assign(n, {});
    for (int i = 0; i < n; ++i) {
        auto& arcs = flow.arcs_of_robot[i];
        arcs.push_back(net.loopback_arc(i));
        for (int t = 0; t < plan.horizon; ++t) {
            const int a = plan.paths[i][t];
            const int b = plan.paths[i][t + 1];
            if (a == b) {
                arcs.push_back(net.hold_arc(t, a));
                continue;
            }
            const int e = net.edge_index(a, b);
            if (e < 0) {
                throw FlowConversionError(FlowConversionError::Kind::structure,
                                          "plan crosses a nonexistent edge", i, -1, t);
            }
            const int* slots = net.gadget_arcs(t, e);
            const bool ascending = a < b;
            if (net.encoding == Encoding::compact) {
                arcs.push_back(ascending ? slots[0] : slots[1]);
            } else {
                arcs.push_back(ascending ? slots[0] : slots[1]);
                arcs.push_back(slots[2]);
                arcs.push_back(ascending ? slots[4] : slots[3]);
            }
        }
        if (net.encoding == Encoding::full) {
            for (int t = 1; t <= plan.horizon; ++t) {
                arcs.push_back(net.occupancy_arc(t, plan.paths[i][t]));
            }
        }
        std::sort(arcs.begin(), arcs.end());
    }
    return flow;
}

}  // namespace mpp
