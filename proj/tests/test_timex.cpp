#include <doctest.h>

#include <queue>
#include <set>

#include "mpp/rng.hpp"
#include "mpp/timex.hpp"
#include "mpp/validate.hpp"

using namespace mpp;

namespace {

Instance k2(int robots = 1) {
    Instance inst;
    inst.graph = Graph(2, {{0, 1}});
    if (robots == 1) {
        inst.starts = {0};
        inst.goals = {1};
    } else {
        inst.starts = {0, 1};
        inst.goals = {1, 0};
    }
    return inst;
}

int count_kind(const TimeExpandedNetwork& net, ArcKind kind) {
    int count = 0;
    for (const auto& arc : net.arcs) {
        count += arc.kind == kind ? 1 : 0;
    }
    return count;
}

// Independent layer-by-layer reachability: a move or hold arc at step t is
// on a monotone walk iff its tail vertex is within t hops of the start and
// its head within T-(t+1) hops of the goal.
std::set<int> oracle_usable(const TimeExpandedNetwork& net, const Instance& inst, int robot) {
    const auto from_start = bfs_distances(inst.graph, inst.starts[robot]);
    const auto to_goal = bfs_distances(inst.graph, inst.goals[robot]);
    std::set<int> kept;
    if (from_start[inst.goals[robot]] > net.horizon) {
        return kept;
    }
    const int E = static_cast<int>(net.edges.size());
    for (int t = 0; t < net.horizon; ++t) {
        for (int e = 0; e < E; ++e) {
            const auto [u, v] = net.edges[e];
            const int* slots = net.gadget_arcs(t, e);
            const bool u_to_v = from_start[u] <= t && to_goal[v] <= net.horizon - t - 1;
            const bool v_to_u = from_start[v] <= t && to_goal[u] <= net.horizon - t - 1;
            if (net.encoding == Encoding::compact) {
                if (u_to_v) {
                    kept.insert(slots[0]);
                }
                if (v_to_u) {
                    kept.insert(slots[1]);
                }
            } else {
                if (u_to_v) {
                    kept.insert(slots[0]);
                    kept.insert(slots[2]);
                    kept.insert(slots[4]);
                }
                if (v_to_u) {
                    kept.insert(slots[1]);
                    kept.insert(slots[2]);
                    kept.insert(slots[3]);
                }
            }
        }
        for (int v = 0; v < net.vertex_count; ++v) {
            if (from_start[v] <= t && to_goal[v] <= net.horizon - t - 1) {
                kept.insert(net.hold_arc(t, v));
            }
        }
    }
    if (net.encoding == Encoding::full) {
        for (int t = 1; t <= net.horizon; ++t) {
            for (int v = 0; v < net.vertex_count; ++v) {
                if (from_start[v] <= t && to_goal[v] <= net.horizon - t) {
                    kept.insert(net.occupancy_arc(t, v));
                }
            }
        }
    }
    kept.insert(net.loopback_arc(robot));
    return kept;
}

// Random collision-free plan by simulating lazy random walks with collision
// retries; used for round-trip property tests.
Plan random_valid_plan(const Instance& inst, int horizon, Rng& rng) {
    // Build via repeated rejection over joint steps: robots pick stay or a
    // neighbor; a step is kept only if collision-free; goals are reached by
    // routing each robot along its shortest path after a random prefix.
    const int n = inst.robot_count();
    Plan plan;
    plan.horizon = horizon;
    plan.paths.assign(n, {});
    while (true) {
        for (int i = 0; i < n; ++i) {
            plan.paths[i].assign(1, inst.starts[i]);
        }
        bool ok = true;
        for (int t = 0; t < horizon && ok; ++t) {
            // Propose a joint step, retrying a few times.
            int tries = 0;
            while (true) {
                std::vector<int> next(n);
                for (int i = 0; i < n; ++i) {
                    const int cur = plan.paths[i][t];
                    const int remaining = horizon - t;
                    const auto dist = bfs_distances(inst.graph, inst.goals[i]);
                    if (dist[cur] >= remaining) {
                        // Must head home along some shortest path.
                        const auto path = shortest_path(inst.graph, cur, inst.goals[i]);
                        next[i] = path.size() > 1 ? path[1] : cur;
                        continue;
                    }
                    const auto& nbs = inst.graph.neighbors(cur);
                    const uint64_t pick = uniform_below(rng, nbs.size() + 1);
                    next[i] = pick == nbs.size() ? cur : nbs[pick];
                    if (dist[next[i]] > horizon - t - 1) {
                        next[i] = cur;  // do not stray out of range
                    }
                }
                bool clean = true;
                std::set<int> seen;
                for (int i = 0; i < n && clean; ++i) {
                    clean = seen.insert(next[i]).second;
                }
                for (int i = 0; i < n && clean; ++i) {
                    for (int j = i + 1; j < n && clean; ++j) {
                        if (next[i] == plan.paths[j][t] && next[j] == plan.paths[i][t] &&
                            next[i] != next[j]) {
                            clean = false;
                        }
                    }
                }
                if (clean) {
                    for (int i = 0; i < n; ++i) {
                        plan.paths[i].push_back(next[i]);
                    }
                    break;
                }
                if (++tries > 50) {
                    ok = false;
                    break;
                }
            }
        }
        if (!ok) {
            continue;
        }
        for (int i = 0; i < n; ++i) {
            if (plan.paths[i].back() != inst.goals[i]) {
                ok = false;
            }
        }
        if (ok) {
            return plan;
        }
    }
}

}  // namespace

TEST_CASE("compact network counting") {
    const TimeExpandedNetwork net = build_network(k2(), 1, Encoding::compact);
    CHECK(net.node_count == 4);
    CHECK(net.arcs.size() == 5);
    CHECK(count_kind(net, ArcKind::edge_move) == 2);
    CHECK(count_kind(net, ArcKind::hold) == 2);
    CHECK(count_kind(net, ArcKind::loopback) == 1);

    Instance square;
    square.graph = make_grid(2, 2);
    square.starts = {0};
    square.goals = {3};
    const TimeExpandedNetwork net2 = build_network(square, 2, Encoding::compact);
    CHECK(net2.node_count == 12);
    CHECK(net2.arcs.size() == 25);
    CHECK(count_kind(net2, ArcKind::edge_move) == 16);
    CHECK(count_kind(net2, ArcKind::hold) == 8);
}

TEST_CASE("full network counting and gadget shape") {
    const TimeExpandedNetwork net = build_network(k2(), 1, Encoding::full);
    CHECK(net.node_count == 2 * 3 + 2);  // 2T+1 copies per vertex + 2 gadget internals
    CHECK(count_kind(net, ArcKind::edge_move) == 5);
    CHECK(count_kind(net, ArcKind::hold) == 2);
    CHECK(count_kind(net, ArcKind::occupancy) == 2);
    CHECK(count_kind(net, ArcKind::loopback) == 1);
    // One unit-cost middle arc per gadget, all else free.
    int unit_cost = 0;
    for (const auto& arc : net.arcs) {
        CHECK(arc.capacity == 1);
        if (arc.cost != 0) {
            CHECK(arc.kind == ArcKind::edge_move);
            ++unit_cost;
        }
    }
    CHECK(unit_cost == 1);
}

TEST_CASE("loopback arcs take the first n indices") {
    Instance inst;
    inst.graph = make_grid(2, 2);
    inst.starts = {0, 1, 2};
    inst.goals = {2, 0, 1};
    const TimeExpandedNetwork net = build_network(inst, 3, Encoding::compact);
    for (int i = 0; i < 3; ++i) {
        const Arc& arc = net.arcs[net.loopback_arc(i)];
        CHECK(arc.kind == ArcKind::loopback);
        CHECK(arc.tail == net.exit_node(inst.goals[i], 3));
        CHECK(arc.head == net.entry_node(inst.starts[i], 0));
        CHECK(arc.cost == 0);
    }
}

TEST_CASE("pruning keeps exactly the monotone-walk arcs") {
    // Stationary robot at horizon 1: hold arc and loopback only.
    Instance stay;
    stay.graph = make_grid(1, 3);
    stay.starts = {1};
    stay.goals = {1};
    const TimeExpandedNetwork net = build_network(stay, 1, Encoding::compact);
    const UsableArcs usable = reachability_prune(net, stay);
    std::set<int> kept;
    for (int a = 0; a < static_cast<int>(net.arcs.size()); ++a) {
        if (usable[0][a]) {
            kept.insert(a);
        }
    }
    CHECK(kept == std::set<int>{net.loopback_arc(0), net.hold_arc(0, 1)});

    // Too far at this horizon: empty set.
    Instance far;
    far.graph = make_grid(1, 3);
    far.starts = {0};
    far.goals = {2};
    const TimeExpandedNetwork net2 = build_network(far, 1, Encoding::compact);
    const UsableArcs pruned = reachability_prune(net2, far);
    CHECK(std::count(pruned[0].begin(), pruned[0].end(), 1) == 0);
}

TEST_CASE("pruning matches the layer-BFS oracle") {
    Instance inst;
    inst.graph = make_grid(3, 3);
    inst.starts = {0, 5};
    inst.goals = {8, 3};
    for (const Encoding encoding : {Encoding::compact, Encoding::full}) {
        for (int horizon : {4, 5, 6}) {
            const TimeExpandedNetwork net = build_network(inst, horizon, encoding);
            const UsableArcs usable = reachability_prune(net, inst);
            for (int i = 0; i < inst.robot_count(); ++i) {
                const std::set<int> expect = oracle_usable(net, inst, i);
                std::set<int> got;
                for (int a = 0; a < static_cast<int>(net.arcs.size()); ++a) {
                    if (usable[i][a]) {
                        got.insert(a);
                    }
                }
                CHECK(got == expect);
            }
        }
    }
}

TEST_CASE("hold flows and single moves convert to paths") {
    // Constant path via hold arcs.
    Instance stay;
    stay.graph = make_grid(1, 2);
    stay.starts = {0};
    stay.goals = {0};
    const TimeExpandedNetwork net = build_network(stay, 3, Encoding::compact);
    FlowAssignment flow;
    flow.arcs_of_robot = {{net.loopback_arc(0), net.hold_arc(0, 0), net.hold_arc(1, 0),
                           net.hold_arc(2, 0)}};
    const Plan plan = flow_to_paths(net, flow, stay);
    CHECK(plan.paths[0] == std::vector<int>{0, 0, 0, 0});

    // K2 move through the gadget at t = 0.
    const Instance inst = k2();
    for (const Encoding encoding : {Encoding::compact, Encoding::full}) {
        const TimeExpandedNetwork net1 = build_network(inst, 1, encoding);
        const FlowAssignment f = paths_to_flow(Plan{1, {{0, 1}}}, net1, inst);
        const Plan back = flow_to_paths(net1, f, inst);
        CHECK(back.paths[0] == std::vector<int>{0, 1});
    }
}

TEST_CASE("swap plans are rejected with a head-on violation") {
    const Instance swap = k2(2);
    for (const Encoding encoding : {Encoding::compact, Encoding::full}) {
        const TimeExpandedNetwork net = build_network(swap, 1, encoding);
        Plan plan;
        plan.horizon = 1;
        plan.paths = {{0, 1}, {1, 0}};
        CHECK_THROWS_AS(paths_to_flow(plan, net, swap), FlowConversionError);
        try {
            paths_to_flow(plan, net, swap);
        } catch (const FlowConversionError& e) {
            CHECK(e.kind == FlowConversionError::Kind::head_on);
        }
    }
}

TEST_CASE("meet plans are rejected with a meet violation") {
    Instance inst;
    inst.graph = make_grid(1, 3);
    inst.starts = {0, 2};
    inst.goals = {0, 2};
    const TimeExpandedNetwork net = build_network(inst, 2, Encoding::compact);
    Plan plan;
    plan.horizon = 2;
    plan.paths = {{0, 1, 0}, {2, 1, 2}};
    try {
        paths_to_flow(plan, net, inst);
        FAIL("expected a meet rejection");
    } catch (const FlowConversionError& e) {
        CHECK(e.kind == FlowConversionError::Kind::meet);
        CHECK(e.time == 1);
    }
}

TEST_CASE("round trip holds on random plans in both encodings") {
    Rng rng(2024);
    int done = 0;
    while (done < 100) {
        const Graph g = remove_obstacles(make_grid(3, 4), 0.1, 1000 + done);
        Instance inst = generate_instance(g, 3, 55 + done);
        const int horizon = 6;
        bool reachable = true;
        for (int i = 0; i < inst.robot_count() && reachable; ++i) {
            reachable = static_cast<int>(
                            shortest_path(inst.graph, inst.starts[i], inst.goals[i]).size()) -
                            1 <=
                        horizon;
        }
        if (!reachable) {
            continue;
        }
        const Plan plan = random_valid_plan(inst, horizon, rng);
        REQUIRE(validate(plan, inst).empty());
        for (const Encoding encoding : {Encoding::compact, Encoding::full}) {
            const TimeExpandedNetwork net = build_network(inst, horizon, encoding);
            const FlowAssignment flow = paths_to_flow(plan, net, inst);
            const Plan back = flow_to_paths(net, flow, inst);
            CHECK(back.paths == plan.paths);
        }
        ++done;
    }
}

TEST_CASE("flow structural errors are reported") {
    const Instance inst = k2();
    const TimeExpandedNetwork net = build_network(inst, 1, Encoding::compact);
    // Missing loopback.
    FlowAssignment no_loop;
    no_loop.arcs_of_robot = {{net.hold_arc(0, 0)}};
    CHECK_THROWS_AS(flow_to_paths(net, no_loop, inst), FlowConversionError);
    // Broken conservation: loopback plus a dangling move from vertex 1.
    const int* slots = net.gadget_arcs(0, 0);
    FlowAssignment broken;
    broken.arcs_of_robot = {{net.loopback_arc(0), slots[1]}};
    CHECK_THROWS_AS(flow_to_paths(net, broken, inst), FlowConversionError);
}
