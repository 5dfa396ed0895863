#include "mpp/oracle.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <unordered_map>

#include "mpp/graph.hpp"

namespace mpp {

std::vector<std::vector<int>> enumerate_cycles(const Graph& g) {
    std::vector<std::vector<int>> cycles;
    const int n = g.vertex_count();
    std::vector<char> on_path(n, 0);
    std::vector<int> path;

    // Each cycle is discovered exactly once: rooted at its lowest vertex,
    // kept in the direction whose second vertex beats the last.
    auto dfs = [&](auto&& self, int root, int cur) -> void {
        for (int nb : g.neighbors(cur)) {
            if (nb == root && path.size() >= 3) {
                if (path[1] < path.back()) {
                    cycles.push_back(path);
                }
            } else if (nb > root && !on_path[nb]) {
                on_path[nb] = 1;
                path.push_back(nb);
                self(self, root, nb);
                path.pop_back();
                on_path[nb] = 0;
            }
        }
    };
    for (int root = 0; root < n; ++root) {
        path.assign(1, root);
        on_path[root] = 1;
        dfs(dfs, root, root);
        on_path[root] = 0;
    }
    return cycles;
}

namespace {

// Vertex set as a bitmask over graph vertices.
struct VertexMask {
    std::vector<uint64_t> words;

    explicit VertexMask(int vertex_count) : words((vertex_count + 63) / 64, 0) {}

    void add(int v) { words[v >> 6] |= 1ULL << (v & 63); }
    bool intersects(const VertexMask& other) const {
        for (size_t i = 0; i < words.size(); ++i) {
            if (words[i] & other.words[i]) {
                return true;
            }
        }
        return false;
    }
    void merge(const VertexMask& other) {
        for (size_t i = 0; i < words.size(); ++i) {
            words[i] |= other.words[i];
        }
    }
    void subtract(const VertexMask& other) {
        for (size_t i = 0; i < words.size(); ++i) {
            words[i] &= ~other.words[i];
        }
    }
};

// One independently movable component: either a fully occupied cycle
// rotating one way, or a chain of robots advancing into an empty vertex.
struct MoveComponent {
    VertexMask mask;
    // Parallel arrays: robot currently at from[k] moves to to[k].
    std::vector<int> from;
    std::vector<int> to;
};

class JointMoveEnumerator {
public:
    JointMoveEnumerator(const Graph& g, const std::vector<std::vector<int>>& cycles)
        : graph_(g), cycles_(cycles) {}

    std::vector<std::vector<int>> successors(const std::vector<int>& config) const {
        const int V = graph_.vertex_count();
        std::vector<int> occupant(V, -1);
        for (size_t i = 0; i < config.size(); ++i) {
            occupant[config[i]] = static_cast<int>(i);
        }

        std::vector<MoveComponent> components;
        for (const auto& cycle : cycles_) {
            bool full = true;
            for (int v : cycle) {
                if (occupant[v] < 0) {
                    full = false;
                    break;
                }
            }
            if (!full) {
                continue;
            }
            for (int dir = 0; dir < 2; ++dir) {
                MoveComponent comp{VertexMask(V), {}, {}};
                const int len = static_cast<int>(cycle.size());
                for (int j = 0; j < len; ++j) {
                    const int next = dir == 0 ? (j + 1) % len : (j + len - 1) % len;
                    comp.mask.add(cycle[j]);
                    comp.from.push_back(cycle[j]);
                    comp.to.push_back(cycle[next]);
                }
                components.push_back(std::move(comp));
            }
        }
        // Chains: a simple path of occupied vertices advancing one step
        // toward the empty head.
        std::vector<int> chain;
        std::vector<char> on_chain(V, 0);
        auto extend = [&](auto&& self, int empty_head) -> void {
            const int tail = chain.empty() ? empty_head : chain.back();
            for (int nb : graph_.neighbors(tail)) {
                if (occupant[nb] < 0 || on_chain[nb]) {
                    continue;
                }
                chain.push_back(nb);
                on_chain[nb] = 1;
                MoveComponent comp{VertexMask(V), {}, {}};
                comp.mask.add(empty_head);
                int target = empty_head;
                for (int v : chain) {
                    comp.mask.add(v);
                    comp.from.push_back(v);
                    comp.to.push_back(target);
                    target = v;
                }
                components.push_back(std::move(comp));
                self(self, empty_head);
                on_chain[nb] = 0;
                chain.pop_back();
            }
        };
        for (int v = 0; v < V; ++v) {
            if (occupant[v] < 0) {
                chain.clear();
                extend(extend, v);
            }
        }

        // Every set of pairwise disjoint components is one joint move.
        std::vector<std::vector<int>> result;
        std::vector<int> chosen;
        VertexMask used(V);
        auto emit = [&]() {
            std::vector<int> next = config;
            for (int idx : chosen) {
                const MoveComponent& comp = components[idx];
                for (size_t k = 0; k < comp.from.size(); ++k) {
                    next[occupant[comp.from[k]]] = comp.to[k];
                }
            }
            result.push_back(std::move(next));
        };
        auto combine = [&](auto&& self, size_t idx) -> void {
            if (idx == components.size()) {
                emit();
                return;
            }
            self(self, idx + 1);
            if (!components[idx].mask.intersects(used)) {
                used.merge(components[idx].mask);
                chosen.push_back(static_cast<int>(idx));
                self(self, idx + 1);
                chosen.pop_back();
                used.subtract(components[idx].mask);
            }
        };
        combine(combine, 0);
        std::sort(result.begin(), result.end());
        return result;
    }

private:
    const Graph& graph_;
    const std::vector<std::vector<int>>& cycles_;
};

}  // namespace

std::vector<std::vector<int>> enumerate_joint_moves(const Graph& g,
                                                    const std::vector<int>& config) {
    const auto cycles = enumerate_cycles(g);
    return JointMoveEnumerator(g, cycles).successors(config);
}

namespace {

// Configurations pack into one word when vertex ids fit in 4 bits each;
// larger cases fall back to a byte-string key.
bool packable(int vertex_count, int robots) {
    return vertex_count <= 16 && robots <= 16;
}

uint64_t pack_config(const std::vector<int>& config) {
    uint64_t key = 0;
    for (size_t i = 0; i < config.size(); ++i) {
        key |= static_cast<uint64_t>(config[i]) << (4 * i);
    }
    return key;
}

struct VectorHash {
    size_t operator()(const std::vector<int>& values) const {
        size_t h = 1469598103934665603ULL;
        for (int v : values) {
            h ^= static_cast<size_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return h;
    }
};

Plan plan_from_chain(const std::vector<std::vector<int>>& configs) {
    Plan plan;
    plan.horizon = static_cast<int>(configs.size()) - 1;
    const int n = configs.empty() ? 0 : static_cast<int>(configs.front().size());
    plan.paths.assign(n, std::vector<int>(configs.size()));
    for (size_t t = 0; t < configs.size(); ++t) {
        for (int i = 0; i < n; ++i) {
            plan.paths[i][t] = configs[t][i];
        }
    }
    return plan;
}

}  // namespace

BfsOracleResult bfs_min_makespan(const Instance& inst, long long node_cap) {
    inst.check();
    BfsOracleResult result;
    const auto cycles = enumerate_cycles(inst.graph);
    const JointMoveEnumerator enumerator(inst.graph, cycles);

    std::vector<std::vector<int>> arena{inst.starts};
    std::vector<int> parent{-1};
    std::vector<int> depth{0};

    const bool packed = packable(inst.graph.vertex_count(), inst.robot_count());
    std::unordered_map<uint64_t, int> seen_packed;
    std::unordered_map<std::vector<int>, int, VectorHash> seen_generic;
    if (packed) {
        seen_packed.emplace(pack_config(inst.starts), 0);
    } else {
        seen_generic.emplace(inst.starts, 0);
    }

    auto reconstruct = [&](int idx) {
        std::vector<std::vector<int>> chain;
        for (int at = idx; at >= 0; at = parent[at]) {
            chain.push_back(arena[at]);
        }
        std::reverse(chain.begin(), chain.end());
        result.plan = plan_from_chain(chain);
        result.makespan = result.plan.horizon;
        result.status = BfsOracleResult::Status::solved;
    };

    if (inst.starts == inst.goals) {
        reconstruct(0);
        result.visited = 1;
        return result;
    }

    size_t head = 0;
    while (head < arena.size()) {
        if (static_cast<long long>(arena.size()) > node_cap) {
            result.status = BfsOracleResult::Status::cap_exhausted;
            result.visited = static_cast<long long>(arena.size());
            return result;
        }
        const int cur = static_cast<int>(head++);
        const std::vector<int> config = arena[cur];
        for (auto& next : enumerator.successors(config)) {
            bool fresh;
            if (packed) {
                fresh = seen_packed.emplace(pack_config(next), static_cast<int>(arena.size()))
                            .second;
            } else {
                fresh = seen_generic.emplace(next, static_cast<int>(arena.size())).second;
            }
            if (!fresh) {
                continue;
            }
            arena.push_back(std::move(next));
            parent.push_back(cur);
            depth.push_back(depth[cur] + 1);
            if (arena.back() == inst.goals) {
                result.visited = static_cast<long long>(arena.size());
                reconstruct(static_cast<int>(arena.size()) - 1);
                return result;
            }
        }
    }
    result.status = BfsOracleResult::Status::unsolvable;
    result.visited = static_cast<long long>(arena.size());
    return result;
}

namespace {

// Layered dynamic programs behind exhaustive_optimal. States are packed
// into 64-bit keys: 4 bits per robot position plus per-objective extras.
struct LayeredSearch {
    const Instance& inst;
    const JointMoveEnumerator& enumerator;
    int t_cap;

    struct Entry {
        long long cost;
        uint64_t parent_key;
        int parent_layer;
    };
    // layer -> key -> entry
    std::vector<std::unordered_map<uint64_t, Entry>> layers;

    explicit LayeredSearch(const Instance& i, const JointMoveEnumerator& e, int cap)
        : inst(i), enumerator(e), t_cap(cap), layers(static_cast<size_t>(cap) + 1) {}
};

template <typename Unpack>
OracleValue reconstruct_layered(const LayeredSearch& search, uint64_t key, int layer,
                                Unpack unpack) {
    std::vector<std::vector<int>> chain;
    uint64_t at_key = key;
    int at_layer = layer;
    while (true) {
        chain.push_back(unpack(at_key));
        const auto& entry = search.layers[at_layer].at(at_key);
        if (entry.parent_layer < 0) {
            break;
        }
        at_key = entry.parent_key;
        at_layer = entry.parent_layer;
    }
    std::reverse(chain.begin(), chain.end());
    OracleValue out;
    out.known = true;
    out.plan = plan_from_chain(chain);
    return out;
}

OracleValue exhaustive_total_dist(const Instance& inst, const JointMoveEnumerator& enumerator,
                                  int t_cap) {
    LayeredSearch search(inst, enumerator, t_cap);
    const uint64_t start_key = pack_config(inst.starts);
    const uint64_t goal_key = pack_config(inst.goals);
    search.layers[0][start_key] = {0, start_key, -1};

    long long best = -1;
    uint64_t best_key = 0;
    int best_layer = -1;
    const int n = inst.robot_count();
    auto unpack = [n](uint64_t key) {
        std::vector<int> config(n);
        for (int i = 0; i < n; ++i) {
            config[i] = static_cast<int>((key >> (4 * i)) & 15);
        }
        return config;
    };

    for (int t = 0; t <= t_cap; ++t) {
        for (const auto& [key, entry] : search.layers[t]) {
            if (key == goal_key && (best < 0 || entry.cost < best)) {
                best = entry.cost;
                best_key = key;
                best_layer = t;
            }
        }
        if (t == t_cap) {
            break;
        }
        // Deterministic expansion order.
        std::vector<uint64_t> keys;
        keys.reserve(search.layers[t].size());
        for (const auto& [key, entry] : search.layers[t]) {
            keys.push_back(key);
        }
        std::sort(keys.begin(), keys.end());
        for (uint64_t key : keys) {
            const long long base = search.layers[t][key].cost;
            if (best >= 0 && base >= best) {
                continue;  // moves only add cost
            }
            const std::vector<int> config = unpack(key);
            for (const auto& next : enumerator.successors(config)) {
                long long moved = 0;
                for (int i = 0; i < n; ++i) {
                    moved += next[i] != config[i] ? 1 : 0;
                }
                const uint64_t next_key = pack_config(next);
                auto& layer = search.layers[t + 1];
                const auto it = layer.find(next_key);
                if (it == layer.end() || it->second.cost > base + moved) {
                    layer[next_key] = {base + moved, key, t};
                }
            }
        }
    }
    if (best < 0) {
        return {};
    }
    auto out = reconstruct_layered(search, best_key, best_layer, unpack);
    out.value = best;
    return out;
}

OracleValue exhaustive_total_time(const Instance& inst, const JointMoveEnumerator& enumerator,
                                  int t_cap) {
    // State: configuration plus the set of robots committed to sit on their
    // goals forever. A step costs (robots not yet committed); the total over
    // a completed plan is exactly the sum of stabilization arrival times.
    const int n = inst.robot_count();
    LayeredSearch search(inst, enumerator, t_cap);
    auto pack = [n](const std::vector<int>& config, uint32_t mask) {
        return pack_config(config) | (static_cast<uint64_t>(mask) << (4 * n));
    };
    auto unpack_config = [n](uint64_t key) {
        std::vector<int> config(n);
        for (int i = 0; i < n; ++i) {
            config[i] = static_cast<int>((key >> (4 * i)) & 15);
        }
        return config;
    };
    auto mask_of = [n](uint64_t key) {
        return static_cast<uint32_t>(key >> (4 * n));
    };

    const uint32_t full_mask = n == 32 ? 0xffffffffu : (1u << n) - 1;
    auto at_goal_mask = [&](const std::vector<int>& config) {
        uint32_t mask = 0;
        for (int i = 0; i < n; ++i) {
            if (config[i] == inst.goals[i]) {
                mask |= 1u << i;
            }
        }
        return mask;
    };

    // Seed layer 0 with every commitment subset of the robots already home.
    {
        const uint32_t home = at_goal_mask(inst.starts);
        uint32_t sub = home;
        while (true) {
            search.layers[0][pack(inst.starts, sub)] = {0, 0, -1};
            if (sub == 0) {
                break;
            }
            sub = (sub - 1) & home;
        }
    }

    long long best = -1;
    uint64_t best_key = 0;
    int best_layer = -1;
    const uint64_t done_key = pack(inst.goals, full_mask);

    for (int t = 0; t <= t_cap; ++t) {
        const auto it = search.layers[t].find(done_key);
        if (it != search.layers[t].end() && (best < 0 || it->second.cost < best)) {
            best = it->second.cost;
            best_key = done_key;
            best_layer = t;
        }
        if (t == t_cap) {
            break;
        }
        std::vector<uint64_t> keys;
        keys.reserve(search.layers[t].size());
        for (const auto& [key, entry] : search.layers[t]) {
            keys.push_back(key);
        }
        std::sort(keys.begin(), keys.end());
        for (uint64_t key : keys) {
            const long long base = search.layers[t][key].cost;
            if (best >= 0 && base >= best) {
                continue;
            }
            const std::vector<int> config = unpack_config(key);
            const uint32_t mask = mask_of(key);
            const long long step_cost = n - __builtin_popcount(mask);
            for (const auto& next : enumerator.successors(config)) {
                bool pinned_moved = false;
                for (int i = 0; i < n && !pinned_moved; ++i) {
                    if ((mask >> i & 1) && next[i] != config[i]) {
                        pinned_moved = true;
                    }
                }
                if (pinned_moved) {
                    continue;
                }
                const uint32_t home = at_goal_mask(next);
                // Commitments only grow; enumerate the new additions.
                const uint32_t addable = home & ~mask;
                uint32_t add = addable;
                while (true) {
                    const uint32_t next_mask = mask | add;
                    const uint64_t next_key = pack(next, next_mask);
                    auto& layer = search.layers[t + 1];
                    const auto found = layer.find(next_key);
                    if (found == layer.end() || found->second.cost > base + step_cost) {
                        layer[next_key] = {base + step_cost, key, t};
                    }
                    if (add == 0) {
                        break;
                    }
                    add = (add - 1) & addable;
                }
            }
        }
    }
    if (best < 0) {
        return {};
    }
    auto out = reconstruct_layered(search, best_key, best_layer, unpack_config);
    out.value = best;
    return out;
}

OracleValue exhaustive_max_dist(const Instance& inst, const JointMoveEnumerator& enumerator,
                                int t_cap) {
    const int n = inst.robot_count();
    std::vector<std::vector<int>> goal_dist(n);
    for (int i = 0; i < n; ++i) {
        goal_dist[i] = bfs_distances(inst.graph, inst.goals[i]);
    }
    int lower = 0;
    for (int i = 0; i < n; ++i) {
        lower = std::max(lower, goal_dist[i][inst.starts[i]]);
    }

    auto pack = [n](const std::vector<int>& config, const std::vector<int>& used) {
        uint64_t key = pack_config(config);
        for (int i = 0; i < n; ++i) {
            key |= static_cast<uint64_t>(used[i]) << (4 * n + 5 * i);
        }
        return key;
    };
    auto unpack_config = [n](uint64_t key) {
        std::vector<int> config(n);
        for (int i = 0; i < n; ++i) {
            config[i] = static_cast<int>((key >> (4 * i)) & 15);
        }
        return config;
    };
    auto unpack_used = [n](uint64_t key) {
        std::vector<int> used(n);
        for (int i = 0; i < n; ++i) {
            used[i] = static_cast<int>((key >> (4 * n + 5 * i)) & 31);
        }
        return used;
    };

    for (int budget = lower; budget <= std::min(t_cap, 31); ++budget) {
        LayeredSearch search(inst, enumerator, t_cap);
        const std::vector<int> zero(n, 0);
        search.layers[0][pack(inst.starts, zero)] = {0, 0, -1};
        for (int t = 0; t < t_cap; ++t) {
            std::vector<uint64_t> keys;
            keys.reserve(search.layers[t].size());
            for (const auto& [key, entry] : search.layers[t]) {
                keys.push_back(key);
            }
            std::sort(keys.begin(), keys.end());
            for (uint64_t key : keys) {
                const std::vector<int> config = unpack_config(key);
                const std::vector<int> used = unpack_used(key);
                for (const auto& next : enumerator.successors(config)) {
                    std::vector<int> next_used = used;
                    bool ok = true;
                    for (int i = 0; i < n && ok; ++i) {
                        if (next[i] != config[i]) {
                            ++next_used[i];
                        }
                        // Admissible pruning on distance budget and horizon.
                        if (next_used[i] + goal_dist[i][next[i]] > budget ||
                            t + 1 + goal_dist[i][next[i]] > t_cap) {
                            ok = false;
                        }
                    }
                    if (!ok) {
                        continue;
                    }
                    const uint64_t next_key = pack(next, next_used);
                    auto& layer = search.layers[t + 1];
                    if (!layer.count(next_key)) {
                        layer[next_key] = {0, key, t};
                    }
                }
            }
        }
        for (int t = 0; t <= t_cap; ++t) {
            uint64_t found = 0;
            bool any = false;
            for (const auto& [key, entry] : search.layers[t]) {
                if (unpack_config(key) == inst.goals && (!any || key < found)) {
                    found = key;
                    any = true;
                }
            }
            if (any) {
                auto out = reconstruct_layered(search, found, t, unpack_config);
                out.value = budget;
                return out;
            }
        }
    }
    return {};
}

}  // namespace

OracleValue exhaustive_optimal(const Instance& inst, ObjectiveKind objective, int t_cap) {
    inst.check();
    if (inst.graph.vertex_count() > 16 || inst.robot_count() > 6) {
        throw std::invalid_argument(
            "exhaustive_optimal: instance too large (needs |V| <= 16, n <= 6)");
    }
    if (t_cap < 0) {
        throw std::invalid_argument("exhaustive_optimal: t_cap must be nonnegative");
    }
    const auto cycles = enumerate_cycles(inst.graph);
    const JointMoveEnumerator enumerator(inst.graph, cycles);

    if (objective == ObjectiveKind::makespan) {
        const BfsOracleResult bfs = bfs_min_makespan(inst);
        if (bfs.status != BfsOracleResult::Status::solved || bfs.makespan > t_cap) {
            return {};
        }
        OracleValue out;
        out.known = true;
        out.value = bfs.makespan;
        out.plan = bfs.plan;
        return out;
    }
    if (objective == ObjectiveKind::total_dist) {
        return exhaustive_total_dist(inst, enumerator, t_cap);
    }
    if (objective == ObjectiveKind::total_time) {
        return exhaustive_total_time(inst, enumerator, t_cap);
    }
    return exhaustive_max_dist(inst, enumerator, t_cap);
}

}  // namespace mpp
