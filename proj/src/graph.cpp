#include "mpp/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>

#include "mpp/rng.hpp"

namespace mpp {

std::vector<int> GridMeta::cell_of_vertex() const {
    std::vector<int> cells;
    cells.reserve(static_cast<size_t>(rows) * cols - removed_cells.size());
    size_t next_removed = 0;
    for (int cell = 0; cell < rows * cols; ++cell) {
        if (next_removed < removed_cells.size() && removed_cells[next_removed] == cell) {
            ++next_removed;
            continue;
        }
        cells.push_back(cell);
    }
    return cells;
}

Graph::Graph(int vertex_count, std::vector<std::pair<int, int>> edges,
             std::optional<GridMeta> grid)
    : vertex_count_(vertex_count), edges_(std::move(edges)), grid_(std::move(grid)) {
    if (vertex_count_ < 0) {
        throw std::invalid_argument("graph: negative vertex count");
    }
    for (auto& [u, v] : edges_) {
        if (u == v) {
            throw std::invalid_argument("graph: self-loop at vertex " + std::to_string(u));
        }
        if (u < 0 || v < 0 || u >= vertex_count_ || v >= vertex_count_) {
            throw std::invalid_argument("graph: edge endpoint out of range");
        }
        if (u > v) {
            std::swap(u, v);
        }
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
        throw std::invalid_argument("graph: duplicate edge");
    }
    adj_.assign(vertex_count_, {});
    for (const auto& [u, v] : edges_) {
        adj_[u].push_back(v);
        adj_[v].push_back(u);
    }
    for (auto& list : adj_) {
        std::sort(list.begin(), list.end());
    }
}

const std::vector<int>& Graph::neighbors(int v) const {
    if (!has_vertex(v)) {
        throw std::out_of_range("graph: vertex " + std::to_string(v) + " out of range");
    }
    return adj_[v];
}

bool Graph::has_edge(int u, int v) const {
    if (!has_vertex(u) || !has_vertex(v)) {
        return false;
    }
    const auto& list = adj_[u];
    return std::binary_search(list.begin(), list.end(), v);
}

bool Graph::connected() const {
    if (vertex_count_ <= 1) {
        return true;
    }
    const std::vector<int> dist = bfs_distances(*this, 0);
    return std::none_of(dist.begin(), dist.end(), [](int d) { return d < 0; });
}

Graph make_grid(int rows, int cols) {
    if (rows < 1 || cols < 1) {
        throw std::invalid_argument("make_grid: rows and cols must be positive");
    }
    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<size_t>(rows) * (cols - 1) + static_cast<size_t>(cols) * (rows - 1));
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const int v = r * cols + c;
            if (c + 1 < cols) {
                edges.emplace_back(v, v + 1);
            }
            if (r + 1 < rows) {
                edges.emplace_back(v, v + cols);
            }
        }
    }
    return Graph(rows * cols, std::move(edges), GridMeta{rows, cols, {}});
}

namespace {

bool connected_without(const Graph& g, const std::vector<char>& removed, int extra, int alive) {
    // BFS over vertices not flagged removed and != extra.
    const int n = g.vertex_count();
    int start = -1;
    for (int v = 0; v < n; ++v) {
        if (!removed[v] && v != extra) {
            start = v;
            break;
        }
    }
    if (start < 0) {
        return false;
    }
    std::vector<char> seen(n, 0);
    std::queue<int> queue;
    seen[start] = 1;
    queue.push(start);
    int reached = 1;
    while (!queue.empty()) {
        const int cur = queue.front();
        queue.pop();
        for (int nb : g.neighbors(cur)) {
            if (seen[nb] || removed[nb] || nb == extra) {
                continue;
            }
            seen[nb] = 1;
            ++reached;
            queue.push(nb);
        }
    }
    return reached == alive;
}

}  // namespace

Graph remove_obstacles(const Graph& g, double fraction, uint64_t seed) {
    if (fraction < 0.0 || fraction >= 1.0) {
        throw std::invalid_argument("remove_obstacles: fraction must be in [0, 1)");
    }
    const int n = g.vertex_count();
    // Small epsilon compensates for binary representations of fractions like
    // 0.3 that land just below an exact integer product.
    const int quota = static_cast<int>(std::floor(fraction * n + 1e-9));
    if (quota == 0) {
        return g;
    }
    if (quota >= n) {
        throw std::invalid_argument("remove_obstacles: quota would empty the graph");
    }

    Rng rng(seed);
    std::vector<char> removed(n, 0);
    std::vector<int> alive(n);
    for (int v = 0; v < n; ++v) {
        alive[v] = v;
    }
    const long long draw_cap = 100LL * n;
    long long draws = 0;
    int removed_count = 0;
    while (removed_count < quota) {
        if (draws >= draw_cap) {
            throw std::runtime_error(
                "remove_obstacles: retry cap exceeded, graph too fragile for requested fraction");
        }
        ++draws;
        const size_t pick = static_cast<size_t>(uniform_below(rng, alive.size()));
        const int candidate = alive[pick];
        if (!connected_without(g, removed, candidate, n - removed_count - 1)) {
            continue;
        }
        removed[candidate] = 1;
        ++removed_count;
        alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(pick));
    }

    // Compact surviving vertices, preserving relative order.
    std::vector<int> new_id(n, -1);
    int next = 0;
    for (int v = 0; v < n; ++v) {
        if (!removed[v]) {
            new_id[v] = next++;
        }
    }
    std::vector<std::pair<int, int>> edges;
    for (const auto& [u, v] : g.edges()) {
        if (!removed[u] && !removed[v]) {
            edges.emplace_back(new_id[u], new_id[v]);
        }
    }
    std::optional<GridMeta> meta;
    if (g.grid()) {
        GridMeta updated = *g.grid();
        const std::vector<int> cells = g.grid()->cell_of_vertex();
        for (int v = 0; v < n; ++v) {
            if (removed[v]) {
                updated.removed_cells.push_back(cells[v]);
            }
        }
        std::sort(updated.removed_cells.begin(), updated.removed_cells.end());
        meta = std::move(updated);
    }
    return Graph(next, std::move(edges), std::move(meta));
}

std::vector<int> bfs_distances(const Graph& g, int src) {
    if (!g.has_vertex(src)) {
        throw std::out_of_range("bfs_distances: source out of range");
    }
    std::vector<int> dist(g.vertex_count(), -1);
    std::queue<int> queue;
    dist[src] = 0;
    queue.push(src);
    while (!queue.empty()) {
        const int cur = queue.front();
        queue.pop();
        for (int nb : g.neighbors(cur)) {
            if (dist[nb] < 0) {
                dist[nb] = dist[cur] + 1;
                queue.push(nb);
            }
        }
    }
    return dist;
}

std::vector<int> shortest_path(const Graph& g, int src, int dst) {
    if (!g.has_vertex(src) || !g.has_vertex(dst)) {
        throw std::out_of_range("shortest_path: endpoint out of range");
    }
    if (src == dst) {
        return {src};
    }
    std::vector<int> parent(g.vertex_count(), -1);
    std::queue<int> queue;
    parent[src] = src;
    queue.push(src);
    while (!queue.empty()) {
        const int cur = queue.front();
        queue.pop();
        if (cur == dst) {
            break;
        }
        for (int nb : g.neighbors(cur)) {
            if (parent[nb] < 0) {
                parent[nb] = cur;
                queue.push(nb);
            }
        }
    }
    if (parent[dst] < 0) {
        throw std::runtime_error("shortest_path: destination unreachable");
    }
    std::vector<int> path;
    for (int v = dst; v != src; v = parent[v]) {
        path.push_back(v);
    }
    path.push_back(src);
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace mpp
