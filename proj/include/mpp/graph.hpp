#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace mpp {

// Rendering metadata kept when a graph originates from a grid. Vertices are
// compacted after cell removal; cell_of_vertex recovers the original
// row-major cell index of each surviving vertex.
struct GridMeta {
    int rows = 0;
    int cols = 0;
    std::vector<int> removed_cells;  // sorted, original row-major indices

    std::vector<int> cell_of_vertex() const;
};

// Undirected simple graph. Edges are stored once with u < v, sorted;
// adjacency lists are sorted ascending, which fixes the tie-breaking order
// of every BFS in the library.
class Graph {
public:
    Graph() = default;
    Graph(int vertex_count, std::vector<std::pair<int, int>> edges,
          std::optional<GridMeta> grid = std::nullopt);

    int vertex_count() const { return vertex_count_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    const std::vector<int>& neighbors(int v) const;
    bool has_vertex(int v) const { return v >= 0 && v < vertex_count_; }
    bool has_edge(int u, int v) const;
    const std::optional<GridMeta>& grid() const { return grid_; }

    bool connected() const;

private:
    int vertex_count_ = 0;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> adj_;
    std::optional<GridMeta> grid_;
};

// rows x cols 4-connected grid; vertex index = row * cols + col.
Graph make_grid(int rows, int cols);

// Removes floor(fraction * |V|) vertices chosen by the seeded generator,
// rejecting draws that would disconnect the remainder. Gives up after
// 100 * |V| draws and throws.
Graph remove_obstacles(const Graph& g, double fraction, uint64_t seed);

// Breadth-first shortest path, deterministic via sorted adjacency.
std::vector<int> shortest_path(const Graph& g, int src, int dst);

// Hop distances from src; unreachable vertices get -1.
std::vector<int> bfs_distances(const Graph& g, int src);

}  // namespace mpp
