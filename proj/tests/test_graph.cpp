#include <doctest.h>

#include <algorithm>
#include <set>

#include "mpp/graph.hpp"

using namespace mpp;

namespace {

// Independent all-pairs hop distances by plain adjacency-matrix BFS.
std::vector<std::vector<int>> all_pairs_bfs(const Graph& g) {
    const int n = g.vertex_count();
    std::vector<std::vector<int>> dist(n, std::vector<int>(n, -1));
    for (int s = 0; s < n; ++s) {
        std::vector<int> frontier{s};
        dist[s][s] = 0;
        int level = 0;
        while (!frontier.empty()) {
            ++level;
            std::vector<int> next;
            for (int v : frontier) {
                for (int u = 0; u < n; ++u) {
                    if (g.has_edge(v, u) && dist[s][u] < 0) {
                        dist[s][u] = level;
                        next.push_back(u);
                    }
                }
            }
            frontier = std::move(next);
        }
    }
    return dist;
}

}  // namespace

TEST_CASE("grid construction counts") {
    const Graph g33 = make_grid(3, 3);
    CHECK(g33.vertex_count() == 9);
    CHECK(g33.edge_count() == 12);

    const Graph g11 = make_grid(1, 1);
    CHECK(g11.vertex_count() == 1);
    CHECK(g11.edge_count() == 0);

    const Graph big = make_grid(18, 24);
    CHECK(big.vertex_count() == 432);
    CHECK(big.edge_count() == 822);
    CHECK(big.connected());
}

TEST_CASE("grid vertex indexing is row-major") {
    const Graph g = make_grid(2, 3);
    CHECK(g.has_edge(0, 1));
    CHECK(g.has_edge(0, 3));
    CHECK(!g.has_edge(2, 3));  // row wrap is not an edge
}

TEST_CASE("obstacle removal hits the quota and stays connected") {
    const Graph base = make_grid(18, 24);
    const Graph holey = remove_obstacles(base, 0.25, 7);
    CHECK(holey.vertex_count() == 324);
    CHECK(holey.connected());
    REQUIRE(holey.grid().has_value());
    CHECK(holey.grid()->removed_cells.size() == 108);

    const Graph small = remove_obstacles(make_grid(3, 3), 0.25, 1);
    CHECK(small.vertex_count() == 7);
    CHECK(small.connected());
}

TEST_CASE("zero fraction is the identity") {
    const Graph base = make_grid(4, 4);
    const Graph same = remove_obstacles(base, 0.0, 99);
    CHECK(same.vertex_count() == base.vertex_count());
    CHECK(same.edges() == base.edges());
}

TEST_CASE("obstacle removal is deterministic per seed") {
    const Graph base = make_grid(8, 8);
    const Graph a = remove_obstacles(base, 0.2, 1234);
    const Graph b = remove_obstacles(base, 0.2, 1234);
    CHECK(a.edges() == b.edges());
    CHECK(a.grid()->removed_cells == b.grid()->removed_cells);
    const Graph c = remove_obstacles(base, 0.2, 1235);
    CHECK(a.grid()->removed_cells != c.grid()->removed_cells);
}

TEST_CASE("shortest path basics") {
    const Graph g = make_grid(3, 3);
    const auto corner = shortest_path(g, 0, 8);
    CHECK(corner.size() == 5);  // length 4
    CHECK(corner.front() == 0);
    CHECK(corner.back() == 8);

    const auto self = shortest_path(g, 4, 4);
    CHECK(self == std::vector<int>{4});

    const Graph p3(3, {{0, 1}, {1, 2}});
    CHECK(shortest_path(p3, 0, 2) == std::vector<int>{0, 1, 2});

    CHECK_THROWS_AS(shortest_path(g, 0, 9), std::out_of_range);
}

TEST_CASE("shortest path length matches all-pairs BFS on random holey grids") {
    for (uint64_t seed = 1; seed <= 4; ++seed) {
        const Graph g = remove_obstacles(make_grid(5, 6), 0.2, seed);
        const auto dist = all_pairs_bfs(g);
        for (int s = 0; s < g.vertex_count(); ++s) {
            for (int t = 0; t < g.vertex_count(); ++t) {
                const auto path = shortest_path(g, s, t);
                CHECK(static_cast<int>(path.size()) - 1 == dist[s][t]);
                for (size_t k = 0; k + 1 < path.size(); ++k) {
                    CHECK(g.has_edge(path[k], path[k + 1]));
                }
            }
        }
    }
}

TEST_CASE("graph constructor rejects malformed input") {
    CHECK_THROWS_AS(Graph(2, {{0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(Graph(2, {{0, 1}, {1, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(Graph(2, {{0, 2}}), std::invalid_argument);
}
