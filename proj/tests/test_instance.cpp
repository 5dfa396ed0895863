#include <doctest.h>

#include <set>

#include "mpp/instance.hpp"

using namespace mpp;

TEST_CASE("generation draws distinct starts and goals") {
    const Graph g = make_grid(3, 3);
    const Instance puzzle = generate_instance(g, 9, 42);
    std::set<int> starts(puzzle.starts.begin(), puzzle.starts.end());
    std::set<int> goals(puzzle.goals.begin(), puzzle.goals.end());
    CHECK(starts.size() == 9);  // permutation of all vertices
    CHECK(goals.size() == 9);

    const Instance single = generate_instance(g, 1, 7);
    CHECK(single.robot_count() == 1);

    CHECK_THROWS_AS(generate_instance(g, 10, 1), std::invalid_argument);
}

TEST_CASE("generation is deterministic per seed") {
    const Graph g = make_grid(4, 4);
    const Instance a = generate_instance(g, 5, 99);
    const Instance b = generate_instance(g, 5, 99);
    CHECK(a.starts == b.starts);
    CHECK(a.goals == b.goals);
}

TEST_CASE("serialization round trip is the identity") {
    const Graph g = make_grid(2, 2);
    Instance inst;
    inst.graph = g;
    inst.starts = {0, 3};
    inst.goals = {3, 0};
    const std::string text = serialize_instance(inst);
    const Instance back = parse_instance(text);
    CHECK(back.starts == inst.starts);
    CHECK(back.goals == inst.goals);
    CHECK(back.graph.edges() == inst.graph.edges());
    CHECK(serialize_instance(back) == text);

    for (uint64_t seed = 1; seed <= 100; ++seed) {
        const Graph holey = remove_obstacles(make_grid(4, 5), 0.15, seed);
        const Instance random = generate_instance(holey, 6, seed);
        const Instance parsed = parse_instance(serialize_instance(random));
        CHECK(parsed.starts == random.starts);
        CHECK(parsed.goals == random.goals);
        CHECK(parsed.graph.edges() == random.graph.edges());
        CHECK(parsed.graph.grid()->removed_cells == random.graph.grid()->removed_cells);
    }
}

TEST_CASE("K2 serialization matches the format exactly") {
    Instance inst;
    inst.graph = Graph(2, {{0, 1}});
    inst.starts = {0};
    inst.goals = {1};
    CHECK(serialize_instance(inst) ==
          "mpp 1\n"
          "vertices 2\n"
          "edges 1\n"
          "0 1\n"
          "robots 1\n"
          "0 1\n");
}

TEST_CASE("parser reports line numbers") {
    const std::string dup_start =
        "mpp 1\n"
        "vertices 2\n"
        "edges 1\n"
        "0 1\n"
        "robots 2\n"
        "0 0\n"
        "0 1\n";
    try {
        parse_instance(dup_start);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 7);
        CHECK(std::string(e.what()).find("injective") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_instance("mpp 2\n"), ParseError);
    CHECK_THROWS_AS(parse_instance("mpp 1\nvertices 2\nedges 1\n0 5\nrobots 0\n"), ParseError);
    // Disconnected graph.
    CHECK_THROWS_AS(parse_instance("mpp 1\nvertices 3\nedges 1\n0 1\nrobots 1\n0 1\n"),
                    ParseError);
}

TEST_CASE("comments and blank lines are ignored") {
    const std::string text =
        "# benchmark instance\n"
        "mpp 1\n"
        "vertices 2   # tiny\n"
        "\n"
        "edges 1\n"
        "0 1\n"
        "robots 1\n"
        "0 1\n";
    const Instance inst = parse_instance(text);
    CHECK(inst.robot_count() == 1);
}
