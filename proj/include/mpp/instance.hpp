#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mpp/graph.hpp"

namespace mpp {

// A labeled multi-robot routing problem: the arena graph plus injective
// start and goal configurations. Starts and goals may overlap across the
// two sets; within each set vertices are distinct.
struct Instance {
    Graph graph;
    std::vector<int> starts;  // robot index -> vertex
    std::vector<int> goals;   // robot index -> vertex

    int robot_count() const { return static_cast<int>(starts.size()); }
    void check() const;  // throws on invariant violation
};

struct ParseError : std::runtime_error {
    ParseError(int line_number, const std::string& message)
        : std::runtime_error("line " + std::to_string(line_number) + ": " + message),
          line(line_number) {}
    int line;
};

// Draws n distinct starts and, independently, n distinct goals uniformly.
Instance generate_instance(const Graph& g, int n, uint64_t seed);

Instance parse_instance(const std::string& text);
std::string serialize_instance(const Instance& inst);

Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);

}  // namespace mpp
