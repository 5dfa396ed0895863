#include "mpp/instance.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "mpp/rng.hpp"

namespace mpp {

void Instance::check() const {
    if (starts.size() != goals.size()) {
        throw std::invalid_argument("instance: start/goal count mismatch");
    }
    if (robot_count() > graph.vertex_count()) {
        throw std::invalid_argument("instance: more robots than vertices");
    }
    std::unordered_set<int> seen;
    for (int v : starts) {
        if (!graph.has_vertex(v)) {
            throw std::invalid_argument("instance: start vertex out of range");
        }
        if (!seen.insert(v).second) {
            throw std::invalid_argument("instance: duplicate start vertex");
        }
    }
    seen.clear();
    for (int v : goals) {
        if (!graph.has_vertex(v)) {
            throw std::invalid_argument("instance: goal vertex out of range");
        }
        if (!seen.insert(v).second) {
            throw std::invalid_argument("instance: duplicate goal vertex");
        }
    }
}

Instance generate_instance(const Graph& g, int n, uint64_t seed) {
    if (n < 1 || n > g.vertex_count()) {
        throw std::invalid_argument("generate_instance: robot count out of range");
    }
    Rng rng(seed);
    std::vector<int> vertices(g.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v) {
        vertices[v] = v;
    }
    Instance inst;
    inst.graph = g;
    shuffle_values(vertices, rng);
    inst.starts.assign(vertices.begin(), vertices.begin() + n);
    for (int v = 0; v < g.vertex_count(); ++v) {
        vertices[v] = v;
    }
    shuffle_values(vertices, rng);
    inst.goals.assign(vertices.begin(), vertices.begin() + n);
    inst.check();
    return inst;
}

namespace {

// Line-oriented reader that strips '#' comments and blank lines while
// tracking source line numbers for error reports.
class LineReader {
public:
    explicit LineReader(const std::string& text) : stream_(text) {}

    bool next(std::string& out) {
        std::string raw;
        while (std::getline(stream_, raw)) {
            ++line_;
            const size_t hash = raw.find('#');
            if (hash != std::string::npos) {
                raw.erase(hash);
            }
            while (!raw.empty() && (raw.back() == '\r' || raw.back() == ' ' || raw.back() == '\t')) {
                raw.pop_back();
            }
            size_t begin = raw.find_first_not_of(" \t");
            if (begin == std::string::npos) {
                continue;
            }
            out = raw.substr(begin);
            return true;
        }
        return false;
    }

    int line() const { return line_; }

private:
    std::istringstream stream_;
    int line_ = 0;
};

std::vector<long long> parse_fields(const std::string& text, int line) {
    std::istringstream in(text);
    std::vector<long long> values;
    long long v;
    while (in >> v) {
        values.push_back(v);
    }
    if (!in.eof()) {
        throw ParseError(line, "expected integer fields, got '" + text + "'");
    }
    return values;
}

std::string expect_line(LineReader& reader, const char* what) {
    std::string line;
    if (!reader.next(line)) {
        throw ParseError(reader.line() + 1, std::string("unexpected end of file, expected ") + what);
    }
    return line;
}

long long expect_count(LineReader& reader, const std::string& keyword) {
    const std::string line = expect_line(reader, keyword.c_str());
    std::istringstream in(line);
    std::string word;
    long long count = -1;
    in >> word >> count;
    if (word != keyword || count < 0 || !in.eof()) {
        throw ParseError(reader.line(), "expected '" + keyword + " <count>', got '" + line + "'");
    }
    return count;
}

}  // namespace

Instance parse_instance(const std::string& text) {
    LineReader reader(text);
    const std::string header = expect_line(reader, "'mpp 1' header");
    if (header != "mpp 1") {
        throw ParseError(reader.line(), "malformed header, expected 'mpp 1'");
    }
    const long long vertex_count = expect_count(reader, "vertices");
    const long long edge_count = expect_count(reader, "edges");

    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<size_t>(edge_count));
    for (long long i = 0; i < edge_count; ++i) {
        const std::string line = expect_line(reader, "edge line");
        const auto fields = parse_fields(line, reader.line());
        if (fields.size() != 2) {
            throw ParseError(reader.line(), "edge line must hold exactly 'u v'");
        }
        const long long u = fields[0];
        const long long v = fields[1];
        if (u < 0 || v < 0 || u >= vertex_count || v >= vertex_count) {
            throw ParseError(reader.line(), "edge references unknown vertex");
        }
        if (u >= v) {
            throw ParseError(reader.line(), "edges must satisfy u < v");
        }
        edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
    }

    const long long robot_count = expect_count(reader, "robots");
    Instance inst;
    inst.starts.reserve(static_cast<size_t>(robot_count));
    inst.goals.reserve(static_cast<size_t>(robot_count));
    std::unordered_set<long long> start_seen;
    std::unordered_set<long long> goal_seen;
    for (long long i = 0; i < robot_count; ++i) {
        const std::string line = expect_line(reader, "robot line");
        const auto fields = parse_fields(line, reader.line());
        if (fields.size() != 2) {
            throw ParseError(reader.line(), "robot line must hold exactly 'start goal'");
        }
        for (long long v : fields) {
            if (v < 0 || v >= vertex_count) {
                throw ParseError(reader.line(), "robot references unknown vertex");
            }
        }
        if (!start_seen.insert(fields[0]).second) {
            throw ParseError(reader.line(), "start configuration is not injective");
        }
        if (!goal_seen.insert(fields[1]).second) {
            throw ParseError(reader.line(), "goal configuration is not injective");
        }
        inst.starts.push_back(static_cast<int>(fields[0]));
        inst.goals.push_back(static_cast<int>(fields[1]));
    }

    std::optional<GridMeta> meta;
    std::string trailer;
    if (reader.next(trailer)) {
        std::istringstream in(trailer);
        std::string word;
        GridMeta grid;
        in >> word >> grid.rows >> grid.cols;
        if (word != "grid" || grid.rows < 1 || grid.cols < 1 || !in.eof()) {
            throw ParseError(reader.line(), "expected 'grid <rows> <cols>' trailer");
        }
        const long long removed = expect_count(reader, "removed");
        for (long long i = 0; i < removed; ++i) {
            const std::string line = expect_line(reader, "removed cell line");
            const auto fields = parse_fields(line, reader.line());
            if (fields.size() != 1 || fields[0] < 0 ||
                fields[0] >= static_cast<long long>(grid.rows) * grid.cols) {
                throw ParseError(reader.line(), "invalid removed cell index");
            }
            grid.removed_cells.push_back(static_cast<int>(fields[0]));
        }
        std::sort(grid.removed_cells.begin(), grid.removed_cells.end());
        if (static_cast<long long>(grid.rows) * grid.cols - static_cast<long long>(grid.removed_cells.size()) !=
            vertex_count) {
            throw ParseError(reader.line(), "grid trailer does not match vertex count");
        }
        meta = std::move(grid);
        if (reader.next(trailer)) {
            throw ParseError(reader.line(), "unexpected trailing content");
        }
    }

    int parse_line = reader.line();
    try {
        inst.graph = Graph(static_cast<int>(vertex_count), std::move(edges), std::move(meta));
        inst.check();
    } catch (const std::invalid_argument& e) {
        throw ParseError(parse_line, e.what());
    }
    if (!inst.graph.connected()) {
        throw ParseError(parse_line, "graph is disconnected");
    }
    return inst;
}

std::string serialize_instance(const Instance& inst) {
    std::ostringstream out;
    out << "mpp 1\n";
    out << "vertices " << inst.graph.vertex_count() << "\n";
    out << "edges " << inst.graph.edge_count() << "\n";
    for (const auto& [u, v] : inst.graph.edges()) {
        out << u << " " << v << "\n";
    }
    out << "robots " << inst.robot_count() << "\n";
    for (int i = 0; i < inst.robot_count(); ++i) {
        out << inst.starts[i] << " " << inst.goals[i] << "\n";
    }
    if (inst.graph.grid()) {
        const GridMeta& grid = *inst.graph.grid();
        out << "grid " << grid.rows << " " << grid.cols << "\n";
        out << "removed " << grid.removed_cells.size() << "\n";
        for (int cell : grid.removed_cells) {
            out << cell << "\n";
        }
    }
    return out.str();
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open instance file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_instance(buffer.str());
}

void save_instance(const Instance& inst, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write instance file: " + path);
    }
    out << serialize_instance(inst);
}

}  // namespace mpp
