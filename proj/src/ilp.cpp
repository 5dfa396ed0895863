#include "mpp/ilp.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace mpp {

int IlpModel::add_variable(std::string name, VarKind kind, long long lower, long long upper) {
    if (lower > upper) {
        throw std::invalid_argument("ilp: empty variable domain for " + name);
    }
    variables.push_back(IlpVariable{std::move(name), kind, lower, upper});
    var_origin.emplace_back(-1, -1);
    return static_cast<int>(variables.size()) - 1;
}

void IlpModel::add_constraint(std::string name, std::vector<std::pair<int, long long>> terms,
                              RowSense sense, long long rhs) {
    // Merge duplicate variables and drop zero coefficients.
    std::sort(terms.begin(), terms.end());
    std::vector<std::pair<int, long long>> merged;
    for (const auto& [var, coef] : terms) {
        if (!merged.empty() && merged.back().first == var) {
            merged.back().second += coef;
        } else {
            merged.emplace_back(var, coef);
        }
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [](const auto& t) { return t.second == 0; }),
                 merged.end());
    if (merged.empty()) {
        const bool holds = sense == RowSense::le   ? 0 <= rhs
                           : sense == RowSense::eq ? rhs == 0
                                                   : 0 >= rhs;
        if (!holds) {
            trivially_infeasible = true;
        }
        return;
    }
    constraints.push_back(IlpConstraint{std::move(name), std::move(merged), sense, rhs});
}

long long IlpModel::eval_objective(const std::vector<long long>& assignment) const {
    long long value = objective_offset;
    for (const auto& [var, coef] : objective) {
        value += coef * assignment[var];
    }
    return value;
}

bool IlpModel::satisfies(const std::vector<long long>& assignment) const {
    if (assignment.size() != variables.size()) {
        return false;
    }
    for (size_t v = 0; v < variables.size(); ++v) {
        if (assignment[v] < variables[v].lower || assignment[v] > variables[v].upper) {
            return false;
        }
    }
    for (const auto& row : constraints) {
        long long lhs = 0;
        for (const auto& [var, coef] : row.terms) {
            lhs += coef * assignment[var];
        }
        const bool ok = row.sense == RowSense::le   ? lhs <= row.rhs
                        : row.sense == RowSense::eq ? lhs == row.rhs
                                                    : lhs >= row.rhs;
        if (!ok) {
            return false;
        }
    }
    return true;
}

namespace {

std::string var_name(int robot, int arc) {
    return "x_" + std::to_string(robot) + "_" + std::to_string(arc);
}

// Flow variables, shared-arc capacity rows and per-robot circulation
// conservation rows; common to all four objectives.
IlpModel build_flow_base(const TimeExpandedNetwork& net, const UsableArcs& usable,
                         const Instance& inst) {
    const int n = inst.robot_count();
    const int arc_count = static_cast<int>(net.arcs.size());
    if (static_cast<int>(usable.size()) != n) {
        throw std::invalid_argument("ilp: usable arc sets do not match robot count");
    }
    IlpModel model;
    model.var_of_arc.assign(n, std::vector<int>(arc_count, -1));
    for (int i = 0; i < n; ++i) {
        bool any = false;
        for (int a = 0; a < arc_count; ++a) {
            if (!usable[i][a]) {
                continue;
            }
            if (net.arcs[a].kind == ArcKind::loopback && a != net.loopback_arc(i)) {
                continue;  // cross-robot loopback variables are never created
            }
            const int var = model.add_variable(var_name(i, a), VarKind::binary, 0, 1);
            model.var_of_arc[i][a] = var;
            model.var_origin[var] = {i, a};
            any = true;
        }
        if (!any || model.var_of_arc[i][net.loopback_arc(i)] < 0) {
            model.trivially_infeasible = true;
        }
    }

    for (int a = 0; a < arc_count; ++a) {
        std::vector<std::pair<int, long long>> terms;
        for (int i = 0; i < n; ++i) {
            if (model.var_of_arc[i][a] >= 0) {
                terms.emplace_back(model.var_of_arc[i][a], 1);
            }
        }
        if (terms.size() >= 2) {
            model.add_constraint("cap_" + std::to_string(a), std::move(terms), RowSense::le,
                                 net.arcs[a].capacity);
        }
    }

    // Conservation at every node of G' (the loopback makes each robot's flow
    // a circulation, so there are no terminal exceptions).
    std::vector<std::vector<std::pair<int, long long>>> rows(net.node_count);
    std::vector<int> touched;
    for (int i = 0; i < n; ++i) {
        touched.clear();
        for (int a = 0; a < arc_count; ++a) {
            const int var = model.var_of_arc[i][a];
            if (var < 0) {
                continue;
            }
            const Arc& arc = net.arcs[a];
            if (rows[arc.head].empty()) {
                touched.push_back(arc.head);
            }
            rows[arc.head].emplace_back(var, 1);
            if (rows[arc.tail].empty()) {
                touched.push_back(arc.tail);
            }
            rows[arc.tail].emplace_back(var, -1);
        }
        std::sort(touched.begin(), touched.end());
        for (int node : touched) {
            model.add_constraint("cons_" + std::to_string(i) + "_" + std::to_string(node),
                                 std::move(rows[node]), RowSense::eq, 0);
            rows[node].clear();
        }
    }
    return model;
}

void add_forced_flow(IlpModel& model, const TimeExpandedNetwork& net, const Instance& inst) {
    for (int i = 0; i < inst.robot_count(); ++i) {
        const int var = model.var_of_arc[i][net.loopback_arc(i)];
        if (var < 0) {
            model.trivially_infeasible = true;
            continue;
        }
        model.add_constraint("force_" + std::to_string(i), {{var, 1}}, RowSense::eq, 1);
    }
}

// x_i^t: hold arc on the goal vertex across step t-1 -> t, meaning the robot
// sits at its goal at both ends of the step. The and-chain over these gives
// sum_t y_i^t = T - t_i exactly, for arrivals at any time including 0.
void fill_goal_hold_vars(IlpModel& model, const TimeExpandedNetwork& net, const Instance& inst) {
    const int n = inst.robot_count();
    const int T = net.horizon;
    model.goal_hold_var.assign(n, std::vector<int>(static_cast<size_t>(T) + 1, -1));
    for (int i = 0; i < n; ++i) {
        for (int t = 1; t <= T; ++t) {
            const int arc = net.hold_arc(t - 1, inst.goals[i]);
            model.goal_hold_var[i][t] = model.var_of_arc[i][arc];
        }
    }
}

}  // namespace

IlpModel build_makespan_model(const TimeExpandedNetwork& net, const UsableArcs& usable,
                              const Instance& inst) {
    IlpModel model = build_flow_base(net, usable, inst);
    model.objective_sense = ObjSense::maximize;
    for (int i = 0; i < inst.robot_count(); ++i) {
        const int var = model.var_of_arc[i][net.loopback_arc(i)];
        if (var >= 0) {
            model.objective.emplace_back(var, 1);
        }
    }
    return model;
}

IlpModel build_maxdist_model(const TimeExpandedNetwork& net, const UsableArcs& usable,
                             const Instance& inst) {
    IlpModel model = build_flow_base(net, usable, inst);
    add_forced_flow(model, net, inst);
    model.max_var = model.add_variable("xmax", VarKind::bounded_integer, 0, net.horizon);
    for (int i = 0; i < inst.robot_count(); ++i) {
        std::vector<std::pair<int, long long>> terms;
        for (int a = net.robot_count; a < static_cast<int>(net.arcs.size()); ++a) {
            const int var = model.var_of_arc[i][a];
            if (var >= 0 && net.arcs[a].cost != 0) {
                terms.emplace_back(var, net.arcs[a].cost);
            }
        }
        terms.emplace_back(model.max_var, -1);
        model.add_constraint("dist_" + std::to_string(i), std::move(terms), RowSense::le, 0);
    }
    model.objective_sense = ObjSense::minimize;
    model.objective.emplace_back(model.max_var, 1);
    return model;
}

IlpModel build_totaltime_model(const TimeExpandedNetwork& net, const UsableArcs& usable,
                               const Instance& inst) {
    IlpModel model = build_flow_base(net, usable, inst);
    add_forced_flow(model, net, inst);
    fill_goal_hold_vars(model, net, inst);
    const int n = inst.robot_count();
    const int T = net.horizon;
    model.stay_var.assign(n, std::vector<int>(static_cast<size_t>(T) + 1, -1));
    model.objective_sense = ObjSense::minimize;
    model.objective_offset = static_cast<long long>(n) * T;
    for (int i = 0; i < n; ++i) {
        // y_i^T is x_i^T itself; below T each y needs both its x and the next y.
        int next_y = model.goal_hold_var[i][T];
        if (next_y < 0) {
            continue;
        }
        model.stay_var[i][T] = next_y;
        model.objective.emplace_back(next_y, -1);
        for (int t = T - 1; t >= 1; --t) {
            const int x = model.goal_hold_var[i][t];
            if (x < 0) {
                break;  // y_i^t is identically 0 from here down
            }
            const std::string suffix = "_" + std::to_string(i) + "_" + std::to_string(t);
            const int y = model.add_variable("y" + suffix, VarKind::binary, 0, 1);
            model.stay_var[i][t] = y;
            model.add_constraint("and1" + suffix, {{y, 1}, {next_y, -1}, {x, -1}}, RowSense::ge,
                                 -1);
            model.add_constraint("and2" + suffix, {{y, 1}, {next_y, -1}}, RowSense::le, 0);
            model.add_constraint("and3" + suffix, {{y, 1}, {x, -1}}, RowSense::le, 0);
            model.objective.emplace_back(y, -1);
            next_y = y;
        }
    }
    return model;
}

IlpModel build_totaldist_model(const TimeExpandedNetwork& net, const UsableArcs& usable,
                               const Instance& inst) {
    IlpModel model = build_flow_base(net, usable, inst);
    add_forced_flow(model, net, inst);
    model.objective_sense = ObjSense::minimize;
    for (int i = 0; i < inst.robot_count(); ++i) {
        for (int a = net.robot_count; a < static_cast<int>(net.arcs.size()); ++a) {
            const int var = model.var_of_arc[i][a];
            if (var >= 0 && net.arcs[a].cost != 0) {
                model.objective.emplace_back(var, net.arcs[a].cost);
            }
        }
    }
    return model;
}

void add_compact_collision_constraints(IlpModel& model, const TimeExpandedNetwork& net,
                                       const Instance& inst) {
    if (net.encoding != Encoding::compact) {
        throw std::logic_error(
            "add_compact_collision_constraints: network is not compactly encoded");
    }
    const int n = inst.robot_count();
    const int E = static_cast<int>(net.edges.size());
    for (int t = 0; t < net.horizon; ++t) {
        for (int e = 0; e < E; ++e) {
            const int* slots = net.gadget_arcs(t, e);
            std::vector<std::pair<int, long long>> terms;
            for (int i = 0; i < n; ++i) {
                for (int d = 0; d < 2; ++d) {
                    const int var = model.var_of_arc[i][slots[d]];
                    if (var >= 0) {
                        terms.emplace_back(var, 1);
                    }
                }
            }
            if (!terms.empty()) {
                model.add_constraint("ho_" + std::to_string(e) + "_" + std::to_string(t),
                                     std::move(terms), RowSense::le, 1);
            }
        }
        for (int v = 0; v < net.vertex_count; ++v) {
            // At most one robot leaves v(t) over move and hold arcs.
            std::vector<std::pair<int, long long>> terms;
            for (int a : net.arcs_out(net.entry_node(v, t))) {
                for (int i = 0; i < n; ++i) {
                    const int var = model.var_of_arc[i][a];
                    if (var >= 0) {
                        terms.emplace_back(var, 1);
                    }
                }
            }
            if (!terms.empty()) {
                model.add_constraint("meet_" + std::to_string(v) + "_" + std::to_string(t),
                                     std::move(terms), RowSense::le, 1);
            }
        }
    }
}

namespace {

void append_terms(std::ostringstream& out, const std::vector<std::pair<int, long long>>& terms,
                  const std::vector<IlpVariable>& variables, bool leading) {
    bool first = leading;
    for (const auto& [var, coef] : terms) {
        long long magnitude = coef;
        if (first) {
            if (coef < 0) {
                out << "- ";
                magnitude = -coef;
            }
            first = false;
        } else {
            out << (coef < 0 ? " - " : " + ");
            magnitude = coef < 0 ? -coef : coef;
        }
        if (magnitude != 1) {
            out << magnitude << " ";
        }
        out << variables[var].name;
    }
}

}  // namespace

std::string export_lp(const IlpModel& model) {
    std::ostringstream out;
    out << (model.objective_sense == ObjSense::maximize ? "Maximize" : "Minimize") << "\n";
    out << " obj:";
    if (model.objective.empty() && model.objective_offset == 0) {
        out << " 0";
    } else {
        if (!model.objective.empty()) {
            out << " ";
            append_terms(out, model.objective, model.variables, true);
        }
        if (model.objective_offset != 0) {
            if (model.objective.empty()) {
                out << " " << model.objective_offset;
            } else if (model.objective_offset > 0) {
                out << " + " << model.objective_offset;
            } else {
                out << " - " << -model.objective_offset;
            }
        }
    }
    out << "\n";
    out << "Subject To\n";
    for (const auto& row : model.constraints) {
        out << " " << row.name << ": ";
        append_terms(out, row.terms, model.variables, true);
        out << (row.sense == RowSense::le ? " <= " : row.sense == RowSense::eq ? " = " : " >= ");
        out << row.rhs << "\n";
    }
    bool any_bounds = false;
    for (const auto& var : model.variables) {
        if (var.kind == VarKind::bounded_integer) {
            any_bounds = true;
        }
    }
    if (any_bounds) {
        out << "Bounds\n";
        for (const auto& var : model.variables) {
            if (var.kind == VarKind::bounded_integer) {
                out << " " << var.lower << " <= " << var.name << " <= " << var.upper << "\n";
            }
        }
    }
    bool any_binary = false;
    bool any_general = false;
    for (const auto& var : model.variables) {
        (var.kind == VarKind::binary ? any_binary : any_general) = true;
    }
    if (any_binary) {
        out << "Binary\n";
        for (const auto& var : model.variables) {
            if (var.kind == VarKind::binary) {
                out << " " << var.name << "\n";
            }
        }
    }
    if (any_general) {
        out << "General\n";
        for (const auto& var : model.variables) {
            if (var.kind == VarKind::bounded_integer) {
                out << " " << var.name << "\n";
            }
        }
    }
    out << "End\n";
    return out.str();
}

namespace {

struct LpToken {
    enum class Kind { word, number, sign, sense, colon } kind;
    std::string text;
    long long number = 0;
};

std::vector<LpToken> lp_tokenize(const std::string& text) {
    std::vector<LpToken> tokens;
    size_t pos = 0;
    while (pos < text.size()) {
        const char c = text[pos];
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            ++pos;
            continue;
        }
        if (c == '\\') {  // comment to end of line
            while (pos < text.size() && text[pos] != '\n') {
                ++pos;
            }
            continue;
        }
        if (c == ':') {
            tokens.push_back({LpToken::Kind::colon, ":"});
            ++pos;
            continue;
        }
        if (c == '+' || c == '-') {
            tokens.push_back({LpToken::Kind::sign, std::string(1, c)});
            ++pos;
            continue;
        }
        if (c == '<' || c == '>' || c == '=') {
            std::string sense(1, c);
            ++pos;
            if (pos < text.size() && text[pos] == '=') {
                sense += '=';
                ++pos;
            }
            tokens.push_back({LpToken::Kind::sense, sense});
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t end = pos;
            while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) {
                ++end;
            }
            LpToken token{LpToken::Kind::number, text.substr(pos, end - pos)};
            token.number = std::stoll(token.text);
            tokens.push_back(token);
            pos = end;
            continue;
        }
        size_t end = pos;
        while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end])) &&
               text[end] != ':' && text[end] != '+' && text[end] != '-' && text[end] != '<' &&
               text[end] != '>' && text[end] != '=') {
            ++end;
        }
        tokens.push_back({LpToken::Kind::word, text.substr(pos, end - pos)});
        pos = end;
    }
    return tokens;
}

bool is_keyword(const LpToken& token, const char* keyword) {
    return token.kind == LpToken::Kind::word && token.text == keyword;
}

}  // namespace

IlpModel parse_lp(const std::string& text) {
    const std::vector<LpToken> tokens = lp_tokenize(text);
    size_t pos = 0;
    auto fail = [&](const std::string& message) -> std::runtime_error {
        return std::runtime_error("lp parse: " + message);
    };
    auto at_section = [&]() {
        if (pos >= tokens.size() || tokens[pos].kind != LpToken::Kind::word) {
            return false;
        }
        const std::string& w = tokens[pos].text;
        if ((w == "Subject" || w == "SUBJECT") && pos + 1 < tokens.size() &&
            (tokens[pos + 1].text == "To" || tokens[pos + 1].text == "TO")) {
            return true;
        }
        return w == "Bounds" || w == "Binary" || w == "General" || w == "End";
    };

    IlpModel model;
    if (pos >= tokens.size()) {
        throw fail("empty file");
    }
    if (is_keyword(tokens[pos], "Maximize") || is_keyword(tokens[pos], "MAXIMIZE")) {
        model.objective_sense = ObjSense::maximize;
    } else if (is_keyword(tokens[pos], "Minimize") || is_keyword(tokens[pos], "MINIMIZE")) {
        model.objective_sense = ObjSense::minimize;
    } else {
        throw fail("expected Maximize or Minimize");
    }
    ++pos;

    // First pass over the trailing sections to declare variables in order.
    std::unordered_map<std::string, int> var_index;
    {
        size_t scan = pos;
        int section = 0;  // 1 binary, 2 general, 3 bounds
        std::map<std::string, std::pair<long long, long long>> bounds;
        std::vector<std::pair<std::string, VarKind>> declared;
        while (scan < tokens.size()) {
            const LpToken& token = tokens[scan];
            if (is_keyword(token, "Binary")) {
                section = 1;
            } else if (is_keyword(token, "General")) {
                section = 2;
            } else if (is_keyword(token, "Bounds")) {
                section = 3;
            } else if (is_keyword(token, "End") || is_keyword(token, "Subject")) {
                section = 0;
            } else if (section == 1 && token.kind == LpToken::Kind::word) {
                declared.emplace_back(token.text, VarKind::binary);
            } else if (section == 2 && token.kind == LpToken::Kind::word) {
                declared.emplace_back(token.text, VarKind::bounded_integer);
            } else if (section == 3) {
                // lo <= name <= hi
                if (token.kind == LpToken::Kind::number && scan + 4 < tokens.size() &&
                    tokens[scan + 1].kind == LpToken::Kind::sense &&
                    tokens[scan + 2].kind == LpToken::Kind::word &&
                    tokens[scan + 3].kind == LpToken::Kind::sense &&
                    tokens[scan + 4].kind == LpToken::Kind::number) {
                    bounds[tokens[scan + 2].text] = {token.number, tokens[scan + 4].number};
                    scan += 4;
                }
            }
            ++scan;
        }
        for (auto& [name, kind] : declared) {
            if (var_index.count(name)) {
                throw fail("variable declared twice: " + name);
            }
            long long lower = 0;
            long long upper = 1;
            if (kind == VarKind::bounded_integer) {
                const auto it = bounds.find(name);
                if (it == bounds.end()) {
                    throw fail("integer variable without bounds: " + name);
                }
                lower = it->second.first;
                upper = it->second.second;
            }
            var_index[name] = model.add_variable(name, kind, lower, upper);
        }
    }

    auto parse_expression = [&](std::vector<std::pair<int, long long>>& terms,
                                long long& constant) {
        constant = 0;
        while (pos < tokens.size() && !at_section() &&
               tokens[pos].kind != LpToken::Kind::sense) {
            long long sign = 1;
            if (tokens[pos].kind == LpToken::Kind::sign) {
                sign = tokens[pos].text == "-" ? -1 : 1;
                ++pos;
            }
            long long coef = 1;
            bool saw_number = false;
            if (pos < tokens.size() && tokens[pos].kind == LpToken::Kind::number) {
                coef = tokens[pos].number;
                saw_number = true;
                ++pos;
            }
            if (pos < tokens.size() && tokens[pos].kind == LpToken::Kind::word && !at_section()) {
                const auto it = var_index.find(tokens[pos].text);
                if (it == var_index.end()) {
                    throw fail("undeclared variable: " + tokens[pos].text);
                }
                terms.emplace_back(it->second, sign * coef);
                ++pos;
            } else if (saw_number) {
                constant += sign * coef;
            } else {
                throw fail("dangling sign in expression");
            }
        }
    };

    // Objective: optional 'obj:' label then expression.
    if (pos + 1 < tokens.size() && tokens[pos].kind == LpToken::Kind::word &&
        tokens[pos + 1].kind == LpToken::Kind::colon) {
        pos += 2;
    }
    parse_expression(model.objective, model.objective_offset);
    // A bare '0' objective parses as offset 0; normalize.
    if (!is_keyword(tokens[pos], "Subject") && !is_keyword(tokens[pos], "SUBJECT")) {
        throw fail("expected Subject To after objective");
    }
    pos += 2;

    while (pos < tokens.size() && !at_section()) {
        if (tokens[pos].kind != LpToken::Kind::word || pos + 1 >= tokens.size() ||
            tokens[pos + 1].kind != LpToken::Kind::colon) {
            throw fail("constraint rows must be named");
        }
        IlpConstraint row;
        row.name = tokens[pos].text;
        pos += 2;
        long long constant = 0;
        parse_expression(row.terms, constant);
        if (pos >= tokens.size() || tokens[pos].kind != LpToken::Kind::sense) {
            throw fail("constraint " + row.name + " lacks a sense");
        }
        const std::string sense = tokens[pos].text;
        row.sense = sense == "<=" || sense == "<"   ? RowSense::le
                    : sense == ">=" || sense == ">" ? RowSense::ge
                                                    : RowSense::eq;
        ++pos;
        long long sign = 1;
        if (pos < tokens.size() && tokens[pos].kind == LpToken::Kind::sign) {
            sign = tokens[pos].text == "-" ? -1 : 1;
            ++pos;
        }
        if (pos >= tokens.size() || tokens[pos].kind != LpToken::Kind::number) {
            throw fail("constraint " + row.name + " lacks a right-hand side");
        }
        row.rhs = sign * tokens[pos].number - constant;
        ++pos;
        model.constraints.push_back(std::move(row));
    }

    // Remaining sections were handled in the first pass.
    bool saw_end = false;
    while (pos < tokens.size()) {
        if (is_keyword(tokens[pos], "End")) {
            saw_end = true;
        }
        ++pos;
    }
    if (!saw_end) {
        throw fail("missing End");
    }
    return model;
}

FlowAssignment flow_from_assignment(const IlpModel& model,
                                    const std::vector<long long>& assignment) {
    int robots = 0;
    for (const auto& [robot, arc] : model.var_origin) {
        robots = std::max(robots, robot + 1);
    }
    FlowAssignment flow;
    flow.arcs_of_robot.assign(robots, {});
    for (size_t var = 0; var < model.var_origin.size(); ++var) {
        const auto& [robot, arc] = model.var_origin[var];
        if (robot >= 0 && assignment[var] == 1) {
            flow.arcs_of_robot[robot].push_back(arc);
        }
    }
    for (auto& arcs : flow.arcs_of_robot) {
        std::sort(arcs.begin(), arcs.end());
    }
    return flow;
}

}  // namespace mpp
